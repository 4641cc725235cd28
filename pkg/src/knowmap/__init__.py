"""knowmap: bibliometric knowledge maps from bibliographic database exports."""

__version__ = "0.1.0"
