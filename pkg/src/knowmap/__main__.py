import sys

from knowmap.cli import main

sys.exit(main())
