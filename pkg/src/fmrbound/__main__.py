"""Allow `python -m fmrbound ...` to behave like the console script."""

import sys

from .sweep import main

if __name__ == "__main__":
    sys.exit(main())
