import sys

from minkcurve.tools.cli import main

if __name__ == "__main__":
    sys.exit(main())
