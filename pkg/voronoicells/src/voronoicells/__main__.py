import sys

from voronoicells.cli import main

sys.exit(main())
