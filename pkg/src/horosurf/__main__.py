import sys

from horosurf.cli import main

sys.exit(main())
