import sys

from lexgen.cli import main

sys.exit(main())
