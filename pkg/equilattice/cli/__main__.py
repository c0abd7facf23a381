import sys

from equilattice.cli.main import main

sys.exit(main())
