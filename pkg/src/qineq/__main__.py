import sys

from qineq.cli import main

sys.exit(main())
