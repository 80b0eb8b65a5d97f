import sys

from qsu2.cli import main

sys.exit(main())
