import sys

from spinobs.cli import main

sys.exit(main())
