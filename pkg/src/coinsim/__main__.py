import sys

from coinsim.cli import main

sys.exit(main())
