import sys

from detrelay.cli import main

sys.exit(main())
