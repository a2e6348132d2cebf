import sys

from conelaw.cli import main

sys.exit(main())
