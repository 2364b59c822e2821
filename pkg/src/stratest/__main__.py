import sys

from stratest.cli import main

sys.exit(main())
