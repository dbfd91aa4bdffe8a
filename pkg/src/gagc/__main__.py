import sys

from gagc.cli import main

sys.exit(main())
