import sys

from nzeb.cli import main

sys.exit(main())
