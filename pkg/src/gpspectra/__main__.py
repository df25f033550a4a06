import sys

from gpspectra.cli import main

sys.exit(main())
