import sys

from hydrobracket.frontend.cli import main

sys.exit(main())
