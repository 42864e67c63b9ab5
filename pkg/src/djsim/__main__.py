import sys

from djsim.cli import main

sys.exit(main())
