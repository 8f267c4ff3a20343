import sys

from cellgt.cli.main import main

sys.exit(main())
