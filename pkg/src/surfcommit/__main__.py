import sys

from surfcommit.cli import main

sys.exit(main())
