import sys

from nnp.cli import main

sys.exit(main())
