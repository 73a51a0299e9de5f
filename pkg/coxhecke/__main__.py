import sys

from coxhecke.cli import main

sys.exit(main())
