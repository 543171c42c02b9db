import sys

from weylopt.harness import main

sys.exit(main())
