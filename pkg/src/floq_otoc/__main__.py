import sys

from floq_otoc.cli import main

sys.exit(main())
