import sys

from skbark.cli.commands import main


sys.exit(main())
