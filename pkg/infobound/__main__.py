import sys

from infobound.main import main

sys.exit(main())
