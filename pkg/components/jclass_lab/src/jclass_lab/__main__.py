"""Allow `python -m jclass_lab`."""

import sys

from jclass_lab.main import main

sys.exit(main())
