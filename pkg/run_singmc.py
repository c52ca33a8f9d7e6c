# -*- coding: utf-8 -*-

import logging
import sys

from singmc import cli

level = logging.DEBUG if __debug__ else logging.WARNING
logging.basicConfig(level=level, force=True)
sys.exit(cli.main(configure_logging=False))
