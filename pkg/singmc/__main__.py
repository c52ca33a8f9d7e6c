# -*- coding: utf-8 -*-
import sys

from singmc import cli

if __name__ == '__main__':
    sys.exit(cli.main())
