# -*- coding: utf-8 -*-

from .cli import main

import sys

sys.exit(main())
