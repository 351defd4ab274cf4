# __main__.py - Entry point of python -m fockcodes
#
# Copyright (c) [2026] PyFockCodes contributors. All rights reserved.
# This file is part of PyFockCodes.
# PyFockCodes is free software: you can redistribute it and/or modify
# it under the terms of the MIT License. You should have received a copy of
# the MIT License along with PyFockCodes.
# If not, see <https://opensource.org/licenses/MIT>.
#

import sys

from fockcodes.cli import main

sys.exit(main())
