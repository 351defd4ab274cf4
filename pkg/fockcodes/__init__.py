# Copyright (c) [2026] PyFockCodes contributors. All rights reserved.
# This file is part of PyFockCodes.
# PyFockCodes is free software: you can redistribute it and/or modify
# it under the terms of the MIT License. You should have received a copy of
# the MIT License along with PyFockCodes.
# If not, see <https://opensource.org/licenses/MIT>.
#

from .errors import *
from .utils import *
from .simplex import *
from .bounds import *
from .classical_codes import *
from .fock_codes import *
from .kl_certifier import *
from .oracle_sim import *

__version__       = '0.1.0'
__author__        = 'PyFockCodes contributors'
__contributors__  = ['PyFockCodes contributors']
__date__          = '19.10.2026'
