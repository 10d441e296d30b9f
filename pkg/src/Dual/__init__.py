#!/usr/bin/env python
# -*- coding: utf-8 *-*


"""
    __init__.py file of the Dual number.
    Allow importing the Dual class and its
    helpers directly from the Dual directory.
"""

# Allow importing the Dual class and its
# helpers directly from the Dual directory.
from .Dual import Dual, directional, log1p, value_of, variables
