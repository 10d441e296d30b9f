#!/usr/bin/env python
# -*- coding: utf-8 *-*


"""
    __init__.py file of the TrainCruise project.
    This file is empty for making import instruction
    way more explicit for reviewing the source code.
"""
