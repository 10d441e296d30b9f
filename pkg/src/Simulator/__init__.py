#!/usr/bin/env python
# -*- coding: utf-8 *-*


"""
    __init__.py file of the Simulator.
    Allow importing the Simulator class and the
    scenario runner directly from the Simulator directory.
"""

# Allow importing the Simulator class and the
# scenario runner directly from the Simulator directory.
from .Simulator  import DisturbanceSource, Simulator, inject_disturbance, rk4_step, run_scenario
from .ClosedLoop import ClosedLoop, StepEvaluation
