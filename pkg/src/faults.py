#!/usr/bin/env python
# -*- coding: utf-8 *-*


"""
    This file contains everything related to the
    actuator faults: the exosystem the observer
    assumes and the windowed constant / periodic
    faults injected into the carriages.

     ____________________________________________________
    | REFER TO THE MAIN.PY FILE FOR THE CHANGE DOC TABLE |
     ‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾
"""


# =--------------= #
# Libraries import #
# =--------------= #

from typing      import List, Optional, Sequence, Tuple
from dataclasses import dataclass, replace
from src.errors  import ConfigurationError, Violation
import numpy as np

# =-------------------------------------------------= #


# =--------------------------------------------------= #
# REFER TO THE MAIN.PY FILE FOR THE AUTHORSHIP SECTION #
# =--------------------------------------------------= #


# =--------------= #
# FaultModel class #
# =--------------= #

@dataclass(frozen=True)
class FaultModel:
    """
    Parameters of the fault acting on one actuator.
    f1 is a constant F_c inside window_const, (f2, f3) rotate
    with amplitude F_p inside window_periodic.
    """
    omega:           float = 1.0
    upsilon:         float = 2e5
    nu:              float = 2e5
    F_c:             float = 1.0
    F_p:             float = 1.0
    F_phi:           float = 0.0
    window_const:    Tuple[float, float] = (0.0, 0.0)
    window_periodic: Tuple[float, float] = (0.0, 0.0)

    def __post_init__(self) -> None:
        """Check the window ordering and the frequency sign."""

        # Gather every violated invariant.
        violations: List[Violation] = []
        if self.omega < 0:
            violations.append(Violation("omega >= 0", self.omega, 0.0))
        for name, window in (("window_const", self.window_const), ("window_periodic", self.window_periodic)):
            if len(window) != 2:
                raise ConfigurationError(f"{name} must hold exactly two times", field=name)
            if window[0] > window[1]:
                violations.append(Violation(f"{name} start <= end", window[0], window[1]))
        if violations:
            raise ConfigurationError("invalid fault model", violations)

    def snapped(self, step: float) -> 'FaultModel':
        """
        Return a copy whose window endpoints lie on the integration grid.

        :param float step: The integration step (s).
        :rtype: FaultModel
        """
        return replace(
            self,
            window_const=snap_window(self.window_const, step),
            window_periodic=snap_window(self.window_periodic, step)
        )

    @property
    def transitions(self) -> List[float]:
        """Sorted distinct endpoints of the non-empty windows with a non-zero amplitude."""
        times: List[float] = []
        for amplitude, window in ((self.F_c, self.window_const), (self.F_p, self.window_periodic)):
            if amplitude != 0 and window[0] < window[1]:
                times.extend(window)
        return sorted(set(times))

# =--------------------------------------------------------------------= #


# =------------------------= #
# Fault evaluation functions #
# =------------------------= #

def exosystem_matrix(omega: float) -> np.ndarray:
    """
    Return the exosystem matrix generating a constant mode
    and a sinusoid of frequency omega.

    :param float omega: The frequency (rad/s).
    :rtype: numpy.ndarray
    """
    return np.array([
        [0.0, 0.0, 0.0],
        [0.0, 0.0, omega],
        [0.0, -omega, 0.0]
    ])


def fault_input_row(model: FaultModel) -> np.ndarray:
    """
    Return the fault input row E = [upsilon, 0, nu * omega] (N/s per unit).

    :param FaultModel model: The fault model.
    :rtype: numpy.ndarray
    """
    return np.array([model.upsilon, 0.0, model.nu * model.omega])


def snap_window(window: Sequence[float], step: float) -> Tuple[float, float]:
    """
    Round both window endpoints to the nearest multiple of step.

    :param window: The (start, end) pair in seconds.
    :type window: Sequence[float]
    :param float step: The integration step (s).
    :rtype: Tuple[float, float]
    """
    return (round(window[0] / step) * step, round(window[1] / step) * step)


def in_window(t: float, window: Sequence[float]) -> bool:
    """Closed-interval window membership, a zero-length window being empty."""
    return window[0] < window[1] and window[0] <= t <= window[1]


def fault_value(t: float, model: FaultModel, gate_time: Optional[float] = None) -> np.ndarray:
    """
    Evaluate the fault vector f at time t.

    The window membership is decided at gate_time when given, which lets
    the integrator keep a window open or closed for a whole step
    while the sinusoid itself is evaluated at each stage time.

    :param float t: The time (s).
    :param FaultModel model: The fault model.
    :param gate_time: The time deciding the window membership. By default, t.
    :type gate_time: float or None
    :returns: The 3-vector (f1, f2, f3).
    :rtype: numpy.ndarray
    """

    # Default gate is the evaluation time itself.
    gate: float = t if gate_time is None else gate_time
    f: np.ndarray = np.zeros(3)

    # Constant mode.
    if in_window(gate, model.window_const):
        f[0] = model.F_c

    # Rotating pair.
    if in_window(gate, model.window_periodic):
        angle: float = model.omega * t + model.F_phi
        f[1] = model.F_p * np.sin(angle)
        f[2] = model.F_p * np.cos(angle)

    return f


def effective_fault(t: float, model: FaultModel, m: float, gate_time: Optional[float] = None) -> Tuple[float, float]:
    """
    Return the fault seen by the actuator, E·f (N/s), and by
    the composite model, C·f = E·f / m (m/s³).

    :param float t: The time (s).
    :param FaultModel model: The fault model.
    :param float m: The carriage mass (kg).
    :param gate_time: The window gate time, see fault_value.
    :type gate_time: float or None
    :rtype: Tuple[float, float]
    """

    # The mass has to be positive for C to exist.
    if m <= 0:
        raise ConfigurationError("carriage mass must be positive", [Violation("m > 0", m, 0.0)])

    force_rate: float = float(fault_input_row(model) @ fault_value(t, model, gate_time))
    return force_rate, force_rate / m

# =--------------------------------------------------------------------------------= #


# =-------------= #
# FaultBank class #
# =-------------= #

class FaultBank:
    """
    Vectorized fault generator for every carriage of a consist.
    Windows are snapped to the integration grid at construction.
    """

    # =================== #
    # Initializer methods #
    # =================== #

    def __init__(self, models: Sequence[FaultModel], step: Optional[float] = None) -> None:
        """
        Initializer method.

        :param models: One fault model per carriage, in global carriage order.
        :type models: Sequence[FaultModel]
        :param step: The integration step used to snap the windows. By default, no snapping.
        :type step: float or None
        """

        # Snap the windows on the integration grid.
        self.models: List[FaultModel] = [model.snapped(step) if step else model for model in models]

        # Stack the per-carriage parameters.
        self.omega: np.ndarray = np.array([model.omega for model in self.models])
        self.phase: np.ndarray = np.array([model.F_phi for model in self.models])
        self.constant: np.ndarray = np.array([model.F_c for model in self.models])
        self.periodic: np.ndarray = np.array([model.F_p for model in self.models])
        self.E: np.ndarray = np.array([fault_input_row(model) for model in self.models])
        self.const_windows: np.ndarray = np.array([model.window_const for model in self.models])
        self.periodic_windows: np.ndarray = np.array([model.window_periodic for model in self.models])

    # ============== #
    # Public methods #
    # ============== #

    def values(self, t: float, gate_time: Optional[float] = None) -> np.ndarray:
        """
        Return the (n, 3) array of fault vectors at time t.

        :param float t: The time (s).
        :param gate_time: The window gate time. By default, t.
        :type gate_time: float or None
        :rtype: numpy.ndarray
        """

        # Window membership decided at the gate time.
        gate: float = t if gate_time is None else gate_time
        const_on: np.ndarray = (self.const_windows[:, 0] < self.const_windows[:, 1]) & (self.const_windows[:, 0] <= gate) & (gate <= self.const_windows[:, 1])
        periodic_on: np.ndarray = (self.periodic_windows[:, 0] < self.periodic_windows[:, 1]) & (self.periodic_windows[:, 0] <= gate) & (gate <= self.periodic_windows[:, 1])

        # Assemble the fault vectors.
        angle: np.ndarray = self.omega * t + self.phase
        f: np.ndarray = np.zeros((len(self.models), 3))
        f[:, 0] = np.where(const_on, self.constant, 0.0)
        f[:, 1] = np.where(periodic_on, self.periodic * np.sin(angle), 0.0)
        f[:, 2] = np.where(periodic_on, self.periodic * np.cos(angle), 0.0)
        return f

    def force_rates(self, f: np.ndarray) -> np.ndarray:
        """Return E·f for every carriage (N/s)."""
        return np.einsum('ij,ij->i', self.E, f)

    def transitions(self) -> List[List[float]]:
        """Per-carriage sorted window endpoints."""
        return [model.transitions for model in self.models]

# =-----------------------------------------------------------------------------------= #
