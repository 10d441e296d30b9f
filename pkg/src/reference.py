#!/usr/bin/env python
# -*- coding: utf-8 *-*


"""
    This file contains the desired position-velocity
    profile followed by the first train: a chain of
    constant-jerk phases starting from a given state.

     ____________________________________________________
    | REFER TO THE MAIN.PY FILE FOR THE CHANGE DOC TABLE |
     ‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾
"""


# =--------------= #
# Libraries import #
# =--------------= #

from typing      import List, Sequence, Tuple
from dataclasses import dataclass
from src.errors  import ConfigurationError, Violation
import bisect

# =------------------------------------------= #


# =--------------------------------------------------= #
# REFER TO THE MAIN.PY FILE FOR THE AUTHORSHIP SECTION #
# =--------------------------------------------------= #


# =-------------= #
# Global variable #
# =-------------= #

# Velocity slack tolerated by the profile validation (m/s).
VELOCITY_SLACK: float = 1e-9

# Phases of the shipped profile: accelerate to 92 m/s, cruise,
# decelerate to 60 m/s, cruise; 2400 s in total.
DEFAULT_PHASES: Tuple[Tuple[float, float], ...] = (
    (100.0, 0.002), (260.0, 0.0), (100.0, -0.002),
    (740.0, 0.0),
    (100.0, -0.002), (60.0, 0.0), (100.0, 0.002),
    (940.0, 0.0)
)

# =----------------------------------------------------= #


# =----------------------= #
# ReferencePhase dataclass #
# =----------------------= #

@dataclass(frozen=True)
class ReferencePhase:
    """A constant-jerk segment of the reference."""
    duration: float
    jerk:     float

    def __post_init__(self) -> None:
        if not self.duration > 0:
            raise ConfigurationError("reference phase duration must be positive", [Violation("duration > 0", self.duration, 0.0)])

# =----------------------------------------------= #


# =------------------------= #
# ReferenceProfile dataclass #
# =------------------------= #

@dataclass(frozen=True)
class ReferenceProfile:
    """
    Reference (x0, v0, w0, u0) of the virtual train leading the first train.
    The velocity is checked to stay inside [0, v_max] at construction.
    """
    x0:     float
    v0:     float
    w0:     float
    phases: Tuple[ReferencePhase, ...]
    v_max:  float

    # =================== #
    # Initializer methods #
    # =================== #

    def __post_init__(self) -> None:
        """Compute the phase boundary states and validate the velocity envelope."""

        # An empty profile has no horizon.
        if not self.phases:
            raise ConfigurationError("the reference needs at least one phase", field="reference.phases")

        # Propagate the boundary states through every phase.
        starts: List[float] = [0.0]
        states: List[Tuple[float, float, float]] = [(self.x0, self.v0, self.w0)]
        for phase in self.phases:
            x, v, w = _advance(states[-1], phase.jerk, phase.duration)
            starts.append(starts[-1] + phase.duration)
            states.append((x, v, w))
        object.__setattr__(self, "_starts", tuple(starts))
        object.__setattr__(self, "_states", tuple(states))

        # Closed-form velocity extrema of every phase.
        violations: List[Violation] = []
        for k, phase in enumerate(self.phases):
            low, high = _velocity_extrema(states[k], phase.jerk, phase.duration)
            if low < -VELOCITY_SLACK:
                violations.append(Violation("v0 >= 0", low, 0.0, where=f"reference phase {k + 1}"))
            if high > self.v_max + VELOCITY_SLACK:
                violations.append(Violation("v0 <= v_max", high, self.v_max, where=f"reference phase {k + 1}"))
        if violations:
            raise ConfigurationError("reference velocity leaves [0, v_max]", violations, field="reference")

    # ============== #
    # Public methods #
    # ============== #

    @property
    def horizon(self) -> float:
        """Total duration of the profile (s)."""
        return self._starts[-1]

    def evaluate(self, t: float) -> Tuple[float, float, float, float]:
        """
        Return (x0, v0, w0, u0) at time t.

        :param float t: The time, within [0, horizon].
        :raises ValueError: If t lies outside the horizon.
        :rtype: Tuple[float, float, float, float]
        """

        # Times slightly past the end are the last boundary.
        if t < 0 or t > self.horizon * (1 + 1e-12):
            raise ValueError(f"time {t} outside the reference horizon [0, {self.horizon}]")

        # Locate the phase, the last one owning its end point.
        k: int = min(bisect.bisect_right(self._starts, t) - 1, len(self.phases) - 1)
        jerk: float = self.phases[k].jerk
        x, v, w = _advance(self._states[k], jerk, t - self._starts[k])
        return x, v, w, jerk

    def max_velocity(self) -> float:
        """Largest velocity reached over the horizon."""
        return max(_velocity_extrema(self._states[k], phase.jerk, phase.duration)[1] for k, phase in enumerate(self.phases))

# =-----------------------------------------------------------------------------------------------= #


# =-----------------= #
# Reference functions #
# =-----------------= #

def _advance(state: Tuple[float, float, float], jerk: float, dt: float) -> Tuple[float, float, float]:
    """Closed-form constant-jerk propagation of (x, v, w) over dt."""
    x, v, w = state
    return (
        x + v * dt + w * dt * dt / 2 + jerk * dt ** 3 / 6,
        v + w * dt + jerk * dt * dt / 2,
        w + jerk * dt
    )


def _velocity_extrema(state: Tuple[float, float, float], jerk: float, duration: float) -> Tuple[float, float]:
    """Minimum and maximum of the quadratic velocity over [0, duration]."""

    # Candidates: both ends plus the stationary point when inside.
    candidates: List[float] = [state[1], _advance(state, jerk, duration)[1]]
    if jerk != 0:
        stationary: float = -state[2] / jerk
        if 0 < stationary < duration:
            candidates.append(_advance(state, jerk, stationary)[1])
    return min(candidates), max(candidates)


def evaluate(profile: ReferenceProfile, t: float) -> Tuple[float, float, float, float]:
    """
    Return (x0, v0, w0, u0) of profile at time t.

    :param ReferenceProfile profile: The reference profile.
    :param float t: The time (s).
    :rtype: Tuple[float, float, float, float]
    """
    return profile.evaluate(t)


def default_profile(x0: float = 20115.0, phases: Sequence[Tuple[float, float]] = DEFAULT_PHASES) -> ReferenceProfile:
    """
    The shipped profile: 20 m/s to 92 m/s, cruise, down to 60 m/s, cruise.

    :param float x0: The initial reference position (m).
    :param phases: (duration, jerk) pairs.
    :type phases: Sequence[Tuple[float, float]]
    :rtype: ReferenceProfile
    """
    return ReferenceProfile(
        x0=x0, v0=20.0, w0=0.0,
        phases=tuple(ReferencePhase(duration, jerk) for duration, jerk in phases),
        v_max=92.0
    )

# =---------------------------------------------------------------------------------------------= #
