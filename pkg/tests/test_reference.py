#!/usr/bin/env python
# -*- coding: utf-8 *-*


"""
    Tests of the piecewise constant-jerk reference profile.
"""


# =--------------= #
# Libraries import #
# =--------------= #

from src.errors    import ConfigurationError
from src.reference import DEFAULT_PHASES, ReferencePhase, ReferenceProfile, default_profile, evaluate
import numpy as np
import pytest

# =---------------------------------------------------------------------------------------------= #


def profile(*phases, x0=0.0, v0=20.0, w0=0.0, v_max=92.0) -> ReferenceProfile:
    return ReferenceProfile(x0, v0, w0, tuple(ReferencePhase(*phase) for phase in phases), v_max)


# =------------------= #
# Closed-form examples #
# =------------------= #

def test_uniform_velocity():
    reference = profile((100.0, 0.0), x0=5.0)
    for t in (0.0, 12.5, 100.0):
        x, v, w, u = reference.evaluate(t)
        assert x == pytest.approx(5.0 + 20.0 * t)
        assert (v, w, u) == (20.0, 0.0, 0.0)


def test_constant_jerk_from_rest_acceleration():
    x, v, w, u = profile((10.0, 0.01), v0=0.0).evaluate(10.0)
    assert w == pytest.approx(0.1)
    assert v == pytest.approx(0.5)
    assert x == pytest.approx(10 / 6)
    assert u == 0.01


def test_boundary_continuity():
    reference = profile((10.0, 0.01), (5.0, 0.0), (10.0, -0.01))
    for boundary in (10.0, 15.0):
        before = np.array(reference.evaluate(boundary - 1e-9)[:3])
        after = np.array(reference.evaluate(boundary + 1e-9)[:3])
        assert after == pytest.approx(before, abs=1e-6)


def test_last_phase_owns_the_end_point():
    reference = profile((10.0, 0.0), (10.0, 0.01))
    assert reference.evaluate(20.0)[3] == 0.01


def test_module_level_evaluate():
    reference = default_profile()
    assert evaluate(reference, 123.0) == reference.evaluate(123.0)

# =-------------------------------------------------------------------= #


# =-------------------= #
# Shipped profile tests #
# =-------------------= #

def test_default_profile_horizon():
    assert default_profile().horizon == pytest.approx(2400.0)
    assert sum(duration for duration, _ in DEFAULT_PHASES) == pytest.approx(2400.0)


def test_default_profile_reaches_maximum_velocity():
    reference = default_profile()
    assert reference.max_velocity() == pytest.approx(92.0)
    assert reference.evaluate(800.0)[1] == pytest.approx(92.0)


def test_default_profile_start():
    assert default_profile().evaluate(0.0) == (20115.0, 20.0, 0.0, 0.002)


def test_default_profile_stays_in_envelope():
    reference = default_profile()
    velocities = [reference.evaluate(t)[1] for t in np.linspace(0.0, 2400.0, 4801)]
    assert min(velocities) >= 0.0
    assert max(velocities) <= 92.0 + 1e-9


@pytest.mark.parametrize("t", [50.0, 300.0, 777.0, 1250.0, 1400.0, 2000.0])
def test_numerical_derivatives(t):
    reference = default_profile()
    h = 1e-4
    ahead, behind, here = reference.evaluate(t + h), reference.evaluate(t - h), reference.evaluate(t)
    for k in range(3):
        slope = (ahead[k] - behind[k]) / (2 * h)
        assert slope == pytest.approx(here[k + 1], rel=1e-6, abs=1e-7)

# =--------------------------------------------------------------------------------------------= #


# =------------= #
# Error handling #
# =------------= #

@pytest.mark.parametrize("t", [-1e-3, 2400.1])
def test_evaluate_outside_horizon(t):
    with pytest.raises(ValueError):
        default_profile().evaluate(t)


def test_velocity_above_cap_rejected():
    with pytest.raises(ConfigurationError) as info:
        profile((100.0, 0.02))
    assert info.value.violations[0].name == "v0 <= v_max"
    assert info.value.violations[0].where == "reference phase 1"


def test_negative_velocity_rejected():
    with pytest.raises(ConfigurationError) as info:
        profile((10.0, 0.0), (100.0, -0.01))
    assert info.value.violations[0].name == "v0 >= 0"


def test_interior_velocity_peak_detected():
    # Peak velocity inside the phase, both ends below the cap.
    with pytest.raises(ConfigurationError):
        profile((20.0, -0.3), v0=80.0, w0=3.0)


def test_empty_profile_rejected():
    with pytest.raises(ConfigurationError):
        ReferenceProfile(0.0, 20.0, 0.0, (), 92.0)


def test_nonpositive_phase_duration_rejected():
    with pytest.raises(ConfigurationError):
        ReferencePhase(0.0, 0.01)

# =-----------------------------------------------------------------------------= #
