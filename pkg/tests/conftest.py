#!/usr/bin/env python
# -*- coding: utf-8 *-*


"""
    Shared fixtures of the TrainCruise test suite: the shipped
    carriage, coupler and resistance parameters, the nine-carriage
    consist, the shipped gains and constraints, and short scenarios
    derived from the shipped preset.
"""


# =--------------= #
# Libraries import #
# =--------------= #

from typing         import Any, Callable, Dict, Optional
from src.config     import ScenarioConfig, config_from_dict, load_preset, preset_document
from src.controller import ConstraintSpec, FollowerGains, HeadGains
from src.faults     import FaultModel
from src.model      import CarriageParams, Consist, ConsistTopology, CouplerParams, DavisCoefficients
import copy
import pytest

# =-----------------------------------------------------------------------------------= #


# =---------------= #
# Physical fixtures #
# =---------------= #

@pytest.fixture
def davis() -> DavisCoefficients:
    return DavisCoefficients(0.01176, 0.00077616, 1.6e-5)


@pytest.fixture
def coupler() -> CouplerParams:
    return CouplerParams(1.6e5, 600.0, 26.0)


@pytest.fixture
def carriage() -> CarriageParams:
    return CarriageParams(8e4, 50.0, FaultModel(omega=1.0, upsilon=2e5, nu=2e5))


@pytest.fixture
def consist(carriage, davis, coupler) -> Consist:
    """Three trains of three identical carriages."""
    return Consist(ConsistTopology((3, 3, 3)), [carriage] * 9, davis, coupler)


@pytest.fixture
def constraints() -> ConstraintSpec:
    return ConstraintSpec(gamma1=9000.0, gamma2=4702.0, d_s=7053.0, sigma1=50.0, sigma2=50.0)


@pytest.fixture
def follower_gains() -> FollowerGains:
    return FollowerGains(0.1, 0.1, 0.1)


@pytest.fixture
def head_gains() -> HeadGains:
    return HeadGains(0.01, 2.1, 4.3, 1.0)

# =-----------------------------------------------------------------= #


# =---------------= #
# Scenario fixtures #
# =---------------= #

def short_document(duration: float, step: float = 0.01, noise: bool = False, **simulation: Any) -> Dict[str, Any]:
    """The shipped preset document cut to the given horizon."""
    document: Dict[str, Any] = preset_document("paper-s5")
    document["simulation"].update({"step_s": step, "duration_s": duration, **simulation})
    document["noise"]["enabled"] = noise
    return document


def with_estimate_errors(document: Dict[str, Any], e_x: float, e_w: float, f_hat: Any) -> Dict[str, Any]:
    """Copy of document whose every carriage starts with the given estimation errors."""
    out: Dict[str, Any] = copy.deepcopy(document)
    for train in out["trains"]:
        for entry in train:
            entry["estimate"] = {"x_hat_m": entry["x_m"] + e_x, "w_hat_mps2": entry.get("w_mps2", 0.0) + e_w, "f_hat": list(f_hat)}
    return out


@pytest.fixture
def scenario() -> Callable[..., ScenarioConfig]:
    """Factory of validated short scenarios, see short_document."""

    def build(duration: float, step: float = 0.01, noise: bool = False, document: Optional[Dict[str, Any]] = None, **simulation: Any) -> ScenarioConfig:
        return config_from_dict(document if document is not None else short_document(duration, step, noise, **simulation))

    return build


@pytest.fixture(scope="session")
def preset() -> ScenarioConfig:
    return load_preset("paper-s5")

# =--------------------------------------------------------------------= #
