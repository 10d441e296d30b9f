#!/usr/bin/env python
# -*- coding: utf-8 *-*


"""
    Tests of the integrator, the disturbance source and the closed-loop simulator.
"""


# =--------------= #
# Libraries import #
# =--------------= #

from src.errors    import ConstraintViolationError, IntegrationError
from src.Simulator import DisturbanceSource, Simulator, inject_disturbance, rk4_step, run_scenario
from conftest      import short_document
import numpy as np
import pytest

# =------------------------------------------------------------------------------------------------= #


# =--------------= #
# Integrator tests #
# =--------------= #

def test_rk4_single_step():
    y = rk4_step(lambda t, y: -y, np.array([1.0]), 0.0, 0.1)
    assert y[0] == pytest.approx(0.9048375, abs=1e-7)


def test_rk4_fourth_order_convergence():

    def error(h: float) -> float:
        y, t = np.array([0.0]), 0.0
        for _ in range(int(round(1.0 / h))):
            y = rk4_step(lambda s, z: np.array([np.cos(s)]), y, t, h)
            t += h
        return abs(y[0] - np.sin(1.0))

    assert error(0.1) / error(0.05) == pytest.approx(16.0, rel=0.1)


def test_rk4_reuses_known_first_stage():
    calls = []

    def rhs(t, y):
        calls.append(t)
        return -y

    rk4_step(rhs, np.array([1.0]), 0.0, 0.1, k1=np.array([-1.0]))
    assert calls == pytest.approx([0.05, 0.05, 0.1])


def test_rk4_names_non_finite_entries():
    with pytest.raises(IntegrationError) as info:
        rk4_step(lambda t, y: np.array([np.nan, 1.0, np.inf]), np.zeros(3), 2.0, 0.1, labels=["x[1,1]", "v[1,1]", "w[1,1]"])
    assert info.value.time == 2.0
    assert info.value.indices == [0, 2]
    assert info.value.labels == ["x[1,1]", "w[1,1]"]
    assert "x[1,1]" in str(info.value)


def test_rk4_default_labels():
    with pytest.raises(IntegrationError) as info:
        rk4_step(lambda t, y: np.full(2, np.inf) if t > 0 else -y, np.ones(2), 0.0, 0.1)
    assert info.value.labels == ["state[0]", "state[1]"]
    assert info.value.time == pytest.approx(0.05)

# =---------------------------------------------------------------------------------------------= #


# =---------------= #
# Disturbance tests #
# =---------------= #

def test_disturbance_variance():
    samples = inject_disturbance(np.random.default_rng(0), 0.5, 200000)
    assert np.mean(samples) == pytest.approx(0.0, abs=0.01)
    assert np.var(samples) == pytest.approx(0.5, rel=0.02)


def test_disturbance_source_is_seeded():
    first, second = DisturbanceSource(True, 0.5, 11, 9), DisturbanceSource(True, 0.5, 11, 9)
    assert all(np.array_equal(first.sample(), second.sample()) for _ in range(5))
    assert not np.array_equal(DisturbanceSource(True, 0.5, 12, 9).sample(), DisturbanceSource(True, 0.5, 11, 9).sample())


def test_disabled_disturbance_is_zero():
    assert np.all(DisturbanceSource(False, 0.5, 0, 4).sample() == 0.0)

# =-------------------------------------------------------------------------------------------------------= #


# =--------------------= #
# Short simulation tests #
# =--------------------= #

def test_short_run_layout(scenario):
    simulator = Simulator(scenario(1.0))
    record = simulator.run()
    assert record.data.shape == (simulator.steps + 1, 103) == (101, 103)
    assert record.time == pytest.approx(np.linspace(0.0, 1.0, 101))
    assert record.metadata == {"representation": "composite", "step_s": 0.01}
    assert simulator.events == []
    assert np.all(np.isfinite(record.data))


def test_short_run_starts_from_the_configuration(scenario, preset):
    record = Simulator(scenario(1.0)).run()
    for k, (i, j) in enumerate(record.labels):
        assert record.carriage("x_m", i, j)[0] == preset.initial[k].x
        assert record.carriage("v_mps", i, j)[0] == preset.initial[k].v
        assert record.carriage("e_x_m", i, j)[0] == 0.0
    assert record.pair("xtilde_m", 2)[0] == pytest.approx(800.0)
    assert record.pair("xtilde_m", 3)[0] == pytest.approx(-2000.0)


def test_decimation_keeps_the_end_state(scenario):
    record = Simulator(scenario(0.95, decimate=10)).run()
    assert record.time == pytest.approx([*np.linspace(0.0, 0.9, 10), 0.95])


def test_decimated_end_state_is_not_repeated(scenario):
    record = Simulator(scenario(1.0, decimate=10)).run()
    assert record.time == pytest.approx(np.linspace(0.0, 1.0, 11))


def test_stale_train_links_change_the_heads(scenario):
    config = scenario(1.0)
    fresh, stale = Simulator(config).run(), Simulator(config, stale_train_links=True).run()
    assert np.array_equal(fresh.carriage("u_mps3", 1, 2), stale.carriage("u_mps3", 1, 2))
    assert not np.allclose(fresh.carriage("u_mps3", 2, 1), stale.carriage("u_mps3", 2, 1), rtol=0.0, atol=1e-12)


def test_noise_is_reproducible(scenario):
    document = short_document(1.0, noise=True)
    document["noise"]["seed"] = 3
    first, second = Simulator(scenario(1.0, document=document)).run(), Simulator(scenario(1.0, document=document)).run()
    assert np.array_equal(first.data, second.data)
    document["noise"]["seed"] = 4
    other = Simulator(scenario(1.0, document=document)).run()
    assert not np.array_equal(first.data, other.data)


def test_plant_and_composite_forms_agree(scenario):
    config = scenario(10.0, step=1e-3, plant_step_s=1e-3, decimate=100)
    override = lambda t, x, v: 0.01 * np.cos(0.5 * t)
    composite = Simulator(config, "composite", control_override=override).run()
    plant = Simulator(config, "plant", control_override=override).run()
    assert plant.metadata["representation"] == "plant"
    for i, j in composite.labels:
        assert plant.carriage("x_m", i, j) == pytest.approx(composite.carriage("x_m", i, j), abs=1e-6)
        assert plant.carriage("v_mps", i, j) == pytest.approx(composite.carriage("v_mps", i, j), abs=1e-6)


def test_both_representations_attach_a_companion(scenario):
    record, report = run_scenario(scenario(1.0, representation="both", plant_step_s=0.001))
    assert record.metadata["representation"] == "composite"
    assert record.companion is not None
    assert record.companion.metadata["representation"] == "plant"
    assert record.companion.columns == record.columns
    assert record.companion.time == pytest.approx(record.time)
    assert report.metadata["representation"] == "both"


def test_saturation_is_reported_as_runtime_events(scenario):
    simulator = Simulator(scenario(0.5), control_override=lambda t, x, v: -5000.0)
    simulator.run()
    assert simulator.events
    event = simulator.events[0]
    assert (event.quantity, event.pair, event.source) == ("q_tilde", 1, "runtime")
    assert event.start < 0.3
    assert event.end > event.start
    assert len([e for e in simulator.events if e.quantity == "q_tilde" and e.pair == 1]) == 1


def test_saturation_aborts_on_request(scenario):
    simulator = Simulator(scenario(0.5, abort_on_violation=True), control_override=lambda t, x, v: -5000.0)
    with pytest.raises(ConstraintViolationError) as info:
        simulator.run()
    assert info.value.pair == 1
    assert info.value.quantity == "q_tilde"
    assert info.value.time < 0.3

# =---------------------------------------------------------------------------------------------------------------= #


# =--------------------= #
# Full horizon scenarios #
# =--------------------= #

@pytest.mark.slow
def test_shipped_scenario_meets_every_requirement(preset):
    record, report = run_scenario(preset)
    assert report.passed, report.verdicts
    assert report.verdicts["R3_prime"]
    assert report.verdicts["observer"]
    assert record.time[-1] == pytest.approx(2400.0)


@pytest.mark.slow
def test_shipped_scenario_with_disturbance(scenario):
    record, report = run_scenario(scenario(2400.0, noise=True))
    assert report.passed, report.verdicts
    assert report.metadata["noise"] is True


@pytest.mark.slow
def test_coarser_step_keeps_the_verdicts(scenario):
    _, report = run_scenario(scenario(2400.0, step=0.02, decimate=5))
    assert report.passed, report.verdicts
