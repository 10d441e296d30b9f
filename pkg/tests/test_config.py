#!/usr/bin/env python
# -*- coding: utf-8 *-*


"""
    Tests of the scenario configuration layer: presets, JSON files,
    overrides, export and validation failures.
"""


# =--------------= #
# Libraries import #
# =--------------= #

from src.config import (OVERRIDE_PATHS, apply_overrides, config_from_dict, config_hash, config_to_dict, load_config,
                        load_preset, preset_document, save_config)
from src.errors import ConfigurationError
from conftest   import short_document
import json
import pytest

# =------------------------------------------------------------------------------------------------------------= #


def rejection(document) -> ConfigurationError:
    with pytest.raises(ConfigurationError) as info:
        config_from_dict(document)
    return info.value


# =------------------= #
# Shipped preset tests #
# =------------------= #

def test_preset_topology(preset):
    assert preset.name == "paper-s5"
    assert preset.topology.carriages_per_train == (3, 3, 3)
    assert len(preset.carriages) == len(preset.initial) == len(preset.estimates) == 9
    assert all(estimate is None for estimate in preset.estimates)


def test_preset_initial_states(preset):
    assert (preset.initial[0].x, preset.initial[0].v) == (13062.0, 20.5)
    assert (preset.initial[5].x, preset.initial[5].v) == (5105.0, 20.5)
    assert preset.initial[8].x == 0.0


def test_preset_fault_phases_and_windows(preset):
    assert preset.carriages[0].fault.F_phi == 2.0
    assert preset.carriages[8].fault.F_phi == 18.0
    assert preset.carriages[4].fault.window_const == (1200.0, 1800.0)
    assert preset.carriages[4].fault.window_periodic == (1300.0, 2300.0)
    assert preset.carriages[8].fault.window_const == (2000.0, 2200.0)


def test_preset_settings(preset):
    assert (preset.step, preset.plant_step, preset.duration) == (0.01, 0.001, 2400.0)
    assert preset.representation == "composite"
    assert preset.decimate == 1
    assert preset.noise.enabled and preset.noise.variance == 0.5
    assert preset.observer.eigenvalues == (-3.0,) * 5
    assert preset.reference.horizon == pytest.approx(2400.0)
    assert preset.constraints.rho1 == pytest.approx(1947.0)


def test_preset_document_is_a_copy():
    document = preset_document("paper-s5")
    document["name"] = "changed"
    assert preset_document("paper-s5")["name"] == "paper-s5"


def test_three_trains_alias(preset):
    assert config_hash(load_preset("three-trains")) == config_hash(preset)


def test_unknown_preset():
    with pytest.raises(ConfigurationError) as info:
        load_preset("four-trains")
    assert info.value.field == "preset"
    assert "paper-s5" in str(info.value)

# =-----------------------------------------------------------------------------------------= #


# =---------------------= #
# File and override tests #
# =---------------------= #

def test_export_round_trip(preset, tmp_path):
    path = tmp_path / "scenario.json"
    save_config(preset, path)
    restored = load_config(path)
    assert config_hash(restored) == config_hash(preset)
    assert config_to_dict(restored) == config_to_dict(preset)


def test_partial_file_merges_over_defaults(tmp_path):
    path = tmp_path / "short.json"
    path.write_text(json.dumps({"name": "short", "simulation": {"duration_s": 10.0}}), encoding="utf-8")
    config = load_config(path)
    assert config.name == "short"
    assert config.duration == 10.0
    assert config.step == 0.01
    assert config.topology.carriage_count == 9


def test_malformed_json_reports_the_line(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n    "name": "broken",\n    "noise": \n}\n', encoding="utf-8")
    with pytest.raises(ConfigurationError) as info:
        load_config(path)
    assert info.value.line == 4
    assert info.value.to_dict()["error"] == "configuration"


def test_non_object_document(tmp_path):
    path = tmp_path / "list.json"
    path.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(ConfigurationError) as info:
        load_config(path)
    assert info.value.line == 1


def test_missing_file(tmp_path):
    with pytest.raises(ConfigurationError):
        load_config(tmp_path / "absent.json")


def test_overrides_apply_before_validation():
    config = load_preset("paper-s5", {OVERRIDE_PATHS["seed"]: 7, OVERRIDE_PATHS["duration"]: 10.0, OVERRIDE_PATHS["noise"]: False})
    assert config.noise.seed == 7
    assert config.duration == 10.0
    assert not config.noise.enabled


def test_apply_overrides_copies():
    document = preset_document("paper-s5")
    out = apply_overrides(document, {"head_gains.ell2": 3.0, "extra.section.key": 1})
    assert out["head_gains"]["ell2"] == 3.0
    assert out["extra"]["section"]["key"] == 1
    assert document["head_gains"]["ell2"] == 2.1


def test_config_hash_tracks_changes(preset):
    assert config_hash(load_preset("paper-s5")) == config_hash(preset)
    assert config_hash(load_preset("paper-s5", {"noise.seed": 1})) != config_hash(preset)


def test_per_carriage_entries():
    document = short_document(10.0)
    document["trains"][0][1]["observer"] = {"k1_per_s": 4.0, "K": [-15.0, -89.0, -97.2, 126.4, -4.8]}
    document["trains"][2][2]["estimate"] = {"x_hat_m": 1.0, "f_hat": [0.1, 0.0, 0.0]}
    document["trains"][1][0]["mass_kg"] = 9e4
    config = config_from_dict(document)
    assert config.observer.overrides[1].k1 == 4.0
    assert config.observer.overrides[0] is None
    estimate = config.estimates[8]
    assert (estimate.x_hat, estimate.v_hat, estimate.w_hat, estimate.f_hat) == (1.0, 20.2, 0.0, (0.1, 0.0, 0.0))
    assert config.carriages[3].m == 9e4 and config.carriages[4].m == 8e4


def test_complex_eigenvalue_pairs():
    document = short_document(10.0)
    document["observer"]["eigenvalues"] = [[-2.0, 1.0], [-2.0, -1.0], -3.0, -4.0, -5.0]
    config = config_from_dict(document)
    assert config.observer.eigenvalues[0] == complex(-2.0, 1.0)
    assert config_to_dict(config)["observer"]["eigenvalues"][0] == [-2.0, 1.0]

# =------------------------------------------------------------------------------------------------------= #


# =--------------------= #
# Validation error tests #
# =--------------------= #

def test_zero_follower_gain_rejected():
    document = short_document(10.0)
    document["follower_gains"]["l1"] = 0.0
    assert [violation.name for violation in rejection(document).violations] == ["l1 > 0"]


@pytest.mark.parametrize("path, value, name", [
    (("simulation", "step_s"), 0.0, "step_s > 0"),
    (("simulation", "duration_s"), 10.005, "duration_s multiple of step_s"),
    (("simulation", "duration_s"), 2500.0, "duration_s <= reference horizon"),
    (("simulation", "decimate"), 0, "decimate >= 1"),
    (("noise", "variance"), -1.0, "variance >= 0"),
    (("observer", "eigenvalues"), [-3.0] * 4, "5 observer eigenvalues"),
    (("head_gains", "ell2"), 1.5, "ell2 > 2"),
])
def test_inequality_violations(path, value, name):
    document = short_document(10.0)
    document[path[0]][path[1]] = value
    assert name in [violation.name for violation in rejection(document).violations]


def test_every_violation_is_listed():
    document = short_document(10.0)
    document["simulation"]["step_s"] = -0.01
    document["noise"]["variance"] = -1.0
    names = [violation.name for violation in rejection(document).violations]
    assert "step_s > 0" in names and "variance >= 0" in names


def test_infeasible_initial_positions():
    document = short_document(10.0)
    for entry in document["trains"][0]:
        entry["x_m"] -= 2000.0
    error = rejection(document)
    assert any(violation.where == "train pair 1" for violation in error.violations)


@pytest.mark.parametrize("section, key, value, field", [
    ("davis", "c0_N_per_kg", "high", "davis.c0_N_per_kg"),
    ("simulation", "representation", "hybrid", "simulation.representation"),
    ("simulation", "decimate", 2.5, "simulation.decimate"),
    ("noise", "enabled", 1, "noise.enabled"),
])
def test_mistyped_fields(section, key, value, field):
    document = short_document(10.0)
    document[section][key] = value
    assert rejection(document).field == field


def test_missing_section():
    document = short_document(10.0)
    del document["davis"]
    assert rejection(document).field == "davis"


def test_bad_fault_window():
    document = short_document(10.0)
    document["trains"][0][0]["fault"]["constant_window_s"] = [400.0]
    assert rejection(document).field == "trains.0.0.fault.constant_window_s"


def test_bad_estimate_fault():
    document = short_document(10.0)
    document["trains"][0][0]["estimate"] = {"f_hat": [0.0, 0.0]}
    assert rejection(document).field == "trains.0.0.estimate.f_hat"


def test_unplaceable_observer_request():
    document = short_document(10.0)
    document["observer"]["eigenvalues"] = [-3.0, -3.0, -3.0, -3.0, 1.0]
    assert rejection(document).field == "observer"
