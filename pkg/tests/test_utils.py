#!/usr/bin/env python
# -*- coding: utf-8 *-*


"""
    Tests of the utility, error and logger modules.
"""


# =--------------= #
# Libraries import #
# =--------------= #

from src.errors import BarrierDomainError, ConfigurationError, IntegrationError, TrainCruiseError, Violation
import json
import logging
import numpy as np
import src.logger as logger
import src.utils  as utils
import pytest

# =-----------------------------------------------------------------------------------------------------= #


# =--------------= #
# Dictionary tests #
# =--------------= #

def test_update_dict_creates_intermediate_sections():
    document = {"a": {"b": 1}}
    utils.update_dict(document, "a", "c", "d", value=2)
    assert document == {"a": {"b": 1, "c": {"d": 2}}}
    utils.update_dict(document, "a", "b", value=3)
    assert document == {"a": {"b": 3, "c": {"d": 2}}}


def test_merge_dict_is_deep_and_pure():
    base = {"a": {"b": 1, "c": [1, 2]}, "d": 4}
    overlay = {"a": {"c": [3]}, "e": {"f": 5}}
    merged = utils.merge_dict(base, overlay)
    assert merged == {"a": {"b": 1, "c": [3]}, "d": 4, "e": {"f": 5}}
    merged["a"]["b"] = 10
    assert base["a"]["b"] == 1


def test_canonical_hash_ignores_key_order():
    assert utils.canonical_hash({"a": 1, "b": [1, 2]}) == utils.canonical_hash({"b": [1, 2], "a": 1})
    assert utils.canonical_hash({"a": 1}) != utils.canonical_hash({"a": 2})
    assert len(utils.canonical_hash({})) == 64

# =-------------------------------------------------------------------------------= #


# =---------------= #
# File helper tests #
# =---------------= #

def test_json_write_and_read(tmp_path):
    path = tmp_path / "out.json"
    utils.json_write({"array": np.arange(3), "scalar": np.float64(0.5)}, path)
    assert utils.json_read(path) == {"array": [0, 1, 2], "scalar": 0.5}


def test_json_read_leaves_decode_errors_to_the_caller(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{\n  \"a\": \n}", encoding="utf-8")
    with pytest.raises(json.JSONDecodeError) as info:
        utils.json_read(path)
    assert info.value.lineno == 3


def test_json_dumps_rejects_unknown_objects():
    with pytest.raises(TypeError):
        utils.json_dumps({"value": object()})


def test_next_run_directory_available(tmp_path):
    assert utils.next_run_directory_available(tmp_path, "run") == tmp_path / "run"
    (tmp_path / "run").mkdir()
    assert utils.next_run_directory_available(tmp_path, "run") == tmp_path / "run-1"
    (tmp_path / "run-1").mkdir()
    assert utils.next_run_directory_available(tmp_path, "run") == tmp_path / "run-2"

# =------------------------------------------------------------------------------------= #


# =---------= #
# Error tests #
# =---------= #

def test_violation_text():
    violation = Violation("ell2 > 2", 1.5, 2.0, "parameters")
    assert str(violation) == "parameters: ell2 > 2 violated (value=1.5, bound=2.0)"
    assert str(Violation("l1 > 0", 0.0, 0.0)).startswith("l1 > 0")


def test_configuration_error_report():
    error = ConfigurationError("bad", [Violation("l1 > 0", 0.0, 0.0, "parameters")], field="follower_gains.l1")
    assert error.to_dict() == {
        "error": "configuration", "message": "bad", "field": "follower_gains.l1", "line": None,
        "violations": [{"name": "l1 > 0", "value": 0.0, "bound": 0.0, "where": "parameters"}],
    }


def test_error_hierarchy():
    assert isinstance(BarrierDomainError("phi", 2.0, -1.0, 1.0), ValueError)
    assert issubclass(IntegrationError, TrainCruiseError)
    assert issubclass(ConfigurationError, TrainCruiseError)

# =-------------------------------------------------------------------------= #


# =----------= #
# Logger tests #
# =----------= #

def test_init_logger_only_updates_the_level():
    first = logger.init_logger(logging.WARNING)
    handlers = list(first.handlers)
    second = logger.init_logger(logging.DEBUG)
    assert second is first
    assert second.handlers == handlers
    assert second.level == logging.DEBUG
    assert all(handler.level == logging.DEBUG for handler in second.handlers)
    logger.init_logger(logging.INFO)


def test_formatter_carries_level_and_message():
    record = logging.LogRecord("traincruise", logging.WARNING, __file__, 1, "gap of %d m", (26,), None)
    out = logger.CustomFormatter().format(record)
    assert "WARNING" in out
    assert "gap of 26 m" in out
