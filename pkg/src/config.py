#!/usr/bin/env python
# -*- coding: utf-8 *-*


"""
    This file contains everything related to the scenario
    configurations used by the TrainCruise software: the
    default document, the named presets, the JSON loading
    with dotted-path overrides, and the conversion into a
    fully validated ScenarioConfig.

    Field names carry their units (mass_kg, step_s, ...).
    A loaded document is merged over DEFAULT_CONFIG, so a
    file only needs the fields it changes.

     ____________________________________________________
    | REFER TO THE MAIN.PY FILE FOR THE CHANGE DOC TABLE |
     ‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾
"""


# =--------------= #
# Libraries import #
# =--------------= #

from typing         import Any, Dict, List, Mapping, Optional, Tuple, Union
from dataclasses    import asdict, dataclass
from pathlib        import Path
from src.controller import ConstraintSpec, FollowerGains, HeadGains, validate_initial, validate_parameters
from src.errors     import ConfigurationError, PlacementError, Violation
from src.faults     import FaultModel
from src.model      import CarriageParams, CompositeState, ConsistTopology, CouplerParams, DavisCoefficients
from src.monitor    import NOISY_TOLERANCES, Tolerances
from src.observer   import ObserverGains, ObserverState, synthesize_bank
from src.reference  import DEFAULT_PHASES, ReferencePhase, ReferenceProfile
import copy
import json
import src.logger as logger
import src.utils  as utils

# =------------------------------------------------------------------------------------------------= #


# =--------------------------------------------------= #
# REFER TO THE MAIN.PY FILE FOR THE AUTHORSHIP SECTION #
# =--------------------------------------------------= #


# =-------------= #
# Global variable #
# =-------------= #

REPRESENTATIONS: Tuple[str, ...] = ("composite", "plant", "both")

# Initial positions and velocities of the shipped three-train scenario.
_THREE_TRAIN_POSITIONS: Tuple[Tuple[float, ...], ...] = ((13062.0, 13036.0, 13010.0), (5157.0, 5131.0, 5105.0), (52.0, 26.0, 0.0))
_THREE_TRAIN_VELOCITIES: Tuple[Tuple[float, ...], ...] = ((20.5, 20.2, 20.3), (19.8, 19.9, 20.5), (19.7, 20.5, 20.2))


def _three_trains() -> List[List[Dict[str, Any]]]:
    """Carriages of the shipped scenario, each with its own fault phase and windows."""
    trains: List[List[Dict[str, Any]]] = []
    k: int = 0
    for i, (positions, velocities) in enumerate(zip(_THREE_TRAIN_POSITIONS, _THREE_TRAIN_VELOCITIES), start=1):
        train: List[Dict[str, Any]] = []
        for j, (x, v) in enumerate(zip(positions, velocities), start=1):
            train.append({
                "x_m": x, "v_mps": v, "w_mps2": 0.0,
                "fault": {
                    "phase_rad": float(6 * (i - 1) + 2 * j),
                    "constant_window_s": [400.0 + 200.0 * k, 1400.0 + 100.0 * k],
                    "periodic_window_s": [500.0 + 200.0 * k, 2300.0],
                },
            })
            k += 1
        trains.append(train)
    return trains


# Default document, the shipped three-train scenario.
DEFAULT_CONFIG: Dict[str, Any] = {
    "name": "paper-s5",
    "davis": {"c0_N_per_kg": 0.01176, "c1_Ns_per_m_kg": 0.00077616, "c2_Ns2_per_m2_kg": 1.6e-5},
    "coupler": {"stiffness_N_per_m": 1.6e5, "damping_Ns_per_m": 600.0, "spacing_m": 26.0},
    "carriage_defaults": {
        "mass_kg": 8e4,
        "actuator_rate_per_s": 50.0,
        "fault": {
            "upsilon_Nps": 2e5,
            "nu_N": 2e5,
            "omega_rad_per_s": 1.0,
            "constant_amplitude": 1.0,
            "periodic_amplitude": 1.0,
            "phase_rad": 0.0,
            "constant_window_s": [0.0, 0.0],
            "periodic_window_s": [0.0, 0.0],
        },
    },
    "trains": _three_trains(),
    "constraints": {
        "gamma1_m": 9000.0, "gamma2_m": 4702.0, "service_distance_m": 7053.0, "sigma1_mps": 50.0, "sigma2_mps": 50.0,
    },
    "follower_gains": {"l1": 0.1, "l2": 0.1, "l3": 0.1},
    "head_gains": {"ell1": 0.01, "ell2": 2.1, "ell3": 4.3, "ell4": 1.0},
    "observer": {"eigenvalues": [-3.0] * 5, "k1_eigenvalue": -3.0},
    "reference": {
        "x0_m": 20115.0, "v0_mps": 20.0, "w0_mps2": 0.0, "v_max_mps": 92.0,
        "phases": [{"duration_s": duration, "jerk_mps3": jerk} for duration, jerk in DEFAULT_PHASES],
    },
    "simulation": {
        "step_s": 0.01, "plant_step_s": 0.001, "duration_s": 2400.0,
        "representation": "composite", "decimate": 1, "abort_on_violation": False,
    },
    "noise": {"enabled": True, "variance": 0.5, "seed": 0},
    "monitor": {
        "tail_window_s": 100.0,
        "tolerances": asdict(Tolerances()),
        "noisy_tolerances": asdict(NOISY_TOLERANCES),
    },
}

# Named raw documents.
PRESETS: Dict[str, Dict[str, Any]] = {"paper-s5": DEFAULT_CONFIG, "three-trains": DEFAULT_CONFIG}

# Dotted paths of the CLI overrides.
OVERRIDE_PATHS: Dict[str, str] = {
    "seed": "noise.seed",
    "step": "simulation.step_s",
    "duration": "simulation.duration_s",
    "noise": "noise.enabled",
    "representation": "simulation.representation",
    "abort_on_violation": "simulation.abort_on_violation",
    "decimate": "simulation.decimate",
}

# =---------------------------------------------------------------------------------------------------= #


# =----------= #
# Domain types #
# =----------= #

@dataclass(frozen=True)
class NoiseSpec:
    """Gaussian ẇ disturbance settings."""
    enabled:  bool
    variance: float
    seed:     int


@dataclass(frozen=True)
class ObserverSettings:
    """Observer spectrum request and per-carriage gain overrides."""
    eigenvalues:   Tuple[complex, ...]
    k1_eigenvalue: float
    overrides:     Tuple[Optional[ObserverGains], ...]


@dataclass(frozen=True)
class ScenarioConfig:
    """A fully validated scenario, every carriage tuple in global carriage order."""
    name:               str
    topology:           ConsistTopology
    carriages:          Tuple[CarriageParams, ...]
    davis:              DavisCoefficients
    coupler:            CouplerParams
    constraints:        ConstraintSpec
    follower_gains:     FollowerGains
    head_gains:         HeadGains
    reference:          ReferenceProfile
    initial:            Tuple[CompositeState, ...]
    estimates:          Tuple[Optional[ObserverState], ...]
    observer:           ObserverSettings
    step:               float
    plant_step:         float
    duration:           float
    representation:     str
    decimate:           int
    abort_on_violation: bool
    noise:              NoiseSpec
    tail_window:        float
    tolerances:         Tolerances
    noisy_tolerances:   Tolerances

# =----------------------------------------------------------------------= #


# =----------------------------= #
# Field access utility functions #
# =----------------------------= #

def _field(section: Mapping[str, Any], key: str, path: str) -> Any:
    """Return section[key], raising a ConfigurationError naming the dotted path if missing."""
    if not isinstance(section, Mapping) or key not in section:
        raise ConfigurationError(f"missing field {path}", field=path)
    return section[key]


def _number(section: Mapping[str, Any], key: str, path: str) -> float:
    """Return a numeric field as float."""
    value: Any = _field(section, key, path)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigurationError(f"{path} must be a number, got {value!r}", field=path)
    return float(value)


def _integer(section: Mapping[str, Any], key: str, path: str) -> int:
    """Return an integral field as int."""
    value: Any = _field(section, key, path)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigurationError(f"{path} must be an integer, got {value!r}", field=path)
    return value


def _boolean(section: Mapping[str, Any], key: str, path: str) -> bool:
    value: Any = _field(section, key, path)
    if not isinstance(value, bool):
        raise ConfigurationError(f"{path} must be true or false, got {value!r}", field=path)
    return value


def _pair(section: Mapping[str, Any], key: str, path: str) -> Tuple[float, float]:
    """Return a two-number list as a tuple."""
    value: Any = _field(section, key, path)
    if not isinstance(value, list) or len(value) != 2 or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        raise ConfigurationError(f"{path} must be a list of two numbers, got {value!r}", field=path)
    return float(value[0]), float(value[1])


def _eigenvalue(value: Any, path: str) -> complex:
    """A real number or a [real, imaginary] pair."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, list) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ConfigurationError(f"{path} must be a number or a [real, imaginary] pair", field=path)

# =----------------------------------------------------------------------------------------------------= #


# =-----------------------= #
# Section parsing functions #
# =-----------------------= #

def _parse_fault(raw: Mapping[str, Any], path: str) -> FaultModel:
    return FaultModel(
        omega=_number(raw, "omega_rad_per_s", f"{path}.omega_rad_per_s"),
        upsilon=_number(raw, "upsilon_Nps", f"{path}.upsilon_Nps"),
        nu=_number(raw, "nu_N", f"{path}.nu_N"),
        F_c=_number(raw, "constant_amplitude", f"{path}.constant_amplitude"),
        F_p=_number(raw, "periodic_amplitude", f"{path}.periodic_amplitude"),
        F_phi=_number(raw, "phase_rad", f"{path}.phase_rad"),
        window_const=_pair(raw, "constant_window_s", f"{path}.constant_window_s"),
        window_periodic=_pair(raw, "periodic_window_s", f"{path}.periodic_window_s"),
    )


def _parse_carriage(
        entry: Mapping[str, Any],
        defaults: Mapping[str, Any],
        path: str
) -> Tuple[CarriageParams, CompositeState, Optional[ObserverState], Optional[ObserverGains]]:
    """One entry of a train: parameters, initial state, optional estimate and gain override."""

    # Parameters, the entry's own fields winning over the defaults.
    if not isinstance(entry, Mapping):
        raise ConfigurationError(f"{path} must be an object", field=path)
    merged: Dict[str, Any] = utils.merge_dict(defaults, entry)
    params: CarriageParams = CarriageParams(
        m=_number(merged, "mass_kg", f"{path}.mass_kg"),
        r=_number(merged, "actuator_rate_per_s", f"{path}.actuator_rate_per_s"),
        fault=_parse_fault(_field(merged, "fault", f"{path}.fault"), f"{path}.fault"),
    )

    # Initial true state.
    x: float = _number(entry, "x_m", f"{path}.x_m")
    v: float = _number(entry, "v_mps", f"{path}.v_mps")
    w: float = _number(entry, "w_mps2", f"{path}.w_mps2") if "w_mps2" in entry else 0.0
    state: CompositeState = CompositeState(x, v, w)

    # Optional initial estimate, unspecified channels at their default.
    estimate: Optional[ObserverState] = None
    if "estimate" in entry:
        raw: Mapping[str, Any] = entry["estimate"]
        f_hat: Any = raw.get("f_hat", [0.0, 0.0, 0.0])
        if not isinstance(f_hat, list) or len(f_hat) != 3:
            raise ConfigurationError(f"{path}.estimate.f_hat must hold three numbers", field=f"{path}.estimate.f_hat")
        estimate = ObserverState(
            x_hat=_number(raw, "x_hat_m", f"{path}.estimate.x_hat_m") if "x_hat_m" in raw else x,
            v_hat=_number(raw, "v_hat_mps", f"{path}.estimate.v_hat_mps") if "v_hat_mps" in raw else v,
            w_hat=_number(raw, "w_hat_mps2", f"{path}.estimate.w_hat_mps2") if "w_hat_mps2" in raw else 0.0,
            f_hat=tuple(float(value) for value in f_hat),
        )

    # Optional explicit observer gains.
    override: Optional[ObserverGains] = None
    if "observer" in entry:
        raw = entry["observer"]
        K: Any = _field(raw, "K", f"{path}.observer.K")
        if not isinstance(K, list) or len(K) != 5:
            raise ConfigurationError(f"{path}.observer.K must hold five numbers", field=f"{path}.observer.K")
        override = ObserverGains(k1=_number(raw, "k1_per_s", f"{path}.observer.k1_per_s"), K=tuple(float(k) for k in K))

    return params, state, estimate, override


def _parse_reference(raw: Mapping[str, Any]) -> ReferenceProfile:
    phases: Any = _field(raw, "phases", "reference.phases")
    if not isinstance(phases, list):
        raise ConfigurationError("reference.phases must be a list", field="reference.phases")
    return ReferenceProfile(
        x0=_number(raw, "x0_m", "reference.x0_m"),
        v0=_number(raw, "v0_mps", "reference.v0_mps"),
        w0=_number(raw, "w0_mps2", "reference.w0_mps2"),
        phases=tuple(
            ReferencePhase(
                _number(phase, "duration_s", f"reference.phases.{k}.duration_s"),
                _number(phase, "jerk_mps3", f"reference.phases.{k}.jerk_mps3")
            ) for k, phase in enumerate(phases)
        ),
        v_max=_number(raw, "v_max_mps", "reference.v_max_mps"),
    )


def _parse_tolerances(raw: Mapping[str, Any], path: str) -> Tolerances:
    return Tolerances(**{name: _number(raw, name, f"{path}.{name}") for name in asdict(Tolerances())})

# =----------------------------------------------------------------------------------------------------= #


# =----------------------= #
# Config utility functions #
# =----------------------= #

def config_from_dict(raw: Mapping[str, Any]) -> ScenarioConfig:
    """
    Convert a complete raw document into a validated ScenarioConfig.

    :param raw: The document, already merged over the defaults.
    :raises ConfigurationError: On a missing or mistyped field, or on any violated inequality.
    :rtype: ScenarioConfig
    """

    # Shared physical parameters.
    davis_raw: Mapping[str, Any] = _field(raw, "davis", "davis")
    davis: DavisCoefficients = DavisCoefficients(
        _number(davis_raw, "c0_N_per_kg", "davis.c0_N_per_kg"),
        _number(davis_raw, "c1_Ns_per_m_kg", "davis.c1_Ns_per_m_kg"),
        _number(davis_raw, "c2_Ns2_per_m2_kg", "davis.c2_Ns2_per_m2_kg"),
    )
    coupler_raw: Mapping[str, Any] = _field(raw, "coupler", "coupler")
    coupler: CouplerParams = CouplerParams(
        _number(coupler_raw, "stiffness_N_per_m", "coupler.stiffness_N_per_m"),
        _number(coupler_raw, "damping_Ns_per_m", "coupler.damping_Ns_per_m"),
        _number(coupler_raw, "spacing_m", "coupler.spacing_m"),
    )

    # Trains, carriage by carriage.
    trains: Any = _field(raw, "trains", "trains")
    if not isinstance(trains, list) or not all(isinstance(train, list) for train in trains):
        raise ConfigurationError("trains must be a list of lists of carriages", field="trains")
    topology: ConsistTopology = ConsistTopology(tuple(len(train) for train in trains))
    defaults: Mapping[str, Any] = _field(raw, "carriage_defaults", "carriage_defaults")
    parsed = [
        _parse_carriage(entry, defaults, f"trains.{i}.{j}")
        for i, train in enumerate(trains) for j, entry in enumerate(train)
    ]

    # Gains and constraints.
    constraints_raw: Mapping[str, Any] = _field(raw, "constraints", "constraints")
    constraints: ConstraintSpec = ConstraintSpec(
        gamma1=_number(constraints_raw, "gamma1_m", "constraints.gamma1_m"),
        gamma2=_number(constraints_raw, "gamma2_m", "constraints.gamma2_m"),
        d_s=_number(constraints_raw, "service_distance_m", "constraints.service_distance_m"),
        sigma1=_number(constraints_raw, "sigma1_mps", "constraints.sigma1_mps"),
        sigma2=_number(constraints_raw, "sigma2_mps", "constraints.sigma2_mps"),
    )
    follower_raw: Mapping[str, Any] = _field(raw, "follower_gains", "follower_gains")
    follower: FollowerGains = FollowerGains(*(_number(follower_raw, name, f"follower_gains.{name}") for name in ("l1", "l2", "l3")))
    head_raw: Mapping[str, Any] = _field(raw, "head_gains", "head_gains")
    head: HeadGains = HeadGains(*(_number(head_raw, name, f"head_gains.{name}") for name in ("ell1", "ell2", "ell3", "ell4")))

    # Observer request.
    observer_raw: Mapping[str, Any] = _field(raw, "observer", "observer")
    eigenvalues: Any = _field(observer_raw, "eigenvalues", "observer.eigenvalues")
    if not isinstance(eigenvalues, list):
        raise ConfigurationError("observer.eigenvalues must be a list", field="observer.eigenvalues")
    observer: ObserverSettings = ObserverSettings(
        eigenvalues=tuple(_eigenvalue(value, f"observer.eigenvalues.{k}") for k, value in enumerate(eigenvalues)),
        k1_eigenvalue=_number(observer_raw, "k1_eigenvalue", "observer.k1_eigenvalue"),
        overrides=tuple(override for _, _, _, override in parsed),
    )

    # Integration, noise and monitoring settings.
    simulation: Mapping[str, Any] = _field(raw, "simulation", "simulation")
    noise_raw: Mapping[str, Any] = _field(raw, "noise", "noise")
    monitor_raw: Mapping[str, Any] = _field(raw, "monitor", "monitor")
    representation: Any = _field(simulation, "representation", "simulation.representation")
    if representation not in REPRESENTATIONS:
        raise ConfigurationError(f"simulation.representation must be one of {', '.join(REPRESENTATIONS)}", field="simulation.representation")

    config: ScenarioConfig = ScenarioConfig(
        name=str(raw.get("name", "scenario")),
        topology=topology,
        carriages=tuple(params for params, _, _, _ in parsed),
        davis=davis,
        coupler=coupler,
        constraints=constraints,
        follower_gains=follower,
        head_gains=head,
        reference=_parse_reference(_field(raw, "reference", "reference")),
        initial=tuple(state for _, state, _, _ in parsed),
        estimates=tuple(estimate for _, _, estimate, _ in parsed),
        observer=observer,
        step=_number(simulation, "step_s", "simulation.step_s"),
        plant_step=_number(simulation, "plant_step_s", "simulation.plant_step_s"),
        duration=_number(simulation, "duration_s", "simulation.duration_s"),
        representation=representation,
        decimate=_integer(simulation, "decimate", "simulation.decimate"),
        abort_on_violation=_boolean(simulation, "abort_on_violation", "simulation.abort_on_violation"),
        noise=NoiseSpec(
            enabled=_boolean(noise_raw, "enabled", "noise.enabled"),
            variance=_number(noise_raw, "variance", "noise.variance"),
            seed=_integer(noise_raw, "seed", "noise.seed"),
        ),
        tail_window=_number(monitor_raw, "tail_window_s", "monitor.tail_window_s"),
        tolerances=_parse_tolerances(_field(monitor_raw, "tolerances", "monitor.tolerances"), "monitor.tolerances"),
        noisy_tolerances=_parse_tolerances(_field(monitor_raw, "noisy_tolerances", "monitor.noisy_tolerances"), "monitor.noisy_tolerances"),
    )

    validate_config(config)
    return config


def validate_config(config: ScenarioConfig) -> None:
    """
    Check every scenario-level inequality, the gains and the initial feasibility.

    :raises ConfigurationError: Listing every violation found.
    """
    violations: List[Violation] = []

    def require(holds: bool, name: str, value: float, bound: float, where: str = "simulation") -> None:
        if not holds:
            violations.append(Violation(name, float(value), float(bound), where))

    # Integration grid.
    require(config.step > 0, "step_s > 0", config.step, 0)
    require(config.plant_step > 0, "plant_step_s > 0", config.plant_step, 0)
    require(config.duration > 0, "duration_s > 0", config.duration, 0)
    require(config.duration <= config.reference.horizon * (1 + 1e-12), "duration_s <= reference horizon", config.duration, config.reference.horizon)
    require(config.decimate >= 1, "decimate >= 1", config.decimate, 1)
    for name, step in (("step_s", config.step), ("plant_step_s", config.plant_step)):
        if step > 0:
            steps: float = config.duration / step
            require(abs(steps - round(steps)) < 1e-6, f"duration_s multiple of {name}", config.duration, step)

    # Noise and monitoring.
    require(config.noise.variance >= 0, "variance >= 0", config.noise.variance, 0, "noise")
    require(config.noise.seed >= 0, "seed >= 0", config.noise.seed, 0, "noise")
    require(config.tail_window > 0, "tail_window_s > 0", config.tail_window, 0, "monitor")
    require(len(config.observer.eigenvalues) == 5, "5 observer eigenvalues", len(config.observer.eigenvalues), 5, "observer")

    # Gains, constraints and initial feasibility.
    violations.extend(validate_parameters(config.follower_gains, config.head_gains, config.constraints))
    if not violations:
        reference_start: Tuple[float, float] = config.reference.evaluate(0.0)[:2]
        violations.extend(validate_initial(
            [state.x for state in config.initial], [state.v for state in config.initial],
            config.topology, reference_start, config.constraints, config.head_gains.ell1
        ))

    if violations:
        for violation in violations:
            logger.error(str(violation))
        raise ConfigurationError(f"scenario {config.name!r} failed validation", violations)

    # The observer gains must be synthesizable.
    try:
        synthesize_bank(config.carriages, config.observer.eigenvalues, config.observer.k1_eigenvalue, config.observer.overrides)
    except PlacementError as e:
        raise ConfigurationError(f"observer gain synthesis failed: {e}", field="observer") from e


def apply_overrides(raw: Dict[str, Any], overrides: Mapping[str, Any]) -> Dict[str, Any]:
    """
    Return a copy of raw with the given dotted-path fields replaced.

    :param raw: The document.
    :param overrides: Dotted path (e.g. "noise.seed") to new value.
    :rtype: Dict[str, Any]
    """
    out: Dict[str, Any] = copy.deepcopy(raw)
    for path, value in overrides.items():
        utils.update_dict(out, *path.split("."), value=value)
    return out


def _finalize(raw: Mapping[str, Any], overrides: Optional[Mapping[str, Any]], origin: str) -> ScenarioConfig:
    """Merge over the defaults, apply the overrides and convert."""
    merged: Dict[str, Any] = apply_overrides(utils.merge_dict(DEFAULT_CONFIG, dict(raw)), overrides or {})
    try:
        config: ScenarioConfig = config_from_dict(merged)
    except ConfigurationError:
        logger.error(f"configuration from {origin} rejected")
        raise
    logger.info(f"loaded scenario {config.name!r} from {origin}: {config.topology.carriage_count} carriages in {config.topology.train_count} trains")
    return config


def load_config(path: Union[str, Path], overrides: Optional[Mapping[str, Any]] = None) -> ScenarioConfig:
    """
    Load a JSON scenario file.

    :param path: The file.
    :param overrides: Dotted-path overrides applied before validation.
    :raises ConfigurationError: If the file is unreadable, malformed or invalid.
    :rtype: ScenarioConfig
    """
    try:
        raw: Any = utils.json_read(path)
    except (FileNotFoundError, PermissionError, IsADirectoryError) as e:
        raise ConfigurationError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"{path}: {e.msg} (line {e.lineno}, column {e.colno})", line=e.lineno) from e
    if not isinstance(raw, dict):
        raise ConfigurationError(f"{path}: the document must be a JSON object", line=1)
    return _finalize(raw, overrides, str(path))


def preset_document(name: str) -> Dict[str, Any]:
    """
    Raw document of a named preset.

    :raises ConfigurationError: If the preset does not exist.
    """
    if name not in PRESETS:
        raise ConfigurationError(f"unknown preset {name!r} (available: {', '.join(sorted(PRESETS))})", field="preset")
    return copy.deepcopy(PRESETS[name])


def load_preset(name: str, overrides: Optional[Mapping[str, Any]] = None) -> ScenarioConfig:
    """Load a named preset, see load_config."""
    return _finalize(preset_document(name), overrides, f"preset {name!r}")


def config_to_dict(config: ScenarioConfig) -> Dict[str, Any]:
    """
    Serialize a config into a complete raw document, every carriage spelled out.

    :param ScenarioConfig config: The config.
    :rtype: Dict[str, Any]
    """

    def fault(model: FaultModel) -> Dict[str, Any]:
        return {
            "upsilon_Nps": model.upsilon, "nu_N": model.nu, "omega_rad_per_s": model.omega,
            "constant_amplitude": model.F_c, "periodic_amplitude": model.F_p, "phase_rad": model.F_phi,
            "constant_window_s": list(model.window_const), "periodic_window_s": list(model.window_periodic),
        }

    def carriage(k: int) -> Dict[str, Any]:
        params, state = config.carriages[k], config.initial[k]
        entry: Dict[str, Any] = {
            "x_m": state.x, "v_mps": state.v, "w_mps2": state.w,
            "mass_kg": params.m, "actuator_rate_per_s": params.r, "fault": fault(params.fault),
        }
        estimate: Optional[ObserverState] = config.estimates[k]
        if estimate is not None:
            entry["estimate"] = {
                "x_hat_m": estimate.x_hat, "v_hat_mps": estimate.v_hat, "w_hat_mps2": estimate.w_hat, "f_hat": list(estimate.f_hat),
            }
        override: Optional[ObserverGains] = config.observer.overrides[k]
        if override is not None:
            entry["observer"] = {"k1_per_s": override.k1, "K": list(override.K)}
        return entry

    first: CarriageParams = config.carriages[0]
    bounds: List[int] = [sum(config.topology.carriages_per_train[:i]) for i in range(config.topology.train_count + 1)]
    return {
        "name": config.name,
        "davis": {"c0_N_per_kg": config.davis.c0, "c1_Ns_per_m_kg": config.davis.c1, "c2_Ns2_per_m2_kg": config.davis.c2},
        "coupler": {"stiffness_N_per_m": config.coupler.a, "damping_Ns_per_m": config.coupler.b, "spacing_m": config.coupler.d_p},
        "carriage_defaults": {"mass_kg": first.m, "actuator_rate_per_s": first.r, "fault": fault(first.fault)},
        "trains": [[carriage(k) for k in range(bounds[i], bounds[i + 1])] for i in range(config.topology.train_count)],
        "constraints": {
            "gamma1_m": config.constraints.gamma1, "gamma2_m": config.constraints.gamma2,
            "service_distance_m": config.constraints.d_s,
            "sigma1_mps": config.constraints.sigma1, "sigma2_mps": config.constraints.sigma2,
        },
        "follower_gains": asdict(config.follower_gains),
        "head_gains": asdict(config.head_gains),
        "observer": {
            "eigenvalues": [value.real if value.imag == 0 else [value.real, value.imag] for value in config.observer.eigenvalues],
            "k1_eigenvalue": config.observer.k1_eigenvalue,
        },
        "reference": {
            "x0_m": config.reference.x0, "v0_mps": config.reference.v0, "w0_mps2": config.reference.w0,
            "v_max_mps": config.reference.v_max,
            "phases": [{"duration_s": phase.duration, "jerk_mps3": phase.jerk} for phase in config.reference.phases],
        },
        "simulation": {
            "step_s": config.step, "plant_step_s": config.plant_step, "duration_s": config.duration,
            "representation": config.representation, "decimate": config.decimate,
            "abort_on_violation": config.abort_on_violation,
        },
        "noise": asdict(config.noise),
        "monitor": {
            "tail_window_s": config.tail_window,
            "tolerances": asdict(config.tolerances),
            "noisy_tolerances": asdict(config.noisy_tolerances),
        },
    }


def save_config(config: ScenarioConfig, path: Union[str, Path]) -> None:
    """
    Save a config as a JSON document.
    This function is a wrapper to utils.json_write.
    """
    utils.json_write(config_to_dict(config), Path(path))


def config_hash(config: ScenarioConfig) -> str:
    """SHA-256 of the canonical JSON form of the config."""
    return utils.canonical_hash(config_to_dict(config))

# =--------------------------------------------------------------------------------------------------------------= #
