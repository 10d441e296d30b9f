#!/usr/bin/env python
# -*- coding: utf-8 *-*


"""
    This file contains everything related to the Simulator class
    used by the TrainCruise software: the fixed-step RK4 integrator,
    the Gaussian disturbance stream and the scenario runner.

     ____________________________________________________
    | REFER TO THE MAIN.PY FILE FOR THE CHANGE DOC TABLE |
     ‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾
"""


# =--------------= #
# Libraries import #
# =--------------= #

from typing         import Callable, List, Optional, Sequence, Tuple
from dataclasses    import replace
from .ClosedLoop    import ClosedLoop, ControlOverride, StepEvaluation
from src.config     import ScenarioConfig
from src.errors     import ConstraintViolationError, IntegrationError
from src.faults     import FaultBank
from src.model      import Consist
from src.monitor    import ConstraintEvent, SummaryReport, monitor_requirements
from src.observer   import synthesize_bank
from src.record     import SimulationRecord, build_columns
import numpy as np
import src.logger as logger

# =------------------------------------------------------------------------= #


# =--------------------------------------------------= #
# REFER TO THE MAIN.PY FILE FOR THE AUTHORSHIP SECTION #
# =--------------------------------------------------= #


# =-----------------= #
# Integrator function #
# =-----------------= #

def _check_finite(k: np.ndarray, t: float, labels: Optional[Sequence[str]]) -> None:
    """Raise an IntegrationError naming every non-finite entry of k."""
    if not np.all(np.isfinite(k)):
        indices: np.ndarray = np.flatnonzero(~np.isfinite(k))
        names: List[str] = [labels[i] for i in indices] if labels else [f"state[{i}]" for i in indices]
        raise IntegrationError(t, indices.tolist(), names)


def rk4_step(
        rhs: Callable[[float, np.ndarray], np.ndarray],
        y: np.ndarray,
        t: float,
        h: float,
        labels: Optional[Sequence[str]] = None,
        k1: Optional[np.ndarray] = None
) -> np.ndarray:
    """
    Advance y by one classical fourth-order Runge-Kutta step.

    :param rhs: The derivative function (t, y) -> ẏ.
    :param y: The state at t.
    :param float t: The time (s).
    :param float h: The step (s).
    :param labels: Names of the state entries, used in error reports.
    :param k1: The derivative at (t, y), when already known.
    :raises IntegrationError: If a stage derivative is not finite.
    :rtype: numpy.ndarray
    """
    y = np.asarray(y, dtype=float)

    # Four stages, each checked.
    k1 = rhs(t, y) if k1 is None else k1
    _check_finite(k1, t, labels)
    k2: np.ndarray = rhs(t + h / 2, y + h / 2 * k1)
    _check_finite(k2, t + h / 2, labels)
    k3: np.ndarray = rhs(t + h / 2, y + h / 2 * k2)
    _check_finite(k3, t + h / 2, labels)
    k4: np.ndarray = rhs(t + h, y + h * k3)
    _check_finite(k4, t + h, labels)

    return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)

# =--------------------------------------------------------------------------= #


# =-------------------= #
# Disturbance functions #
# =-------------------= #

def inject_disturbance(rng: np.random.Generator, variance: float, count: int = 1) -> np.ndarray:
    """
    Draw one zero-mean Gaussian ẇ disturbance sample per carriage (m/s³).

    :param rng: The random stream.
    :param float variance: The sample variance.
    :param int count: The number of carriages.
    :rtype: numpy.ndarray
    """
    return rng.normal(0.0, np.sqrt(variance), size=count)


class DisturbanceSource:
    """Seeded per-step disturbance, zero when disabled."""

    def __init__(self, enabled: bool, variance: float, seed: int, count: int) -> None:
        self.enabled: bool = enabled
        self.variance: float = variance
        self.count: int = count
        self.rng: np.random.Generator = np.random.default_rng(seed)

    def sample(self) -> np.ndarray:
        """The disturbance held over the next step."""
        if not self.enabled:
            return np.zeros(self.count)
        return inject_disturbance(self.rng, self.variance, self.count)

# =----------------------------------------------------------= #


# =-------------= #
# Simulator class #
# =-------------= #

class Simulator:
    """
    Runs one scenario in one representation, sampling
    a SimulationRecord every config.decimate steps plus the end state.
    """

    # =================== #
    # Initializer methods #
    # =================== #

    def __init__(
            self,
            config: ScenarioConfig,
            representation: Optional[str] = None,
            stale_train_links: bool = False,
            control_override: Optional[ControlOverride] = None
    ) -> None:
        """
        Initializer method.

        :param ScenarioConfig config: The validated scenario.
        :param representation: "composite" or "plant". By default, the config's (composite for "both").
        :type representation: str or None
        :param bool stale_train_links: Diagnostic mode feeding heads with the previous step's tail input.
        :param control_override: Replaces the control laws, (t, x, v) -> u.
        """

        # Resolve the representation and its step.
        chosen: str = representation or config.representation
        self.representation: str = "composite" if chosen == "both" else chosen
        self.config: ScenarioConfig = config
        self.step: float = config.plant_step if self.representation == "plant" else config.step
        self.steps: int = int(round(config.duration / self.step))
        self.decimate: int = max(1, int(round(config.decimate * config.step / self.step)))

        # Consist, faults snapped on this grid, observer gains.
        self.consist: Consist = Consist(config.topology, config.carriages, config.davis, config.coupler)
        self.bank: FaultBank = FaultBank([carriage.fault for carriage in config.carriages], self.step)
        k1, K = synthesize_bank(
            config.carriages, config.observer.eigenvalues, config.observer.k1_eigenvalue, config.observer.overrides
        )

        # Closed loop and disturbance.
        self.loop: ClosedLoop = ClosedLoop(
            self.consist, self.bank, config.reference, config.follower_gains, config.head_gains, config.constraints,
            k1, K, self.representation, stale_train_links, control_override
        )
        self.disturbance: DisturbanceSource = DisturbanceSource(
            config.noise.enabled, config.noise.variance, config.noise.seed, self.consist.n
        )
        self.columns: List[str] = build_columns(self.consist.labels, config.topology.train_count)
        self.events: List[ConstraintEvent] = []

    # ============== #
    # Public methods #
    # ============== #

    def initial_state(self) -> np.ndarray:
        """Flat initial state; unspecified estimates start at the measured x, v and zero ŵ, f̂."""
        config: ScenarioConfig = self.config
        x: np.ndarray = np.array([state.x for state in config.initial])
        v: np.ndarray = np.array([state.v for state in config.initial])
        w: np.ndarray = np.array([state.w for state in config.initial])
        x_hat, v_hat, w_hat, f_hat = x.copy(), v.copy(), np.zeros_like(x), np.zeros((len(x), 3))
        for k, estimate in enumerate(config.estimates):
            if estimate is not None:
                x_hat[k], v_hat[k], w_hat[k] = estimate.x_hat, estimate.v_hat, estimate.w_hat
                f_hat[k] = estimate.f_hat
        return self.loop.initial_state(x, v, w, x_hat, v_hat, w_hat, f_hat)

    def run(self) -> SimulationRecord:
        """
        Integrate the scenario over its horizon.

        :raises IntegrationError: If the derivative stops being finite.
        :raises ConstraintViolationError: On a barrier saturation when the config asks to abort.
        :rtype: SimulationRecord
        """
        h: float = self.step
        labels: List[str] = self.loop.state_labels()
        y: np.ndarray = self.initial_state()
        rows: List[np.ndarray] = []
        self.events = []

        logger.info(f"running {self.config.name!r} ({self.representation}, h={h:g} s, {self.steps} steps)")

        for k in range(self.steps):

            # Step-held fault gate and disturbance.
            t: float = k * h
            gate: float = t + h / 2
            disturbance: np.ndarray = self.disturbance.sample()
            evaluation: StepEvaluation = self.loop.evaluate(t, y, gate, disturbance)
            self._track_saturation(evaluation, t, h)

            # Samples use the gate of the step that led to them.
            if k % self.decimate == 0:
                rows.append(self._sample(evaluation if k == 0 else self.loop.evaluate(t, y, t - h / 2, disturbance)))

            # Integrate, reusing the first stage.
            y = rk4_step(
                lambda s, z: self.loop.derivative(s, z, gate, disturbance), y, t, h, labels, k1=evaluation.derivative
            )
            self.loop.previous_tail_u = evaluation.u[self.consist.tails]

        # The end state is always sampled, whatever the stride.
        t_end: float = self.steps * h
        rows.append(self._sample(self.loop.evaluate(t_end, y, max(t_end - h / 2, h / 2), np.zeros(self.consist.n))))

        logger.info(f"{self.config.name!r} ({self.representation}) done: {len(rows)} samples, {len(self.events)} runtime events")
        return SimulationRecord(self.columns, np.array(rows), metadata={"representation": self.representation, "step_s": h})

    # =============== #
    # Private methods #
    # =============== #

    def _sample(self, evaluation: StepEvaluation) -> np.ndarray:
        """One record row."""
        e: StepEvaluation = evaluation
        carriages: np.ndarray = np.column_stack((
            e.x, e.v, e.w, e.tau, e.u,
            self.bank.force_rates(e.f), self.bank.force_rates(e.f_hat),
            e.x_hat - e.x, e.v_hat - e.v, e.w_hat - e.w
        ))
        pairs: np.ndarray = np.column_stack(e.errors)
        return np.concatenate(([e.t], carriages.ravel(), pairs.ravel()))

    def _track_saturation(self, evaluation: StepEvaluation, t: float, h: float) -> None:
        """Open or extend a runtime event for every saturated barrier argument."""
        for quantity, mask, values in (
                ("x_tilde", evaluation.x_saturated, evaluation.errors.x_tilde),
                ("q_tilde", evaluation.q_saturated, evaluation.errors.q_tilde)
        ):
            for pair in np.flatnonzero(mask) + 1:
                value: float = float(values[pair - 1])

                # Abort on request.
                if self.config.abort_on_violation:
                    logger.error(f"aborting: {quantity} of train pair {pair} saturated at t={t:g} s")
                    raise ConstraintViolationError(t, int(pair), quantity, value)

                # Extend the running episode, or open a new one.
                previous: Optional[ConstraintEvent] = next(
                    (event for event in reversed(self.events) if event.quantity == quantity and event.pair == pair), None
                )
                if previous is not None and abs(previous.end - (t - h)) < h / 2:
                    extreme: float = value if abs(value) > abs(previous.extreme) else previous.extreme
                    self.events[self.events.index(previous)] = replace(previous, end=t, extreme=extreme)
                else:
                    varrho1, varrho2 = self.config.constraints.varrho(self.config.head_gains.ell1)
                    upper, lower = (
                        (self.config.constraints.rho1, -self.config.constraints.rho2) if quantity == "x_tilde" else (varrho1, -varrho2)
                    )
                    self.events.append(ConstraintEvent(quantity, int(pair), t, t, value, upper if value > 0 else lower, "runtime"))
                    logger.warning(f"{quantity} of train pair {pair} saturated at t={t:g} s ({value:g})")

# =-------------------------------------------------------------------------------------------------------------= #


# =----------------= #
# Scenario functions #
# =----------------= #

def run_scenario(
        config: ScenarioConfig,
        stale_train_links: bool = False,
        control_override: Optional[ControlOverride] = None
) -> Tuple[SimulationRecord, SummaryReport]:
    """
    Run a scenario and check its requirements.
    With the "both" representation the plant record is attached as companion.

    :param ScenarioConfig config: The validated scenario.
    :param bool stale_train_links: Diagnostic stale link mode.
    :param control_override: Replaces the control laws.
    :rtype: Tuple[SimulationRecord, SummaryReport]
    """

    # Primary run.
    simulator: Simulator = Simulator(config, None, stale_train_links, control_override)
    record: SimulationRecord = simulator.run()

    # Companion run in the physical form.
    if config.representation == "both":
        record.companion = Simulator(config, "plant", stale_train_links, control_override).run()

    # Requirement monitoring on the primary record.
    tolerances = config.noisy_tolerances if config.noise.enabled else config.tolerances
    report: SummaryReport = monitor_requirements(
        record, config.constraints, config.head_gains, config.coupler.d_p, tolerances, config.tail_window,
        transitions=simulator.bank.transitions(), runtime_events=simulator.events
    )
    report.metadata.update({"representation": config.representation, "seed": config.noise.seed, "noise": config.noise.enabled})

    if report.passed:
        logger.info(f"{config.name!r}: every requirement holds")
    else:
        logger.warning(f"{config.name!r}: requirement verdict failed")
    return record, report

# =------------------------------------------------------------------------------------------------------= #
