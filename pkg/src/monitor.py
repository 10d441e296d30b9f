#!/usr/bin/env python
# -*- coding: utf-8 *-*


"""
    This file contains the requirement monitor: it checks a
    SimulationRecord against the inter-train hard bounds, the
    tail-window convergence tolerances of the intra-train and
    inter-train errors, and the observer settling thresholds,
    and condenses everything into a SummaryReport.

    Every verdict is computed from the record and the barrier saturations
    the simulator reported. The summary keeps those with source "runtime",
    so a record read back from its CSV file, monitored with the runtime
    events of its summary, yields the same report.

     ____________________________________________________
    | REFER TO THE MAIN.PY FILE FOR THE CHANGE DOC TABLE |
     ‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾
"""


# =--------------= #
# Libraries import #
# =--------------= #

from typing         import Any, Dict, List, Optional, Sequence, Tuple
from dataclasses    import dataclass, asdict, field
from src.controller import ConstraintSpec, HeadGains
from src.record     import SimulationRecord
import numpy as np
import src.logger as logger

# =------------------------------------------------------------= #


# =--------------------------------------------------= #
# REFER TO THE MAIN.PY FILE FOR THE AUTHORSHIP SECTION #
# =--------------------------------------------------= #


# =-------------= #
# Global variable #
# =-------------= #

# Observer settling thresholds.
FAULT_RELATIVE_TOLERANCE: float = 1e-3
ACCELERATION_TOLERANCE: float = 1e-4

# Only intervals between fault transitions this long are judged,
# on their last SETTLING_WINDOW seconds.
SETTLING_INTERVAL: float = 100.0
SETTLING_WINDOW: float = 10.0

# =--------------------------------------------------------= #


# =----------= #
# Domain types #
# =----------= #

@dataclass(frozen=True)
class Tolerances:
    """Tail-window mean tolerances of the convergence requirements."""
    x_tilde: float = 1.0
    v_tilde: float = 0.05
    gap:     float = 0.05
    dv:      float = 0.02


# Tolerances used when the Gaussian disturbance is enabled.
NOISY_TOLERANCES: Tolerances = Tolerances(x_tilde=5.0, v_tilde=0.5, gap=0.5, dv=0.2)


@dataclass(frozen=True)
class ConstraintEvent:
    """
    A maximal episode during which a pair quantity left its open interval.
    extreme is the furthest value reached and bound the crossed limit.
    """
    quantity: str
    pair:     int
    start:    float
    end:      float
    extreme:  float
    bound:    float
    source:   str = "monitor"

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, content: Dict[str, Any]) -> "ConstraintEvent":
        return cls(**content)


@dataclass
class SummaryReport:
    """Verdicts, extrema, tail metrics and events of one run."""
    verdicts:    Dict[str, bool]
    pairs:       List[Dict[str, Any]]
    trains:      List[Dict[str, Any]]
    observer:    List[Dict[str, Any]]
    events:      List[ConstraintEvent]
    tolerances:  Tolerances
    tail_window: float
    metadata:    Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """The three control requirements all hold."""
        return all(self.verdicts[name] for name in ("R1", "R2", "R3"))

    def to_dict(self) -> Dict[str, Any]:
        """Return the machine-readable form of the report."""
        return {
            "passed": self.passed,
            "verdicts": dict(self.verdicts),
            "pairs": self.pairs,
            "trains": self.trains,
            "observer": self.observer,
            "events": [event.to_dict() for event in self.events],
            "tolerances": asdict(self.tolerances),
            "tail_window_s": self.tail_window,
            **self.metadata,
        }


def runtime_events(summary: Dict[str, Any]) -> List[ConstraintEvent]:
    """
    Runtime events stored in a summary document.

    :param summary: The parsed summary.json content.
    :type summary: Dict[str, Any]
    :rtype: List[ConstraintEvent]
    """
    return [ConstraintEvent.from_dict(event) for event in summary.get("events", []) if event.get("source") == "runtime"]

# =-----------------------------------------------------------------------------------= #


# =---------------= #
# Monitor functions #
# =---------------= #

def find_episodes(
        t: np.ndarray,
        values: np.ndarray,
        lower: float,
        upper: float,
        quantity: str,
        pair: int
) -> List[ConstraintEvent]:
    """
    Group the samples lying outside the open interval (lower, upper) into episodes.

    :param t: The sample times.
    :param values: The monitored samples.
    :param float lower: The lower bound, excluded.
    :param float upper: The upper bound, excluded.
    :param str quantity: The quantity name reported in the events.
    :param int pair: The train pair index.
    :rtype: List[ConstraintEvent]
    """

    # Rising and falling edges of the outside mask.
    outside: np.ndarray = ~((lower < values) & (values < upper))
    edges: np.ndarray = np.diff(np.concatenate(([0], outside.astype(int), [0])))
    starts: np.ndarray = np.flatnonzero(edges == 1)
    stops: np.ndarray = np.flatnonzero(edges == -1)

    events: List[ConstraintEvent] = []
    for start, stop in zip(starts, stops):

        # Furthest excursion of the episode.
        segment: np.ndarray = values[start:stop]
        excess: np.ndarray = np.maximum(segment - upper, lower - segment)
        k: int = int(np.argmax(excess))
        bound: float = upper if segment[k] >= upper else lower
        events.append(ConstraintEvent(quantity, pair, float(t[start]), float(t[stop - 1]), float(segment[k]), bound))

    return events


def _tail_mean(values: np.ndarray, mask: np.ndarray) -> float:
    return float(np.mean(np.abs(values[mask])))


def _settling_intervals(t0: float, t_end: float, transitions: Sequence[float]) -> List[Tuple[float, float]]:
    """Intervals between consecutive fault transitions long enough to be judged."""
    points: List[float] = sorted({t0, t_end, *(tk for tk in transitions if t0 < tk < t_end)})
    return [(a, b) for a, b in zip(points[:-1], points[1:]) if b - a >= SETTLING_INTERVAL]


def observer_settling(
        record: SimulationRecord,
        tail: np.ndarray,
        transitions: Optional[Sequence[Sequence[float]]] = None
) -> Tuple[List[Dict[str, Any]], bool]:
    """
    Per-carriage observer metrics and the settling verdict.

    :param SimulationRecord record: The record.
    :param tail: Mask of the tail-window samples.
    :param transitions: Per-carriage fault transition times. By default, none.
    :returns: The metrics and whether every judged interval settled.
    :rtype: Tuple
    """
    t: np.ndarray = record.time
    metrics: List[Dict[str, Any]] = []
    settled: bool = True

    for k, (i, j) in enumerate(record.labels):

        # Fault estimation error against its relative threshold.
        force: np.ndarray = record.carriage("f_eff_Nps", i, j)
        error: np.ndarray = np.abs(force - record.carriage("f_eff_hat_Nps", i, j))
        threshold: np.ndarray = FAULT_RELATIVE_TOLERANCE * np.maximum(1.0, np.abs(force))
        e_w: np.ndarray = np.abs(record.carriage("e_w_mps2", i, j))
        exceeded: np.ndarray = t[error > threshold]

        # Judge the end of every long enough interval.
        verdict: bool = True
        for a, b in _settling_intervals(t[0], t[-1], transitions[k] if transitions else ()):
            window: np.ndarray = (t >= b - SETTLING_WINDOW) & (t < b) if b < t[-1] else t >= b - SETTLING_WINDOW
            if np.any(window) and (np.any(error[window] >= threshold[window]) or np.any(e_w[window] >= ACCELERATION_TOLERANCE)):
                verdict = False
        settled = settled and verdict

        metrics.append({
            "carriage": [i, j],
            "tail_mean_fault_error_Nps": _tail_mean(error, tail),
            "tail_mean_abs_e_w_mps2": _tail_mean(e_w, tail),
            "last_fault_error_above_threshold_s": float(exceeded[-1]) if exceeded.size else None,
            "settled": verdict,
        })

    return metrics, settled


def monitor_requirements(
        record: SimulationRecord,
        constraints: ConstraintSpec,
        head_gains: HeadGains,
        d_p: float,
        tolerances: Tolerances = Tolerances(),
        tail_window: float = 100.0,
        transitions: Optional[Sequence[Sequence[float]]] = None,
        runtime_events: Optional[Sequence[ConstraintEvent]] = None
) -> SummaryReport:
    """
    Check a record against the control requirements.

    The inter-train bounds on x̃ and ṽ are checked at every sample, so is the
    q̃ bound for diagnostics; convergence is judged on tail-window means.

    :param SimulationRecord record: The record.
    :param ConstraintSpec constraints: The constraints.
    :param HeadGains head_gains: The head gains, ell1 defining the q̃ bounds.
    :param float d_p: The nominal carriage spacing (m).
    :param Tolerances tolerances: The convergence tolerances.
    :param float tail_window: The tail window length (s).
    :param transitions: Per-carriage fault transition times for the observer verdict.
    :param runtime_events: Barrier saturations reported by the simulator.
    :rtype: SummaryReport
    """

    # Sample grid and tail window.
    t: np.ndarray = record.time
    tail: np.ndarray = t >= t[-1] - tail_window
    varrho1, varrho2 = constraints.varrho(head_gains.ell1)
    bounds: Dict[str, Tuple[str, float, float]] = {
        "x_tilde": ("xtilde_m", -constraints.rho2, constraints.rho1),
        "v_tilde": ("vtilde_mps", -constraints.sigma2, constraints.sigma1),
        "q_tilde": ("qtilde_mps", -varrho2, varrho1),
    }

    # Inter-train pairs.
    events: List[ConstraintEvent] = list(runtime_events or [])
    pairs: List[Dict[str, Any]] = []
    for i in range(1, record.train_count + 1):
        summary: Dict[str, Any] = {"pair": i}
        for quantity, (column, lower, upper) in bounds.items():
            values: np.ndarray = record.pair(column, i)
            events.extend(find_episodes(t, values, lower, upper, quantity, i))
            summary[f"{quantity}_min"] = float(np.min(values))
            summary[f"{quantity}_max"] = float(np.max(values))
        summary["tail_mean_abs_x_tilde"] = _tail_mean(record.pair("xtilde_m", i), tail)
        summary["tail_mean_abs_v_tilde"] = _tail_mean(record.pair("vtilde_mps", i), tail)
        pairs.append(summary)

    # Intra-train gaps.
    trains: List[Dict[str, Any]] = []
    labels: List[Tuple[int, int]] = record.labels
    for i in range(1, record.train_count + 1):
        count: int = sum(1 for train, _ in labels if train == i)
        gaps: List[float] = []
        spreads: List[float] = []
        for j in range(2, count + 1):
            gap: np.ndarray = record.carriage("x_m", i, j - 1) - record.carriage("x_m", i, j)
            gaps.append(_tail_mean(gap - d_p, tail))
            spreads.append(_tail_mean(record.carriage("v_mps", i, j - 1) - record.carriage("v_mps", i, j), tail))
        trains.append({"train": i, "tail_mean_abs_gap_error": max(gaps), "tail_mean_abs_velocity_gap": max(spreads)})

    # Observer settling.
    observer, settled = observer_settling(record, tail, transitions)

    # Verdicts.
    crossed = lambda quantity: any(event.quantity == quantity for event in events)
    verdicts: Dict[str, bool] = {
        "R1": all(train["tail_mean_abs_gap_error"] < tolerances.gap and train["tail_mean_abs_velocity_gap"] < tolerances.dv for train in trains),
        "R2": not crossed("x_tilde") and all(pair["tail_mean_abs_x_tilde"] < tolerances.x_tilde for pair in pairs),
        "R3": not crossed("v_tilde") and all(pair["tail_mean_abs_v_tilde"] < tolerances.v_tilde for pair in pairs),
        "R3_prime": not crossed("q_tilde"),
        "observer": settled,
    }

    # Trace the outcome.
    for event in (event for event in events if event.source == "monitor"):
        logger.warning(f"{event.quantity} of train pair {event.pair} out of bounds from t={event.start:g} s to t={event.end:g} s (extreme {event.extreme:g})")
    logger.info("verdicts: " + ", ".join(f"{name}={'pass' if ok else 'fail'}" for name, ok in verdicts.items()))

    return SummaryReport(verdicts, pairs, trains, observer, events, tolerances, tail_window)

# =-------------------------------------------------------------------------------------------------------------= #
