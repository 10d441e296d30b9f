#!/usr/bin/env python
# -*- coding: utf-8 *-*


"""
    This file contains the ClosedLoop class used by the Simulator:
    the full-system derivative of the true carriages, their
    observers and their controllers, evaluated in the per-step
    order the control laws require.

    Per evaluation: reference, faults, every μ (μ2 before μ3),
    inputs in chain order u11, u12, ..., u1M1, u21, ..., then
    the true and estimated state derivatives.

     ____________________________________________________
    | REFER TO THE MAIN.PY FILE FOR THE CHANGE DOC TABLE |
     ‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾
"""


# =--------------= #
# Libraries import #
# =--------------= #

from typing         import Callable, List, NamedTuple, Optional, Tuple
from src.controller import (ConstraintSpec, FollowerGains, FollowerInputs, HeadGains, HeadInputs,
                            TrainPairErrors, follower_control_affine, head_control, pair_errors, saturate_pair)
from src.faults     import FaultBank
from src.model      import Consist
from src.observer   import AuxiliaryInputs, ObserverDerivative, auxiliary_inputs, estimated_jerk, observer_rhs
from src.reference  import ReferenceProfile
import numpy as np

# =---------------------------------------------------------------------------------------------------------= #


# =--------------------------------------------------= #
# REFER TO THE MAIN.PY FILE FOR THE AUTHORSHIP SECTION #
# =--------------------------------------------------= #


# =-------------= #
# Global variable #
# =-------------= #

# Names of the per-carriage state blocks, the third one depending on the representation.
STATE_BLOCKS: Tuple[str, ...] = ("x", "v", "{third}", "x_hat", "v_hat", "w_hat")

REPRESENTATIONS: Tuple[str, ...] = ("composite", "plant", "both")

# Replaces the control law: (t, x, v) -> u.
ControlOverride = Callable[[float, np.ndarray, np.ndarray], np.ndarray]

# =-----------------------------------------------------------------------------= #


# =------------------= #
# StepEvaluation tuple #
# =------------------= #

class StepEvaluation(NamedTuple):
    """Every intermediate quantity of one closed-loop evaluation."""
    t:           float
    x:           np.ndarray
    v:           np.ndarray
    w:           np.ndarray
    tau:         np.ndarray
    f:           np.ndarray
    x_hat:       np.ndarray
    v_hat:       np.ndarray
    w_hat:       np.ndarray
    f_hat:       np.ndarray
    u:           np.ndarray
    aux:         AuxiliaryInputs
    jerk:        np.ndarray
    errors:      TrainPairErrors
    x_saturated: np.ndarray
    q_saturated: np.ndarray
    derivative:  np.ndarray

# =-----------------------------------------------= #


# =--------------= #
# ClosedLoop class #
# =--------------= #

class ClosedLoop:
    """
    Closed-loop derivative over a flat state vector laid out as
    [x, v, w or τ, x̂, v̂, ŵ, f̂ (row-major, 3 per carriage)].
    """

    # =================== #
    # Initializer methods #
    # =================== #

    def __init__(
            self,
            consist: Consist,
            bank: FaultBank,
            profile: ReferenceProfile,
            follower_gains: FollowerGains,
            head_gains: HeadGains,
            constraints: ConstraintSpec,
            k1: np.ndarray,
            K: np.ndarray,
            representation: str = "composite",
            stale_train_links: bool = False,
            control_override: Optional[ControlOverride] = None
    ) -> None:
        """
        Initializer method.

        :param Consist consist: The consist.
        :param FaultBank bank: The fault generator, windows already snapped.
        :param ReferenceProfile profile: The reference of the first train.
        :param FollowerGains follower_gains: The backstepping gains.
        :param HeadGains head_gains: The head gains.
        :param ConstraintSpec constraints: The constraints.
        :param k1: The observers' position-error gains, (n,).
        :param K: The observers' velocity-error gains, (n, 5).
        :param str representation: "composite" integrates w, "plant" integrates τ.
        :param bool stale_train_links: Feed each head with the front tail's input of the previous step.
        :param control_override: Replaces every control law when given.
        """

        # Only one true model is integrated per loop.
        if representation not in ("composite", "plant"):
            raise ValueError(f"unknown representation {representation!r}")

        # Initialize the straight-forward attributes.
        self.consist: Consist = consist
        self.bank: FaultBank = bank
        self.profile: ReferenceProfile = profile
        self.follower_gains: FollowerGains = follower_gains
        self.head_gains: HeadGains = head_gains
        self.constraints: ConstraintSpec = constraints
        self.k1: np.ndarray = np.asarray(k1, dtype=float)
        self.K: np.ndarray = np.asarray(K, dtype=float)
        self.representation: str = representation
        self.stale_train_links: bool = stale_train_links
        self.control_override: Optional[ControlOverride] = control_override
        self.n: int = consist.n

        # Front carriage of every carriage in the chain, -1 for the reference.
        self._front: np.ndarray = consist.prev.copy()
        self._front[consist.heads[0]] = -1
        self._front[consist.heads[1:]] = consist.tails[:-1]

        # Tail inputs of the previous step, read in stale mode.
        self.previous_tail_u: np.ndarray = np.zeros(len(consist.tails))

    # ============== #
    # Public methods #
    # ============== #

    def pack(self, x, v, third, x_hat, v_hat, w_hat, f_hat) -> np.ndarray:
        """Assemble the flat state vector."""
        return np.concatenate((x, v, third, x_hat, v_hat, w_hat, np.asarray(f_hat).ravel()))

    def unpack(self, y: np.ndarray) -> Tuple[np.ndarray, ...]:
        """Split the flat state vector into (x, v, third, x̂, v̂, ŵ, f̂)."""
        n: int = self.n
        blocks: List[np.ndarray] = [y[k * n:(k + 1) * n] for k in range(6)]
        return (*blocks, y[6 * n:].reshape(n, 3))

    def state_labels(self) -> List[str]:
        """Human-readable name of every entry of the state vector."""
        third: str = "w" if self.representation == "composite" else "tau"
        labels: List[str] = [
            f"{block.format(third=third)}[{i},{j}]" for block in STATE_BLOCKS for i, j in self.consist.labels
        ]
        labels.extend(f"f_hat{c + 1}[{i},{j}]" for i, j in self.consist.labels for c in range(3))
        return labels

    def initial_state(
            self,
            x: np.ndarray,
            v: np.ndarray,
            w: np.ndarray,
            x_hat: np.ndarray,
            v_hat: np.ndarray,
            w_hat: np.ndarray,
            f_hat: np.ndarray
    ) -> np.ndarray:
        """Flat initial state, converting w into the matching τ for the plant form."""
        third: np.ndarray = w if self.representation == "composite" else self.consist.plant_force(x, v, w)
        return self.pack(x, v, third, x_hat, v_hat, w_hat, f_hat)

    def evaluate(self, t: float, y: np.ndarray, gate: float, disturbance: np.ndarray) -> StepEvaluation:
        """
        Evaluate every closed-loop quantity at (t, y).

        :param float t: The time (s).
        :param y: The flat state vector.
        :param float gate: The time deciding the fault windows membership.
        :param disturbance: The additive ẇ disturbance of every carriage (m/s³).
        :rtype: StepEvaluation
        """
        consist: Consist = self.consist
        x, v, third, x_hat, v_hat, w_hat, f_hat = self.unpack(y)

        # True acceleration and force.
        if self.representation == "composite":
            w, tau = third, consist.plant_force(x, v, third)
        else:
            w, tau = consist.plant_acceleration(x, v, third), third

        # Reference and faults.
        reference: Tuple[float, float, float, float] = self.profile.evaluate(t)
        f: np.ndarray = self.bank.values(t, gate)

        # Observer auxiliary inputs, then the estimated model jerk cancelled by the controllers.
        aux: AuxiliaryInputs = auxiliary_inputs(consist, x, v, x_hat, v_hat, w_hat, self.k1, self.K)
        jerk: np.ndarray = estimated_jerk(consist, v, w_hat, f_hat, aux.mu3)

        # Inputs in chain order.
        u, errors, x_saturated, q_saturated = self.controls(t, x, v, x_hat, v_hat, w_hat, aux, jerk, reference)

        # True dynamics.
        if self.representation == "composite":
            third_rate: np.ndarray = consist.composite_jerk(v, w, f, u) + disturbance
        else:
            varpi: np.ndarray = consist.preliminary_control(u, x, v)
            third_rate = consist.plant_force_rate(x, v, tau, f, varpi) + consist.m * disturbance

        # The observer reads measured x, v and communicated estimates only.
        rates: ObserverDerivative = observer_rhs(consist, v, v_hat, w_hat, f_hat, aux, u)
        derivative: np.ndarray = self.pack(v, w, third_rate, rates.x_hat, rates.v_hat, rates.w_hat, rates.f_hat)

        return StepEvaluation(
            t, x, v, w, tau, f, x_hat, v_hat, w_hat, f_hat, u, aux, jerk, errors, x_saturated, q_saturated, derivative
        )

    def derivative(self, t: float, y: np.ndarray, gate: float, disturbance: np.ndarray) -> np.ndarray:
        """Flat time derivative of the closed loop."""
        return self.evaluate(t, y, gate, disturbance).derivative

    def controls(
            self,
            t: float,
            x: np.ndarray,
            v: np.ndarray,
            x_hat: np.ndarray,
            v_hat: np.ndarray,
            w_hat: np.ndarray,
            aux: AuxiliaryInputs,
            jerk: np.ndarray,
            reference: Tuple[float, float, float, float]
    ) -> Tuple[np.ndarray, TrainPairErrors, np.ndarray, np.ndarray]:
        """
        Inputs of every carriage and the train pair errors.

        Each input is affine in the ŵ rate of its front carriage (u0 for
        the first head), so the vectorized laws give the constant part
        and the slope, and a single pass in chain order closes the links.

        :returns: (u, pair errors, x̃ saturation mask, q̃ saturation mask).
        :rtype: Tuple
        """
        consist: Consist = self.consist
        heads, tails, followers = consist.heads, consist.tails, consist.followers
        x0, v0, w0, u0 = reference

        # Train pair errors against the front tail or the reference.
        x_front: np.ndarray = np.concatenate(([x0], x[tails[:-1]]))
        v_front: np.ndarray = np.concatenate(([v0], v[tails[:-1]]))
        w_front: np.ndarray = np.concatenate(([w0], w_hat[tails[:-1]]))
        errors: TrainPairErrors = pair_errors(x_front, v_front, x[heads], v[heads], self.constraints.d_s, self.head_gains.ell1)
        x_tilde, v_tilde, x_saturated, q_saturated = saturate_pair(errors.x_tilde, errors.v_tilde, self.head_gains, self.constraints)

        # Open-loop experiments bypass the laws.
        if self.control_override is not None:
            u: np.ndarray = np.asarray(self.control_override(t, x, v), dtype=float) * np.ones(self.n)
            return u, errors, x_saturated, q_saturated

        known: np.ndarray = np.zeros(self.n)
        slope: np.ndarray = np.ones(self.n)

        # Followers.
        if followers.size:
            prev: np.ndarray = consist.prev[followers]
            x_rate: np.ndarray = v_hat + aux.mu1
            v_rate: np.ndarray = w_hat + aux.mu2
            inputs: FollowerInputs = FollowerInputs(
                x_hat=x_hat[followers], x_hat_prev=x_hat[prev],
                v_hat=v_hat[followers], v_hat_prev=v_hat[prev],
                w_hat=w_hat[followers], w_hat_prev=w_hat[prev],
                x_hat_rate=x_rate[followers], x_hat_prev_rate=x_rate[prev],
                v_hat_rate=v_rate[followers], v_hat_prev_rate=v_rate[prev],
                w_hat_prev_rate=0.0, model_jerk=jerk[followers]
            )
            known[followers], slope[followers] = follower_control_affine(inputs, self.follower_gains, consist.coupler.d_p)

        # Heads, on the saturated errors.
        known[heads] = head_control(
            HeadInputs(x_tilde, v_tilde, w_front - w_hat[heads], jerk[heads], 0.0), self.head_gains, self.constraints
        )

        # Close the links in chain order.
        u = np.zeros(self.n)
        train: int = 0
        for k in range(self.n):
            front: int = int(self._front[k])
            if front < 0:
                link: float = u0
            elif k in heads:
                tail_u: float = self.previous_tail_u[train] if self.stale_train_links else u[front]
                link = jerk[front] + tail_u
                train += 1
            else:
                link = jerk[front] + u[front]
            u[k] = known[k] + slope[k] * link

        return u, errors, x_saturated, q_saturated

# =----------------------------------------------------------------------------------------------------------= #
