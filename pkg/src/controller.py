#!/usr/bin/env python
# -*- coding: utf-8 *-*


"""
    This file contains the distributed fault-tolerant control
    laws: the backstepping law of the following carriages, the
    barrier-transformed law of the head carriages, the feasibility
    validators of the gains and of the initial states, and the
    forward-mode evaluation of the virtual controls.

    Every law is elementwise: scalars, arrays over carriages and
    Dual numbers are accepted alike.

     ____________________________________________________
    | REFER TO THE MAIN.PY FILE FOR THE CHANGE DOC TABLE |
     ‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾
"""


# =--------------= #
# Libraries import #
# =--------------= #

from typing      import Any, Callable, Dict, List, NamedTuple, Sequence, Tuple, Union
from dataclasses import dataclass
from src.Dual    import Dual, directional, log1p, value_of, variables
from src.errors  import BarrierDomainError, Violation
from src.model   import ConsistTopology
import numpy as np

# =-------------------------------------------------------------------------------= #


# =--------------------------------------------------= #
# REFER TO THE MAIN.PY FILE FOR THE AUTHORSHIP SECTION #
# =--------------------------------------------------= #


# =-------------= #
# Global variable #
# =-------------= #

# Distance kept from a barrier pole when saturating an argument.
BARRIER_MARGIN: float = 1e-9

# =-------------------------------------------------------= #


# =----------= #
# Domain types #
# =----------= #

@dataclass(frozen=True)
class FollowerGains:
    """Backstepping gains of the following carriages."""
    l1: float
    l2: float
    l3: float


@dataclass(frozen=True)
class HeadGains:
    """Gains of the head carriages' barrier law."""
    ell1: float
    ell2: float
    ell3: float
    ell4: float


@dataclass(frozen=True)
class ConstraintSpec:
    """
    Inter-train distance and velocity-difference constraints.
    gamma1 is the communication radius, gamma2 the emergency
    braking distance and d_s the service braking distance.
    """
    gamma1: float
    gamma2: float
    d_s:    float
    sigma1: float
    sigma2: float

    @property
    def rho1(self) -> float:
        return self.gamma1 - self.d_s

    @property
    def rho2(self) -> float:
        return self.d_s - self.gamma2

    def varrho(self, ell1: float) -> Tuple[float, float]:
        """Bounds (varrho1, varrho2) of q̃ for the given ell1."""
        return -ell1 * self.rho2 + self.sigma1, -ell1 * self.rho1 + self.sigma2


class TrainPairErrors(NamedTuple):
    """Errors between a train's head and the tail in front of it."""
    epsilon: Any
    x_tilde: Any
    v_tilde: Any
    q_tilde: Any


class BetaValues(NamedTuple):
    """β1, β2 and the partials of β1."""
    beta1:      Any
    beta2:      Any
    d_beta1_dx: Any
    d_beta1_dv: Any


@dataclass
class FollowerInputs:
    """Everything the law of a following carriage reads; _prev fields belong to the carriage in front."""
    x_hat:           Any
    x_hat_prev:      Any
    v_hat:           Any
    v_hat_prev:      Any
    w_hat:           Any
    w_hat_prev:      Any
    x_hat_rate:      Any
    x_hat_prev_rate: Any
    v_hat_rate:      Any
    v_hat_prev_rate: Any
    w_hat_prev_rate: Any
    model_jerk:      Any


@dataclass
class HeadInputs:
    """Everything the law of a head carriage reads."""
    x_tilde:     Any
    v_tilde:     Any
    w_hat_tilde: Any
    model_jerk:  Any
    feedforward: Any

# =-----------------------------------------------------------------------------------------= #


# =--------------= #
# Follower control #
# =--------------= #

def z1_error(x_hat: Any, x_hat_prev: Any, d_p: float) -> Any:
    """Spacing error z1 = x̂ - x̂_prev + d_p."""
    return x_hat - x_hat_prev + d_p


def alpha1(x_hat: Any, x_hat_prev: Any, v_hat_prev: Any, d_p: float, gains: FollowerGains) -> Any:
    """
    Virtual velocity command.

    :param x_hat: The carriage's position estimate.
    :param x_hat_prev: The front carriage's position estimate.
    :param v_hat_prev: The front carriage's velocity estimate.
    :param float d_p: The nominal spacing (m).
    :param FollowerGains gains: The backstepping gains.
    """
    return v_hat_prev - (gains.l1 + 1) * z1_error(x_hat, x_hat_prev, d_p)


def alpha1_partials(gains: FollowerGains) -> Tuple[float, float, float]:
    """
    Partials of alpha1 with respect to (x̂, x̂_prev, v̂_prev).
    alpha1 is affine so a single forward pass at the origin gives them everywhere.
    """
    seeds: List[Dual] = variables([0.0, 0.0, 0.0])
    tangent: np.ndarray = alpha1(*seeds, 0.0, gains).tangent
    return float(tangent[0]), float(tangent[1]), float(tangent[2])


def alpha2(
        x_hat: Any,
        x_hat_prev: Any,
        v_hat: Any,
        v_hat_prev: Any,
        w_hat_prev: Any,
        d_p: float,
        gains: FollowerGains,
        partials: Tuple[float, float, float] = None
) -> Any:
    """
    Virtual acceleration command.

    :param partials: alpha1's partials. By default, computed from the gains.
    :type partials: Tuple[float, float, float]
    """

    # alpha1 and its partials.
    a_x, a_xp, a_vp = alpha1_partials(gains) if partials is None else partials
    z1: Any = z1_error(x_hat, x_hat_prev, d_p)
    z2: Any = v_hat - alpha1(x_hat, x_hat_prev, v_hat_prev, d_p, gains)

    # Feedback, then one feedforward / damping pair per alpha1 argument.
    return (
        -gains.l2 * z2 - z1 - 0.5 * z2
        + a_x * v_hat - 0.5 * a_x * a_x * z2
        + a_xp * v_hat_prev - 0.5 * a_xp * a_xp * z2
        + a_vp * w_hat_prev - 0.5 * a_vp * a_vp * z2
    )


def z_errors(
        x_hat: Any,
        x_hat_prev: Any,
        v_hat: Any,
        v_hat_prev: Any,
        w_hat: Any,
        w_hat_prev: Any,
        d_p: float,
        gains: FollowerGains
) -> Tuple[Any, Any, Any]:
    """
    Backstepping errors (z1, z2, z3) of a following carriage.

    :rtype: Tuple
    """
    z1: Any = z1_error(x_hat, x_hat_prev, d_p)
    z2: Any = v_hat - alpha1(x_hat, x_hat_prev, v_hat_prev, d_p, gains)
    z3: Any = w_hat - alpha2(x_hat, x_hat_prev, v_hat, v_hat_prev, w_hat_prev, d_p, gains)
    return z1, z2, z3


def alpha2_gradient(
        x_hat: Any,
        x_hat_prev: Any,
        v_hat: Any,
        v_hat_prev: Any,
        w_hat_prev: Any,
        d_p: float,
        gains: FollowerGains,
        partials: Tuple[float, float, float] = None
) -> Tuple[Any, np.ndarray]:
    """
    alpha2 and its gradient with respect to (x̂, x̂_prev, v̂, v̂_prev, ŵ_prev),
    from a single five-direction forward pass.

    :returns: The value and a (5,) + shape gradient.
    :rtype: Tuple
    """
    seeds: List[Dual] = variables([x_hat, x_hat_prev, v_hat, v_hat_prev, w_hat_prev])
    out: Dual = alpha2(*seeds, d_p, gains, partials)
    return out.value, out.tangent


def alpha3(z2: Any, z3: Any, gradient: np.ndarray, rates: Sequence[Any], gains: FollowerGains) -> Any:
    """
    Virtual jerk command.

    :param z2: The velocity backstepping error.
    :param z3: The acceleration backstepping error.
    :param gradient: alpha2's gradient, see alpha2_gradient.
    :param rates: Time derivatives of (x̂, x̂_prev, v̂, v̂_prev, ŵ_prev), from the observer.
    :param FollowerGains gains: The backstepping gains.
    """
    return -gains.l3 * z3 - z2 + sum(gradient[k] * rates[k] for k in range(5))


def follower_control_affine(inputs: FollowerInputs, gains: FollowerGains, d_p: float) -> Tuple[Any, Any]:
    """
    Input of a following carriage together with its sensitivity to the
    front carriage's ŵ rate, the input being affine in that rate.

    :returns: (u, ∂u/∂ŵ_prev_rate).
    :rtype: Tuple
    """

    # Value and gradient of alpha2.
    partials: Tuple[float, float, float] = alpha1_partials(gains)
    value, gradient = alpha2_gradient(
        inputs.x_hat, inputs.x_hat_prev, inputs.v_hat, inputs.v_hat_prev, inputs.w_hat_prev, d_p, gains, partials
    )

    # Backstepping errors.
    z2: Any = inputs.v_hat - alpha1(inputs.x_hat, inputs.x_hat_prev, inputs.v_hat_prev, d_p, gains)
    z3: Any = inputs.w_hat - value

    # Cancel the estimated dynamics and inject alpha3.
    rates: Tuple[Any, ...] = (
        inputs.x_hat_rate, inputs.x_hat_prev_rate, inputs.v_hat_rate, inputs.v_hat_prev_rate, inputs.w_hat_prev_rate
    )
    u: Any = alpha3(z2, z3, gradient, rates, gains) - inputs.model_jerk
    return u, gradient[4]


def follower_control(inputs: FollowerInputs, gains: FollowerGains, d_p: float) -> Any:
    """
    Input u of a following carriage (m/s³).

    :param FollowerInputs inputs: The estimates, their rates and the estimated model jerk.
    :param FollowerGains gains: The backstepping gains.
    :param float d_p: The nominal spacing (m).
    """
    return follower_control_affine(inputs, gains, d_p)[0]

# =------------------------------------------------------------------------------------------------------= #


# =----------= #
# Head control #
# =----------= #

def pair_errors(x_front: Any, v_front: Any, x_head: Any, v_head: Any, d_s: float, ell1: float) -> TrainPairErrors:
    """
    Errors between a head carriage and the tail (or the reference) in front of it.

    :rtype: TrainPairErrors
    """
    epsilon: Any = x_front - x_head
    x_tilde: Any = epsilon - d_s
    v_tilde: Any = v_front - v_head
    return TrainPairErrors(epsilon, x_tilde, v_tilde, v_tilde + ell1 * x_tilde)


def _check_domain(name: str, value: Any, lower: float, upper: float) -> None:
    """Raise a BarrierDomainError unless -lower < value < upper everywhere."""
    primal: np.ndarray = np.asarray(value_of(value))
    if not np.all((-lower < primal) & (primal < upper)):
        raise BarrierDomainError(name, value_of(value), -lower, upper)


def _barrier(name: str, e: Any, upper: float, lower: float) -> Tuple[Any, Any]:
    """Log barrier on (-lower, upper) and its derivative."""
    _check_domain(name, e, lower, upper)
    value: Any = log1p(e / lower) - log1p(-e / upper)
    slope: Any = 1 / (lower + e) + 1 / (upper - e)
    return value, slope


def barrier_phi(x_tilde: Any, rho1: float, rho2: float) -> Tuple[Any, Any]:
    """
    Distance error transformation phi on (-rho2, rho1) and its derivative Phi.

    :raises BarrierDomainError: If x_tilde is at or beyond a pole.
    """
    return _barrier("phi", x_tilde, rho1, rho2)


def barrier_psi(q_tilde: Any, varrho1: float, varrho2: float) -> Tuple[Any, Any]:
    """
    Velocity error transformation psi on (-varrho2, varrho1) and its derivative Psi.

    :raises BarrierDomainError: If q_tilde is at or beyond a pole.
    """
    return _barrier("psi", q_tilde, varrho1, varrho2)


def beta1(x_tilde: Any, v_tilde: Any, gains: HeadGains, constraints: ConstraintSpec) -> Any:
    """β1 = -phi Phi - ell2 q̃ - ell3 psi Psi."""
    varrho1, varrho2 = constraints.varrho(gains.ell1)
    q_tilde: Any = v_tilde + gains.ell1 * x_tilde
    phi, Phi = barrier_phi(x_tilde, constraints.rho1, constraints.rho2)
    psi, Psi = barrier_psi(q_tilde, varrho1, varrho2)
    return -phi * Phi - gains.ell2 * q_tilde - gains.ell3 * psi * Psi


def beta_functions(x_tilde: Any, v_tilde: Any, w_hat_tilde: Any, gains: HeadGains, constraints: ConstraintSpec) -> BetaValues:
    """
    β1, β2 = w̃̂ + ell1 ṽ - β1, and the partials of β1 by forward mode.

    :raises BarrierDomainError: If a barrier argument leaves its domain.
    :rtype: BetaValues
    """
    seeds: List[Dual] = variables([x_tilde, v_tilde])
    out: Dual = beta1(seeds[0], seeds[1], gains, constraints)
    b2: Any = w_hat_tilde + gains.ell1 * v_tilde - out.value
    return BetaValues(out.value, b2, out.tangent[0], out.tangent[1])


def head_control(inputs: HeadInputs, gains: HeadGains, constraints: ConstraintSpec) -> Any:
    """
    Input u of a head carriage (m/s³).
    The feedforward is u0 for the first train and the front tail's ŵ rate otherwise.

    :param HeadInputs inputs: The pair errors, the estimated model jerk and the feedforward.
    :param HeadGains gains: The head gains.
    :param ConstraintSpec constraints: The constraints.
    :raises BarrierDomainError: If a barrier argument leaves its domain.
    """

    # β functions and partials.
    beta: BetaValues = beta_functions(inputs.x_tilde, inputs.v_tilde, inputs.w_hat_tilde, gains, constraints)
    q_tilde: Any = inputs.v_tilde + gains.ell1 * inputs.x_tilde
    ell1: float = gains.ell1

    return (
        inputs.feedforward - inputs.model_jerk
        + ell1 * inputs.w_hat_tilde + ell1 * ell1 * beta.beta2
        - beta.d_beta1_dx * inputs.v_tilde - beta.d_beta1_dv * inputs.w_hat_tilde
        + beta.d_beta1_dv * beta.d_beta1_dv * beta.beta2
        + q_tilde - gains.ell4 * beta.beta2
    )


def saturate_pair(
        x_tilde: np.ndarray,
        v_tilde: np.ndarray,
        gains: HeadGains,
        constraints: ConstraintSpec
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Pull (x̃, q̃) back inside their barrier domains, adjusting ṽ to the clipped q̃.

    :returns: (x̃, ṽ, x̃ violation mask, q̃ violation mask).
    :rtype: Tuple
    """
    varrho1, varrho2 = constraints.varrho(gains.ell1)
    x_clip: np.ndarray = np.clip(x_tilde, -constraints.rho2 + BARRIER_MARGIN, constraints.rho1 - BARRIER_MARGIN)
    q_tilde: np.ndarray = v_tilde + gains.ell1 * x_clip
    q_clip: np.ndarray = np.clip(q_tilde, -varrho2 + BARRIER_MARGIN, varrho1 - BARRIER_MARGIN)
    return x_clip, q_clip - gains.ell1 * x_clip, x_clip != x_tilde, q_clip != q_tilde

# =---------------------------------------------------------------------------------------------------= #


# =--------------------= #
# Feasibility validation #
# =--------------------= #

def validate_parameters(follower: FollowerGains, head: HeadGains, constraints: ConstraintSpec) -> List[Violation]:
    """
    Check every gain and constraint inequality the convergence guarantee relies on.

    :returns: The violated inequalities, empty when everything holds.
    :rtype: List[Violation]
    """
    violations: List[Violation] = []

    def require(holds: bool, name: str, value: float, bound: float) -> None:
        if not holds:
            violations.append(Violation(name, float(value), float(bound), where="parameters"))

    # Follower gains.
    require(follower.l1 > 0, "l1 > 0", follower.l1, 0)
    require(follower.l2 > 0, "l2 > 0", follower.l2, 0)
    require(follower.l3 > 0, "l3 > 0", follower.l3, 0)

    # Constraint ordering.
    require(constraints.gamma2 < constraints.d_s, "gamma2 < d_s", constraints.gamma2, constraints.d_s)
    require(constraints.d_s < constraints.gamma1, "d_s < gamma1", constraints.d_s, constraints.gamma1)
    require(constraints.sigma1 > 0, "sigma1 > 0", constraints.sigma1, 0)
    require(constraints.sigma2 > 0, "sigma2 > 0", constraints.sigma2, 0)

    # Head gains.
    require(head.ell1 > 0, "ell1 > 0", head.ell1, 0)
    if constraints.rho1 > 0 and constraints.rho2 > 0:
        bound: float = min(constraints.sigma2 / constraints.rho1, constraints.sigma1 / constraints.rho2)
        require(head.ell1 < bound, "ell1 < min(sigma2/rho1, sigma1/rho2)", head.ell1, bound)
    require(head.ell2 > 2, "ell2 > 2", head.ell2, 2)
    require(head.ell3 > 2 + head.ell2 ** 2 / 2, "ell3 > 2 + ell2^2/2", head.ell3, 2 + head.ell2 ** 2 / 2)
    require(head.ell4 > 0.5, "ell4 > 1/2", head.ell4, 0.5)

    # Derived q̃ bounds.
    varrho1, varrho2 = constraints.varrho(head.ell1)
    require(varrho1 > 0, "varrho1 > 0", varrho1, 0)
    require(varrho2 > 0, "varrho2 > 0", varrho2, 0)

    return violations


def validate_initial(
        positions: Sequence[float],
        velocities: Sequence[float],
        topology: ConsistTopology,
        reference_start: Tuple[float, float],
        constraints: ConstraintSpec,
        ell1: float
) -> List[Violation]:
    """
    Check that every train pair starts strictly inside the barrier domains,
    the first train being paired with the reference.

    :param positions: Initial positions in global carriage order.
    :param velocities: Initial velocities in global carriage order.
    :param ConsistTopology topology: The trains layout.
    :param reference_start: The reference (x0, v0) at t = 0.
    :param ConstraintSpec constraints: The constraints.
    :param float ell1: The head gain ell1.
    :rtype: List[Violation]
    """
    violations: List[Violation] = []
    varrho1, varrho2 = constraints.varrho(ell1)
    front: Tuple[float, float] = reference_start

    for i in range(1, topology.train_count + 1):

        # Errors against the front tail.
        head: int = topology.index(i, 1)
        errors: TrainPairErrors = pair_errors(front[0], front[1], positions[head], velocities[head], constraints.d_s, ell1)
        where: str = f"train pair {i}"

        # Open interval memberships.
        if not -constraints.rho2 < errors.x_tilde:
            violations.append(Violation("-rho2 < x_tilde(0)", float(errors.x_tilde), -constraints.rho2, where))
        if not errors.x_tilde < constraints.rho1:
            violations.append(Violation("x_tilde(0) < rho1", float(errors.x_tilde), constraints.rho1, where))
        if not -varrho2 < errors.q_tilde:
            violations.append(Violation("-varrho2 < q_tilde(0)", float(errors.q_tilde), -varrho2, where))
        if not errors.q_tilde < varrho1:
            violations.append(Violation("q_tilde(0) < varrho1", float(errors.q_tilde), varrho1, where))

        # This train's tail leads the next one.
        tail: int = topology.index(i, topology.carriages_per_train[i - 1])
        front = (positions[tail], velocities[tail])

    return violations

# =--------------------------------------------------------------------------------------------------= #


# =------------------------= #
# Forward-mode form registry #
# =------------------------= #

# Scalar forms whose exact directional derivatives are exposed by dual_eval.
FORMS: Dict[str, Callable[..., Any]] = {
    "alpha1": alpha1,
    "alpha2": alpha2,
    "beta1": beta1,
    "phi": lambda x_tilde, rho1, rho2: barrier_phi(x_tilde, rho1, rho2)[0],
    "psi": lambda q_tilde, varrho1, varrho2: barrier_psi(q_tilde, varrho1, varrho2)[0],
}


def dual_eval(
        form: Union[str, Callable[..., Any]],
        inputs: Sequence[float],
        direction: Sequence[float],
        *args: Any,
        **kwargs: Any
) -> Tuple[float, float]:
    """
    Evaluate a registered form and its exact directional derivative.

    :param form: A FORMS key, or any callable built from Dual-aware operations.
    :param inputs: The differentiated positional arguments.
    :param direction: One seed component per input.
    :param args: Extra positional arguments, passed after the inputs.
    :param kwargs: Extra keyword arguments.
    :returns: (value, derivative along direction).
    :rtype: Tuple[float, float]
    """

    # Resolve the form.
    function: Callable[..., Any] = FORMS[form] if isinstance(form, str) else form
    if len(inputs) != len(direction):
        raise ValueError("one direction component per input is required")

    # One forward pass.
    out: Any = function(*directional(inputs, direction), *args, **kwargs)
    if isinstance(out, Dual):
        return out.value, out.tangent
    return out, 0.0

# =--------------------------------------------------------------------------------------------= #
