#!/usr/bin/env python
# -*- coding: utf-8 *-*


"""
    This file contains the distributed state-fault observer:
    the augmented error pair, the gain synthesis, the
    auxiliary inputs, the estimate dynamics and the linear
    error-dynamics oracle.

    The per-step functions work on whole consists: every
    array argument holds one entry per carriage in global
    carriage order.

     ____________________________________________________
    | REFER TO THE MAIN.PY FILE FOR THE CHANGE DOC TABLE |
     ‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾
"""


# =--------------= #
# Libraries import #
# =--------------= #

from typing       import Dict, List, NamedTuple, Optional, Sequence, Tuple
from dataclasses  import dataclass
from scipy.linalg import expm
from src.errors   import PlacementError
from src.faults   import exosystem_matrix
from src.model    import CarriageParams, Consist
import numpy as np
import src.logger as logger

# =---------------------------------------------------= #


# =--------------------------------------------------= #
# REFER TO THE MAIN.PY FILE FOR THE AUTHORSHIP SECTION #
# =--------------------------------------------------= #


# =-------------= #
# Global variable #
# =-------------= #

# Relative singular value below which the observability matrix is rank deficient.
RANK_THRESHOLD: float = 1e-8

# Relative tolerance on the characteristic polynomial after placement.
PLACEMENT_TOLERANCE: float = 1e-6

# Controllability matrices worse conditioned than this are rejected.
MAX_CONDITION: float = 1e12

# =-----------------------------------------------------------------------= #


# =----------= #
# Domain types #
# =----------= #

@dataclass(frozen=True)
class ObserverState:
    """Estimate of one carriage's composite state."""
    x_hat: float
    v_hat: float
    w_hat: float
    f_hat: Tuple[float, float, float] = (0.0, 0.0, 0.0)


@dataclass(frozen=True)
class ObserverGains:
    """
    Gains of one carriage's observer: k1 on the position error
    and K = [k2, k3, k4ᵀ] on the velocity error.
    """
    k1: float
    K:  Tuple[float, ...]

    @property
    def k2(self) -> float:
        return self.K[0]

    @property
    def k3(self) -> float:
        return self.K[1]

    @property
    def k4(self) -> Tuple[float, ...]:
        return tuple(self.K[2:])


class AuxiliaryInputs(NamedTuple):
    """Auxiliary observer inputs, one entry (mu4: one row) per carriage."""
    mu1: np.ndarray
    mu2: np.ndarray
    mu3: np.ndarray
    mu4: np.ndarray


class ObserverDerivative(NamedTuple):
    """Time derivative of every carriage's estimate."""
    x_hat: np.ndarray
    v_hat: np.ndarray
    w_hat: np.ndarray
    f_hat: np.ndarray


class ErrorTrajectory(NamedTuple):
    """Solution of the linear error dynamics on a time grid."""
    t:   np.ndarray
    e_x: np.ndarray
    xi:  np.ndarray

    @property
    def e_v(self) -> np.ndarray:
        return self.xi[:, 0]

    @property
    def zeta(self) -> np.ndarray:
        return self.xi[:, 1]

    @property
    def e_f(self) -> np.ndarray:
        return self.xi[:, 2:]

# =----------------------------------------------------------------------------------= #


# =-------------------------= #
# Observability and placement #
# =-------------------------= #

def build_augmented_pair(C_row: Sequence[float], S: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Build the pair (A, C) governing the (e_v, ζ, e_f) error dynamics.

    :param C_row: The composite fault input row E / m.
    :type C_row: Sequence[float]
    :param S: The exosystem matrix.
    :type S: numpy.ndarray
    :returns: A (5×5) and C (1×5).
    :rtype: Tuple[numpy.ndarray, numpy.ndarray]
    """

    # Chain of two integrators fed by the fault through C_row.
    A: np.ndarray = np.zeros((5, 5))
    A[0, 1] = 1.0
    A[1, 2:] = np.asarray(C_row, dtype=float)
    A[2:, 2:] = S

    # Only the velocity error is measured.
    C: np.ndarray = np.zeros((1, 5))
    C[0, 0] = 1.0
    return A, C


def observability_matrix(A: np.ndarray, C: np.ndarray) -> np.ndarray:
    """Stack C, CA, ..., CA^(n-1)."""
    rows: List[np.ndarray] = [C]
    for _ in range(A.shape[0] - 1):
        rows.append(rows[-1] @ A)
    return np.vstack(rows)


def check_observability(A: np.ndarray, C: np.ndarray) -> bool:
    """
    Tell whether the pair (A, C) is observable, the observability matrix being
    of full numerical rank when its smallest singular value exceeds
    RANK_THRESHOLD times the largest.

    :param A: The state matrix.
    :type A: numpy.ndarray
    :param C: The output matrix.
    :type C: numpy.ndarray
    :rtype: bool
    """
    singular: np.ndarray = np.linalg.svd(observability_matrix(A, C), compute_uv=False)
    return bool(singular[0] > 0 and singular[-1] > RANK_THRESHOLD * singular[0])


def synthesize_gains(
        A: np.ndarray,
        C: np.ndarray,
        desired_eigenvalues: Sequence[complex],
        k1_eigenvalue: float = -3.0
) -> ObserverGains:
    """
    Place the spectrum of A + K C by Ackermann's formula on the transposed pair.
    The characteristic polynomial is matched directly, which stays well defined
    for a repeated desired eigenvalue.

    :param A: The state matrix.
    :type A: numpy.ndarray
    :param C: The output matrix.
    :type C: numpy.ndarray
    :param desired_eigenvalues: One desired eigenvalue per state, repeats allowed.
    :type desired_eigenvalues: Sequence[complex]
    :param float k1_eigenvalue: The desired eigenvalue of the position error, k1 being its opposite.
    :raises PlacementError: If the pair is unobservable, the request is not Hurwitz or the placement fails.
    :rtype: ObserverGains
    """

    # Check the request.
    n: int = A.shape[0]
    desired: np.ndarray = np.asarray(desired_eigenvalues, dtype=complex)
    if desired.shape != (n,):
        raise PlacementError(f"{n} desired eigenvalues expected, {desired.size} given")
    if np.any(desired.real >= 0) or k1_eigenvalue >= 0:
        raise PlacementError("every desired eigenvalue must have a negative real part")
    if not check_observability(A, C):
        raise PlacementError("the pair (A, C) is not observable")

    # Controllability matrix of the transposed pair.
    At: np.ndarray = A.T
    columns: List[np.ndarray] = [C.T]
    for _ in range(n - 1):
        columns.append(At @ columns[-1])
    ctrb: np.ndarray = np.hstack(columns)
    if np.linalg.cond(ctrb) > MAX_CONDITION:
        raise PlacementError("the placement transformation is ill-conditioned")

    # Desired polynomial evaluated at Aᵀ.
    coefficients: np.ndarray = np.real(np.poly(desired))
    poly_at: np.ndarray = np.zeros_like(At)
    for coefficient in coefficients:
        poly_at = poly_at @ At + coefficient * np.eye(n)

    # Last row of the inverse controllability matrix times p(Aᵀ).
    last: np.ndarray = np.zeros(n)
    last[-1] = 1.0
    F: np.ndarray = np.linalg.solve(ctrb.T, last) @ poly_at
    K: np.ndarray = -F

    # Check the realized characteristic polynomial.
    realized: np.ndarray = np.real(np.poly(A + np.outer(K, C[0])))
    mismatch: np.ndarray = np.abs(realized - coefficients) / np.maximum(1.0, np.abs(coefficients))
    if np.max(mismatch) > PLACEMENT_TOLERANCE:
        raise PlacementError(f"placed polynomial off by {np.max(mismatch):.3g} (relative)")

    # Trace the synthesis.
    logger.debug(f"observer gains placed: k1={-k1_eigenvalue:g}, K={np.array2string(K, precision=6)}")

    return ObserverGains(k1=float(-k1_eigenvalue), K=tuple(float(k) for k in K))


def carriage_pair(carriage: CarriageParams) -> Tuple[np.ndarray, np.ndarray]:
    """Augmented pair of one carriage."""
    return build_augmented_pair(carriage.C, exosystem_matrix(carriage.fault.omega))


def synthesize_bank(
        carriages: Sequence[CarriageParams],
        desired_eigenvalues: Sequence[complex],
        k1_eigenvalue: float = -3.0,
        overrides: Optional[Sequence[Optional[ObserverGains]]] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Observer gains of a whole consist, explicit overrides taking precedence.

    :returns: k1 of shape (n,) and K of shape (n, 5).
    :rtype: Tuple[numpy.ndarray, numpy.ndarray]
    """

    # Identical carriages share one placement.
    cache: Dict[Tuple[float, ...], ObserverGains] = {}
    gains: List[ObserverGains] = []
    for k, carriage in enumerate(carriages):
        override: Optional[ObserverGains] = overrides[k] if overrides else None
        if override is not None:
            gains.append(override)
            continue
        key: Tuple[float, ...] = tuple(carriage.C) + (carriage.fault.omega,)
        if key not in cache:
            cache[key] = synthesize_gains(*carriage_pair(carriage), desired_eigenvalues, k1_eigenvalue)
        gains.append(cache[key])

    return np.array([g.k1 for g in gains]), np.array([g.K for g in gains])

# =----------------------------------------------------------------------------------------------= #


# =---------------------= #
# Observer step functions #
# =---------------------= #

def auxiliary_inputs(
        consist: Consist,
        x: np.ndarray,
        v: np.ndarray,
        x_hat: np.ndarray,
        v_hat: np.ndarray,
        w_hat: np.ndarray,
        k1: np.ndarray,
        K: np.ndarray
) -> AuxiliaryInputs:
    """
    Auxiliary inputs of every carriage's observer.

    The D¹ difference is completed with r (v̂ - v) so that the differenced
    function has B¹ for derivative, which is what makes the error dynamics
    exactly linear.

    :param Consist consist: The consist.
    :param x: Measured positions.
    :param v: Measured velocities.
    :param x_hat: Position estimates.
    :param v_hat: Velocity estimates.
    :param w_hat: Acceleration estimates.
    :param k1: Position-error gains, (n,).
    :param K: Velocity-error gains, (n, 5).
    :rtype: AuxiliaryInputs
    """

    # Measured-minus-estimated channels.
    e_v: np.ndarray = v_hat - v
    mu1: np.ndarray = -k1 * (x_hat - x) - e_v

    # First pass: μ2 of every carriage.
    mu2: np.ndarray = (
        consist.d1(v) - consist.d1(v_hat) + (K[:, 0] + consist.r) * e_v
        + consist.B2 * (v[consist.prev] - v_hat[consist.prev])
        + consist.B3 * (v[consist.next] - v_hat[consist.next])
    )

    # Second pass: μ3 reads the neighbors' μ2.
    b1_v: np.ndarray = consist.b1(v)
    mu3: np.ndarray = (
        b1_v * mu2 + K[:, 1] * e_v
        + (consist.b1(v_hat) - b1_v) * (w_hat + mu2)
        + consist.B2 * mu2[consist.prev] + consist.B3 * mu2[consist.next]
    )

    mu4: np.ndarray = K[:, 2:] * e_v[:, None]
    return AuxiliaryInputs(mu1, mu2, mu3, mu4)


def estimated_jerk(
        consist: Consist,
        v: np.ndarray,
        w_hat: np.ndarray,
        f_hat: np.ndarray,
        mu3: np.ndarray
) -> np.ndarray:
    """
    Input-free part of the ŵ dynamics, B¹(v) ŵ + B² ŵ_prev + B³ ŵ_next + C f̂ + μ3.
    The controllers cancel exactly this quantity.
    """
    return (
        consist.b1(v) * w_hat + consist.B2 * w_hat[consist.prev] + consist.B3 * w_hat[consist.next]
        + np.einsum('ij,ij->i', consist.C, f_hat) + mu3
    )


def observer_rhs(
        consist: Consist,
        v: np.ndarray,
        v_hat: np.ndarray,
        w_hat: np.ndarray,
        f_hat: np.ndarray,
        aux: AuxiliaryInputs,
        u: np.ndarray
) -> ObserverDerivative:
    """
    Time derivative of every carriage's estimate.

    :param Consist consist: The consist.
    :param v: Measured velocities.
    :param v_hat: Velocity estimates.
    :param w_hat: Acceleration estimates.
    :param f_hat: Fault estimates, (n, 3).
    :param AuxiliaryInputs aux: The auxiliary inputs.
    :param u: The inputs applied this step.
    :rtype: ObserverDerivative
    """
    return ObserverDerivative(
        x_hat=v_hat + aux.mu1,
        v_hat=w_hat + aux.mu2,
        w_hat=estimated_jerk(consist, v, w_hat, f_hat, aux.mu3) + u,
        f_hat=consist.fault_rate(f_hat) + aux.mu4
    )

# =--------------------------------------------------------------------------------------------------= #


# =--------------------------= #
# Linear error-dynamics oracle #
# =--------------------------= #

def initial_xi(e_v: float, e_w: float, mu2: float, k2: float, e_f: Sequence[float]) -> np.ndarray:
    """
    Assemble ξ(0) = [e_v, ζ, e_f] with ζ = e_w + μ2 - k2 e_v.

    :rtype: numpy.ndarray
    """
    return np.concatenate(([e_v, e_w + mu2 - k2 * e_v], np.asarray(e_f, dtype=float)))


def linear_error_oracle(
        e_x0: float,
        xi0: Sequence[float],
        gains: ObserverGains,
        A: np.ndarray,
        C: np.ndarray,
        times: Sequence[float]
) -> ErrorTrajectory:
    """
    Solve ė_x = -k1 e_x and ξ̇ = (A + K C) ξ in closed form on the given times.

    :param float e_x0: The initial position error.
    :param xi0: The initial ξ.
    :type xi0: Sequence[float]
    :param ObserverGains gains: The observer gains.
    :param A: The state matrix of the augmented pair.
    :param C: The output matrix of the augmented pair.
    :param times: The time grid, starting at the initial time 0.
    :rtype: ErrorTrajectory
    """

    # Closed-loop error matrix.
    closed: np.ndarray = A + np.outer(np.asarray(gains.K), C[0])
    t: np.ndarray = np.asarray(times, dtype=float)
    xi_start: np.ndarray = np.asarray(xi0, dtype=float)

    # Matrix exponential at every requested time.
    xi: np.ndarray = np.array([expm(closed * tk) @ xi_start for tk in t])
    e_x: np.ndarray = e_x0 * np.exp(-gains.k1 * t)
    return ErrorTrajectory(t, e_x, xi)

# =-------------------------------------------------------------------------------------------------= #
