#!/usr/bin/env python
# -*- coding: utf-8 *-*


"""
    This file contains the carriage dynamics: the physical
    plant with its actuator, the equivalent third-order
    composite model, and the coefficient functions shared
    by the observer and the controllers.

    Carriage indices j are 1-based inside a train, as in the
    train schedules; the Consist class works on 0-based flat
    arrays in global carriage order (train 1 head first).

     ____________________________________________________
    | REFER TO THE MAIN.PY FILE FOR THE CHANGE DOC TABLE |
     ‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾
"""


# =--------------= #
# Libraries import #
# =--------------= #

from typing      import List, Sequence, Tuple
from dataclasses import dataclass, field
from src.errors  import ConfigurationError, Violation
from src.faults  import FaultModel, exosystem_matrix, fault_input_row
import numpy as np

# =----------------------------------------------------------= #


# =--------------------------------------------------= #
# REFER TO THE MAIN.PY FILE FOR THE AUTHORSHIP SECTION #
# =--------------------------------------------------= #


# =----------= #
# Domain types #
# =----------= #

@dataclass(frozen=True)
class DavisCoefficients:
    """Davis running resistance R(v) = c0 + c1 v + c2 v² (N/kg)."""
    c0: float
    c1: float
    c2: float

    def __post_init__(self) -> None:
        violations: List[Violation] = [
            Violation(f"{name} >= 0", value, 0.0)
            for name, value in (("c0", self.c0), ("c1", self.c1), ("c2", self.c2)) if value < 0
        ]
        if violations:
            raise ConfigurationError("invalid Davis coefficients", violations, field="davis")


@dataclass(frozen=True)
class CouplerParams:
    """Spring-damper coupler between adjacent carriages."""
    a:   float
    b:   float
    d_p: float

    def __post_init__(self) -> None:
        violations: List[Violation] = [
            Violation(f"{name} > 0", value, 0.0)
            for name, value in (("a", self.a), ("b", self.b), ("d_p", self.d_p)) if value <= 0
        ]
        if violations:
            raise ConfigurationError("invalid coupler parameters", violations, field="coupler")


@dataclass(frozen=True)
class CarriageParams:
    """Mass, actuator rate and fault description of one carriage."""
    m:     float
    r:     float
    fault: FaultModel = field(default_factory=FaultModel)

    def __post_init__(self) -> None:
        violations: List[Violation] = [
            Violation(f"{name} > 0", value, 0.0) for name, value in (("m", self.m), ("r", self.r)) if value <= 0
        ]
        if violations:
            raise ConfigurationError("invalid carriage parameters", violations)

    @property
    def E(self) -> np.ndarray:
        """Fault input row (N/s per unit)."""
        return fault_input_row(self.fault)

    @property
    def C(self) -> np.ndarray:
        """Fault input row of the composite model, E / m (m/s³ per unit)."""
        return self.E / self.m


@dataclass(frozen=True)
class ConsistTopology:
    """Number of carriages of every train, head train first."""
    carriages_per_train: Tuple[int, ...]

    def __post_init__(self) -> None:

        # At least one train.
        if len(self.carriages_per_train) < 1:
            raise ConfigurationError("at least one train is required", [Violation("N >= 1", 0, 1)], field="trains")

        # Every train needs a distinct head and tail carriage.
        violations: List[Violation] = [
            Violation("M_i >= 2", count, 2, where=f"train {i}")
            for i, count in enumerate(self.carriages_per_train, start=1) if count < 2
        ]
        if violations:
            raise ConfigurationError("every train needs at least two carriages", violations, field="trains")

    @property
    def train_count(self) -> int:
        return len(self.carriages_per_train)

    @property
    def carriage_count(self) -> int:
        return sum(self.carriages_per_train)

    def index(self, i: int, j: int) -> int:
        """
        Return the flat index of carriage (i, j), both 1-based.

        :raises IndexError: If (i, j) does not exist.
        """
        if not 1 <= i <= self.train_count or not 1 <= j <= self.carriages_per_train[i - 1]:
            raise IndexError(f"carriage ({i}, {j}) does not exist")
        return sum(self.carriages_per_train[:i - 1]) + j - 1

    def labels(self) -> List[Tuple[int, int]]:
        """Every (i, j) pair in global carriage order."""
        return [(i, j) for i, count in enumerate(self.carriages_per_train, start=1) for j in range(1, count + 1)]


@dataclass(frozen=True)
class PlantState:
    """Physical state of one carriage."""
    x:   float
    v:   float
    tau: float
    f:   Tuple[float, float, float] = (0.0, 0.0, 0.0)


@dataclass(frozen=True)
class CompositeState:
    """Composite (position, velocity, acceleration) state of one carriage."""
    x: float
    v: float
    w: float
    f: Tuple[float, float, float] = (0.0, 0.0, 0.0)

# =---------------------------------------------------------------------------------= #


# =--------------------------------= #
# Per-carriage coefficient functions #
# =--------------------------------= #

def _check_index(j: int, count: int) -> None:
    """Raise an IndexError if j is not a carriage of a train of count carriages."""
    if not 1 <= j <= count:
        raise IndexError(f"carriage index {j} outside 1..{count}")


def davis_resistance(v: float, coeffs: DavisCoefficients) -> float:
    """
    Specific running resistance (N/kg).

    :param float v: The velocity (m/s).
    :param DavisCoefficients coeffs: The Davis coefficients.
    :rtype: float
    """
    return coeffs.c0 + coeffs.c1 * v + coeffs.c2 * v * v


def coupling_force(j: int, x_i: Sequence[float], v_i: Sequence[float], coupler: CouplerParams, M_i: int = None) -> float:
    """
    Coupling force applied on carriage j by its neighbor(s) (N).

    :param int j: The carriage index, 1-based.
    :param x_i: Positions of the train's carriages.
    :type x_i: Sequence[float]
    :param v_i: Velocities of the train's carriages.
    :type v_i: Sequence[float]
    :param CouplerParams coupler: The coupler parameters.
    :param M_i: The train's carriage count. By default, len(x_i).
    :type M_i: int
    :rtype: float
    """

    # Bound-check the carriage index.
    count: int = len(x_i) if M_i is None else M_i
    _check_index(j, count)
    a, b, d_p = coupler.a, coupler.b, coupler.d_p
    k: int = j - 1

    # Head carriage.
    if j == 1:
        return a * (x_i[0] - x_i[1] - d_p) + b * (v_i[0] - v_i[1])

    # Tail carriage.
    if j == count:
        return a * (x_i[k] - x_i[k - 1] + d_p) + b * (v_i[k] - v_i[k - 1])

    # Interior carriage.
    return a * (2 * x_i[k] - x_i[k - 1] - x_i[k + 1]) + b * (2 * v_i[k] - v_i[k - 1] - v_i[k + 1])


def coefficient_b(
        j: int,
        v_i: Sequence[float],
        carriage: CarriageParams,
        davis: DavisCoefficients,
        coupler: CouplerParams
) -> Tuple[float, float, float, float]:
    """
    Return (B¹(v_ij), B², B³, B⁴(v_i)) of carriage j.

    :param int j: The carriage index, 1-based.
    :param v_i: Velocities of the train's carriages.
    :type v_i: Sequence[float]
    :param CarriageParams carriage: The carriage parameters.
    :param DavisCoefficients davis: The Davis coefficients.
    :param CouplerParams coupler: The coupler parameters.
    :rtype: Tuple[float, float, float, float]
    """

    # Bound-check the carriage index.
    count: int = len(v_i)
    _check_index(j, count)
    k: int = j - 1
    m, a, b = carriage.m, coupler.a, coupler.b
    has_prev, has_next = j > 1, j < count

    # Neighbor count drives the damping share.
    neighbors: int = int(has_prev) + int(has_next)
    B1: float = -neighbors * b / m - (davis.c1 + 2 * davis.c2 * v_i[k]) - carriage.r
    B2: float = b / m if has_prev else 0.0
    B3: float = b / m if has_next else 0.0

    # Velocity differences with the existing neighbors.
    spread: float = (v_i[k] - v_i[k - 1] if has_prev else 0.0) + (v_i[k] - v_i[k + 1] if has_next else 0.0)
    B4: float = -a * spread / m

    return B1, B2, B3, B4


def coefficient_d(
        j: int,
        v: float,
        carriage: CarriageParams,
        davis: DavisCoefficients,
        coupler: CouplerParams,
        count: int
) -> Tuple[float, float, float]:
    """
    Return (D¹(v), D²(v), D³(v)) of carriage j, every function evaluated at v.

    :param int j: The carriage index, 1-based.
    :param float v: The velocity the three functions are evaluated at.
    :param CarriageParams carriage: The carriage parameters.
    :param DavisCoefficients davis: The Davis coefficients.
    :param CouplerParams coupler: The coupler parameters.
    :param int count: The train's carriage count.
    :rtype: Tuple[float, float, float]
    """

    # Bound-check the carriage index.
    _check_index(j, count)
    m, b = carriage.m, coupler.b
    has_prev, has_next = j > 1, j < count
    neighbors: int = int(has_prev) + int(has_next)

    D1: float = -neighbors * b * v / m - (davis.c1 * v + davis.c2 * v * v)
    D2: float = b * v / m if has_prev else 0.0
    D3: float = b * v / m if has_next else 0.0
    return D1, D2, D3

# =---------------------------------------------------------------------------------------------= #


# =-----------------------------= #
# Per-carriage dynamics functions #
# =-----------------------------= #

def preliminary_control(
        u: float,
        j: int,
        x_i: Sequence[float],
        v_i: Sequence[float],
        carriage: CarriageParams,
        davis: DavisCoefficients,
        coupler: CouplerParams
) -> float:
    """
    Designed force rate ϖ (N/s) realizing the new input u (m/s³).

    :param float u: The new input.
    :param int j: The carriage index, 1-based.
    :rtype: float
    """
    m, r = carriage.m, carriage.r
    B4: float = coefficient_b(j, v_i, carriage, davis, coupler)[3]
    return m * u + r * coupling_force(j, x_i, v_i, coupler) + m * r * davis_resistance(v_i[j - 1], davis) - m * B4


def plant_rhs(
        j: int,
        train: Sequence[PlantState],
        varpi: float,
        carriage: CarriageParams,
        davis: DavisCoefficients,
        coupler: CouplerParams
) -> PlantState:
    """
    Time derivative of the physical state of carriage j.

    :param int j: The carriage index, 1-based.
    :param train: The states of every carriage of the train.
    :type train: Sequence[PlantState]
    :param float varpi: The designed force rate (N/s).
    :returns: The derivative, packed as a PlantState.
    :rtype: PlantState
    """

    # Train-wide vectors for the coupling force.
    x_i: List[float] = [state.x for state in train]
    v_i: List[float] = [state.v for state in train]
    state: PlantState = train[j - 1]
    f: np.ndarray = np.asarray(state.f, dtype=float)

    # Newton's law and the first-order actuator.
    v_dot: float = (state.tau - coupling_force(j, x_i, v_i, coupler) - carriage.m * davis_resistance(state.v, davis)) / carriage.m
    tau_dot: float = -carriage.r * state.tau + varpi + float(carriage.E @ f)
    f_dot: np.ndarray = exosystem_matrix(carriage.fault.omega) @ f

    return PlantState(state.v, v_dot, tau_dot, tuple(f_dot))


def composite_rhs(
        j: int,
        train: Sequence[CompositeState],
        u: float,
        carriage: CarriageParams,
        davis: DavisCoefficients,
        coupler: CouplerParams
) -> CompositeState:
    """
    Time derivative of the composite state of carriage j.

    :param int j: The carriage index, 1-based.
    :param train: The states of every carriage of the train.
    :type train: Sequence[CompositeState]
    :param float u: The new input (m/s³).
    :returns: The derivative, packed as a CompositeState.
    :rtype: CompositeState
    """

    # Coefficients of the jerk equation.
    v_i: List[float] = [state.v for state in train]
    B1, B2, B3, _ = coefficient_b(j, v_i, carriage, davis, coupler)
    state: CompositeState = train[j - 1]
    f: np.ndarray = np.asarray(state.f, dtype=float)

    # Structurally zero neighbor terms are skipped.
    w_dot: float = B1 * state.w + float(carriage.C @ f) + u
    if B2:
        w_dot += B2 * train[j - 2].w
    if B3:
        w_dot += B3 * train[j].w
    f_dot: np.ndarray = exosystem_matrix(carriage.fault.omega) @ f

    return CompositeState(state.v, state.w, w_dot, tuple(f_dot))

# =------------------------------------------------------------------------------------------------= #


# =-----------= #
# Consist class #
# =-----------= #

class Consist:
    """
    Vectorized view of every carriage of every train.
    All arrays follow the global carriage order; neighbor
    index arrays point to the carriage itself where the
    neighbor does not exist, the matching mask being zero.
    """

    # =================== #
    # Initializer methods #
    # =================== #

    def __init__(
            self,
            topology: ConsistTopology,
            carriages: Sequence[CarriageParams],
            davis: DavisCoefficients,
            coupler: CouplerParams
    ) -> None:
        """
        Initializer method.

        :param ConsistTopology topology: The trains layout.
        :param carriages: The carriage parameters in global carriage order.
        :type carriages: Sequence[CarriageParams]
        :param DavisCoefficients davis: The Davis coefficients.
        :param CouplerParams coupler: The coupler parameters.
        """

        # One parameter set per carriage.
        if len(carriages) != topology.carriage_count:
            raise ConfigurationError(
                f"{len(carriages)} carriages given for a topology of {topology.carriage_count}", field="trains"
            )

        # Initialize the straight-forward attributes.
        self.topology: ConsistTopology = topology
        self.carriages: Tuple[CarriageParams, ...] = tuple(carriages)
        self.davis: DavisCoefficients = davis
        self.coupler: CouplerParams = coupler
        self.n: int = topology.carriage_count
        self.labels: List[Tuple[int, int]] = topology.labels()

        # Per-carriage parameter arrays.
        self.m: np.ndarray = np.array([c.m for c in carriages])
        self.r: np.ndarray = np.array([c.r for c in carriages])
        self.E: np.ndarray = np.array([c.E for c in carriages])
        self.C: np.ndarray = self.E / self.m[:, None]
        self.omega: np.ndarray = np.array([c.fault.omega for c in carriages])

        # Neighbor index maps and masks.
        positions: np.ndarray = np.array([j for _, j in self.labels])
        counts: np.ndarray = np.array([topology.carriages_per_train[i - 1] for i, _ in self.labels])
        index: np.ndarray = np.arange(self.n)
        self.has_prev: np.ndarray = (positions > 1).astype(float)
        self.has_next: np.ndarray = (positions < counts).astype(float)
        self.prev: np.ndarray = np.where(positions > 1, index - 1, index)
        self.next: np.ndarray = np.where(positions < counts, index + 1, index)
        self.neighbors: np.ndarray = self.has_prev + self.has_next
        self.heads: np.ndarray = index[positions == 1]
        self.tails: np.ndarray = index[positions == counts]
        self.followers: np.ndarray = index[positions > 1]

        # Constant neighbor coefficients.
        self.B2: np.ndarray = self.has_prev * coupler.b / self.m
        self.B3: np.ndarray = self.has_next * coupler.b / self.m

    # ============== #
    # Public methods #
    # ============== #

    def resistance(self, v: np.ndarray) -> np.ndarray:
        """Davis resistance of every carriage (N/kg)."""
        return self.davis.c0 + self.davis.c1 * v + self.davis.c2 * v * v

    def coupling_force(self, x: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Coupling force of every carriage (N)."""
        a, b, d_p = self.coupler.a, self.coupler.b, self.coupler.d_p
        front: np.ndarray = a * (x - x[self.prev] + d_p) + b * (v - v[self.prev])
        rear: np.ndarray = a * (x - x[self.next] - d_p) + b * (v - v[self.next])
        return self.has_prev * front + self.has_next * rear

    def b1(self, v: np.ndarray) -> np.ndarray:
        """B¹ evaluated at the given velocities."""
        return -self.neighbors * self.coupler.b / self.m - (self.davis.c1 + 2 * self.davis.c2 * v) - self.r

    def b4(self, v: np.ndarray) -> np.ndarray:
        """B⁴ of every carriage."""
        spread: np.ndarray = self.has_prev * (v - v[self.prev]) + self.has_next * (v - v[self.next])
        return -self.coupler.a * spread / self.m

    def d1(self, v: np.ndarray) -> np.ndarray:
        """D¹ evaluated at the given velocities."""
        return -self.neighbors * self.coupler.b * v / self.m - (self.davis.c1 * v + self.davis.c2 * v * v)

    def fault_rate(self, f: np.ndarray) -> np.ndarray:
        """S f for every carriage, f being (n, 3)."""
        rate: np.ndarray = np.zeros_like(f)
        rate[:, 1] = self.omega * f[:, 2]
        rate[:, 2] = -self.omega * f[:, 1]
        return rate

    def composite_jerk(self, v: np.ndarray, w: np.ndarray, f: np.ndarray, u: np.ndarray) -> np.ndarray:
        """ẇ of the composite model for every carriage."""
        return self.b1(v) * w + self.B2 * w[self.prev] + self.B3 * w[self.next] + np.einsum('ij,ij->i', self.C, f) + u

    def preliminary_control(self, u: np.ndarray, x: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Designed force rate ϖ of every carriage (N/s)."""
        return self.m * u + self.r * self.coupling_force(x, v) + self.m * self.r * self.resistance(v) - self.m * self.b4(v)

    def plant_acceleration(self, x: np.ndarray, v: np.ndarray, tau: np.ndarray) -> np.ndarray:
        """v̇ of the physical plant, also the composite w matching tau."""
        return (tau - self.coupling_force(x, v) - self.m * self.resistance(v)) / self.m

    def plant_force(self, x: np.ndarray, v: np.ndarray, w: np.ndarray) -> np.ndarray:
        """Traction/braking force τ = m w + B + m R(v) realizing the acceleration w."""
        return self.m * w + self.coupling_force(x, v) + self.m * self.resistance(v)

    def plant_force_rate(self, x: np.ndarray, v: np.ndarray, tau: np.ndarray, f: np.ndarray, varpi: np.ndarray) -> np.ndarray:
        """τ̇ of the first-order actuator."""
        return -self.r * tau + varpi + np.einsum('ij,ij->i', self.E, f)

# =---------------------------------------------------------------------------------------------------------= #
