#!/usr/bin/env python
# -*- coding: utf-8 *-*


"""
    This file contains the Dual class, a forward-mode
    automatic differentiation number, along with the
    helpers seeding it and reading it back.

    A Dual carries a primal value (scalar or array) and a
    stack of tangents whose first axis indexes the seed
    directions, so a single evaluation yields a whole gradient.

     ____________________________________________________
    | REFER TO THE MAIN.PY FILE FOR THE CHANGE DOC TABLE |
     ‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾
"""


# =--------------= #
# Libraries import #
# =--------------= #

from __future__ import annotations
from typing     import Any, List, Sequence
import numpy as np

# =-----------------------------------------= #


# =--------------------------------------------------= #
# REFER TO THE MAIN.PY FILE FOR THE AUTHORSHIP SECTION #
# =--------------------------------------------------= #


# =--------= #
# Dual class #
# =--------= #

class Dual:
    """Forward-mode dual number with one or several tangent directions."""

    # Make numpy arrays defer to the reflected Dual operators.
    __array_ufunc__ = None

    # =================== #
    # Initializer methods #
    # =================== #

    def __init__(self, value: Any, tangent: Any = 0.0) -> None:
        """
        Initializer method.

        :param value: The primal value, scalar or array.
        :param tangent: The tangents, of shape (k,) + shape(value). By default, a zero tangent.
        """
        self.value = value
        self.tangent = tangent

    # ================== #
    # Overridden methods #
    # ================== #

    def __repr__(self) -> str:
        return f"Dual({self.value!r}, {self.tangent!r})"

    def __neg__(self) -> Dual:
        return Dual(-self.value, -self.tangent)

    def __pos__(self) -> Dual:
        return self

    def __add__(self, other: Any) -> Dual:
        if isinstance(other, Dual):
            return Dual(self.value + other.value, self.tangent + other.tangent)
        return Dual(self.value + other, self.tangent)

    __radd__ = __add__

    def __sub__(self, other: Any) -> Dual:
        if isinstance(other, Dual):
            return Dual(self.value - other.value, self.tangent - other.tangent)
        return Dual(self.value - other, self.tangent)

    def __rsub__(self, other: Any) -> Dual:
        return Dual(other - self.value, -self.tangent)

    def __mul__(self, other: Any) -> Dual:
        if isinstance(other, Dual):
            return Dual(self.value * other.value, self.tangent * other.value + self.value * other.tangent)
        return Dual(self.value * other, self.tangent * other)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> Dual:
        if isinstance(other, Dual):
            return Dual(
                self.value / other.value,
                (self.tangent * other.value - self.value * other.tangent) / (other.value * other.value)
            )
        return Dual(self.value / other, self.tangent / other)

    def __rtruediv__(self, other: Any) -> Dual:
        return Dual(other / self.value, -other * self.tangent / (self.value * self.value))

    def __pow__(self, power: float) -> Dual:
        if isinstance(power, Dual):
            raise TypeError("Dual exponents are not supported")
        return Dual(self.value ** power, power * self.value ** (power - 1) * self.tangent)

    # ============== #
    # Public methods #
    # ============== #

    def log1p(self) -> Dual:
        return Dual(np.log1p(self.value), self.tangent / (1 + self.value))

# =--------------------------------------------------------------------------------------= #


# =------------------= #
# Elementary functions #
# =------------------= #

def log1p(x: Any) -> Any:
    """log(1 + x) of a Dual or of a plain number/array."""
    return x.log1p() if isinstance(x, Dual) else np.log1p(x)

# =------------------------------------------------------= #


# =-------------------------= #
# Seeding and reading helpers #
# =-------------------------= #

def variables(values: Sequence[Any]) -> List[Dual]:
    """
    Seed one Dual per value, the k-th tangent being the k-th unit direction.
    Array values share the direction elementwise.

    :param values: The primal values.
    :type values: Sequence[Any]
    :rtype: List[Dual]
    """

    # Broadcast the values to a common shape.
    arrays: List[np.ndarray] = np.broadcast_arrays(*[np.asarray(value, dtype=float) for value in values])
    count: int = len(arrays)
    out: List[Dual] = []
    for k, array in enumerate(arrays):
        tangent: np.ndarray = np.zeros((count,) + array.shape)
        tangent[k] = 1.0
        out.append(Dual(array.copy() if array.shape else float(array), tangent))
    return out


def directional(values: Sequence[Any], direction: Sequence[float]) -> List[Dual]:
    """
    Seed every value with its component of a single direction.

    :param values: The primal values.
    :param direction: One tangent component per value.
    :rtype: List[Dual]
    """
    return [Dual(value, np.full(np.shape(value), float(d)) if np.shape(value) else float(d)) for value, d in zip(values, direction)]


def value_of(x: Any) -> Any:
    """Primal value of a Dual, the argument itself otherwise."""
    return x.value if isinstance(x, Dual) else x

# =-----------------------------------------------------------------------------------------= #
