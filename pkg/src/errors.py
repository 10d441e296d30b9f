#!/usr/bin/env python
# -*- coding: utf-8 *-*


"""
    This file contains every exception raised
    by the TrainCruise software, along with the
    Violation record used by the validators.

     ____________________________________________________
    | REFER TO THE MAIN.PY FILE FOR THE CHANGE DOC TABLE |
     ‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾
"""


# =--------------= #
# Libraries import #
# =--------------= #

from typing      import Any, Dict, List, Optional, Sequence
from dataclasses import dataclass, asdict

# =------------------------------------= #


# =--------------------------------------------------= #
# REFER TO THE MAIN.PY FILE FOR THE AUTHORSHIP SECTION #
# =--------------------------------------------------= #


# =-------------= #
# Violation class #
# =-------------= #

@dataclass(frozen=True)
class Violation:
    """
    A single violated inequality: its name (e.g. "ell2 > 2"),
    the offending value and the bound it was compared against.
    """
    name:  str
    value: float
    bound: float
    where: str = ""

    def to_dict(self) -> Dict[str, Any]:
        """Return the machine-readable form of the violation."""
        return asdict(self)

    def __str__(self) -> str:
        prefix: str = f"{self.where}: " if self.where else ""
        return f"{prefix}{self.name} violated (value={self.value!r}, bound={self.bound!r})"

# =------------------------------------------------------------------= #


# =---------------= #
# Exception classes #
# =---------------= #

class TrainCruiseError(Exception):
    """Root of every exception raised by the TrainCruise software."""


class ConfigurationError(TrainCruiseError):
    """
    Raised when a scenario configuration cannot be parsed or fails validation.
    """

    def __init__(
            self,
            message: str,
            violations: Optional[Sequence[Violation]] = None,
            field: Optional[str] = None,
            line: Optional[int] = None
    ) -> None:
        """
        Initializer method.

        :param str message: The human-readable message.
        :param violations: Every violated inequality, if the failure comes from a validator.
        :type violations: Sequence[Violation] or None
        :param field: The dotted path of the faulty field, if any.
        :type field: str or None
        :param line: The line of the parse error, if any.
        :type line: int or None
        """

        # Call the super class's initializer method.
        super().__init__(message)

        # Initialize the straight-forward attributes.
        self.violations: List[Violation] = list(violations or [])
        self.field: Optional[str] = field
        self.line: Optional[int] = line

    def to_dict(self) -> Dict[str, Any]:
        """Return the machine-readable failure report."""
        return {
            "error": "configuration",
            "message": str(self),
            "field": self.field,
            "line": self.line,
            "violations": [violation.to_dict() for violation in self.violations],
        }


class BarrierDomainError(TrainCruiseError, ValueError):
    """Raised when a barrier function is evaluated at or beyond one of its poles."""

    def __init__(self, name: str, value: Any, lower: float, upper: float) -> None:
        super().__init__(f"{name} argument {value!r} outside the open interval ({lower}, {upper})")
        self.name = name
        self.value = value
        self.lower = lower
        self.upper = upper


class ConstraintViolationError(TrainCruiseError):
    """Raised when a hard constraint is crossed and the run was asked to abort."""

    def __init__(self, time: float, pair: int, quantity: str, value: float) -> None:
        super().__init__(f"t={time:.6g} s: {quantity} of train pair {pair} left its admissible interval ({value!r})")
        self.time = time
        self.pair = pair
        self.quantity = quantity
        self.value = value


class IntegrationError(TrainCruiseError):
    """Raised when the closed-loop derivative stops being finite."""

    def __init__(self, time: float, indices: Sequence[int], labels: Sequence[str]) -> None:
        super().__init__(f"non-finite derivative at t={time:.6g} s in {', '.join(labels) or 'unknown state'}")
        self.time = time
        self.indices = list(indices)
        self.labels = list(labels)


class PlacementError(TrainCruiseError):
    """Raised when the observer gains cannot be synthesized."""

# =--------------------------------------------------------------------------= #
