#!/usr/bin/env python
# -*- coding: utf-8 *-*


"""
    This file contains the SimulationRecord class, the sampled
    time series produced by a closed-loop run, along with the
    fixed column layout of its CSV form.

     ____________________________________________________
    | REFER TO THE MAIN.PY FILE FOR THE CHANGE DOC TABLE |
     ‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾
"""


# =--------------= #
# Libraries import #
# =--------------= #

from __future__  import annotations
from typing      import Dict, List, Optional, Sequence, Tuple
from dataclasses import dataclass, field
from pathlib     import Path
import numpy as np
import re

# =---------------------------------------------= #


# =--------------------------------------------------= #
# REFER TO THE MAIN.PY FILE FOR THE AUTHORSHIP SECTION #
# =--------------------------------------------------= #


# =-------------= #
# Global variable #
# =-------------= #

# Per-carriage quantities, in column order.
CARRIAGE_QUANTITIES: Tuple[str, ...] = (
    "x_m", "v_mps", "w_mps2", "tau_N", "u_mps3",
    "f_eff_Nps", "f_eff_hat_Nps", "e_x_m", "e_v_mps", "e_w_mps2"
)

# Per-train-pair quantities, in column order.
PAIR_QUANTITIES: Tuple[str, ...] = ("eps_m", "xtilde_m", "vtilde_mps", "qtilde_mps")

# Matches the position column of carriage (i, j).
_POSITION_COLUMN: re.Pattern = re.compile(r"^x_m_(\d+)_(\d+)$")

# =------------------------------------------------------------= #


# =--------------= #
# Column functions #
# =--------------= #

def carriage_column(quantity: str, i: int, j: int) -> str:
    """Column name of a carriage quantity, e.g. "v_mps_2_1"."""
    return f"{quantity}_{i}_{j}"


def pair_column(quantity: str, i: int) -> str:
    """Column name of a train pair quantity, e.g. "xtilde_m_3"."""
    return f"{quantity}_{i}"


def build_columns(labels: Sequence[Tuple[int, int]], train_count: int) -> List[str]:
    """
    Full column list: t_s, every carriage block, every pair block.

    :param labels: The (i, j) pairs in global carriage order.
    :type labels: Sequence[Tuple[int, int]]
    :param int train_count: The number of trains.
    :rtype: List[str]
    """
    columns: List[str] = ["t_s"]
    for i, j in labels:
        columns.extend(carriage_column(quantity, i, j) for quantity in CARRIAGE_QUANTITIES)
    for i in range(1, train_count + 1):
        columns.extend(pair_column(quantity, i) for quantity in PAIR_QUANTITIES)
    return columns


def labels_from_columns(columns: Sequence[str]) -> List[Tuple[int, int]]:
    """Recover the carriage labels from a column list."""
    labels: List[Tuple[int, int]] = []
    for name in columns:
        match: Optional[re.Match] = _POSITION_COLUMN.match(name)
        if match:
            labels.append((int(match.group(1)), int(match.group(2))))
    return labels

# =---------------------------------------------------------------------------------= #


# =--------------------= #
# SimulationRecord class #
# =--------------------= #

@dataclass
class SimulationRecord:
    """
    Sampled time series of a run, one row per sample.
    A record of the other representation may be attached as companion.
    """
    columns:   List[str]
    data:      np.ndarray
    companion: Optional[SimulationRecord] = None
    metadata:  Dict[str, object] = field(default_factory=dict)

    # =================== #
    # Initializer methods #
    # =================== #

    def __post_init__(self) -> None:
        """Index the columns and check the layout."""

        # One value per column in every row.
        self.data = np.atleast_2d(np.asarray(self.data, dtype=float))
        if self.data.shape[1] != len(self.columns):
            raise ValueError(f"{self.data.shape[1]} values per row for {len(self.columns)} columns")
        if self.columns[0] != "t_s":
            raise ValueError("the first column must be t_s")

        self._index: Dict[str, int] = {name: k for k, name in enumerate(self.columns)}

    # ============== #
    # Public methods #
    # ============== #

    @property
    def time(self) -> np.ndarray:
        return self.data[:, 0]

    @property
    def labels(self) -> List[Tuple[int, int]]:
        """The (i, j) pairs in global carriage order."""
        return labels_from_columns(self.columns)

    @property
    def train_count(self) -> int:
        return max(i for i, _ in self.labels)

    def column(self, name: str) -> np.ndarray:
        """
        Return the named column.

        :raises KeyError: If the column does not exist.
        """
        return self.data[:, self._index[name]]

    def carriage(self, quantity: str, i: int, j: int) -> np.ndarray:
        return self.column(carriage_column(quantity, i, j))

    def pair(self, quantity: str, i: int) -> np.ndarray:
        return self.column(pair_column(quantity, i))

    def write_csv(self, path: Path) -> None:
        """
        Write the record as CSV with a single header row and 17 significant digits.

        :param Path path: The destination file.
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savetxt(path, self.data, delimiter=",", fmt="%.17g", header=",".join(self.columns), comments="")

    @classmethod
    def read_csv(cls, path: Path) -> SimulationRecord:
        """
        Read a record previously written by write_csv.

        :param Path path: The source file.
        :rtype: SimulationRecord
        """
        with open(path, "r", encoding="utf-8") as file:
            columns: List[str] = file.readline().strip().split(",")
        data: np.ndarray = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls(columns, data)

# =-------------------------------------------------------------------------------------------= #
