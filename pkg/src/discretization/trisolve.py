#!/usr/bin/env python3
"""
Tridiagonal Solver - Thomas algorithm for the implicit step systems
"""

import logging
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)

# Pivots below this fraction of the row scale are treated as singular
PIVOT_TOLERANCE = 1e-14


class SingularSystemError(RuntimeError):
    """Raised when forward elimination meets a (near) zero pivot"""

    def __init__(self, row: int, pivot: float):
        super().__init__(f"near-zero pivot {pivot:.3e} at row {row}; system is not diagonally dominant")
        self.row = row
        self.pivot = pivot


@dataclass
class TridiagonalSystem:
    """
    A x = rhs with A tridiagonal

    All arrays have the same length m; lower[0] and upper[-1] are ignored.
    Row j couples x[j-1], x[j], x[j+1].
    """
    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        self.lower = np.asarray(self.lower, dtype=float)
        self.diag = np.asarray(self.diag, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        self.rhs = np.asarray(self.rhs, dtype=float)
        size = self.diag.shape
        for name in ('lower', 'upper', 'rhs'):
            if getattr(self, name).shape != size:
                raise ValueError(f"{name} has shape {getattr(self, name).shape}, expected {size}")
        if np.any(self.diag == 0.0):
            raise ValueError("diagonal entries must be nonzero")

    @classmethod
    def constant(cls, lower: float, diag: float, upper: float, rhs: np.ndarray) -> 'TridiagonalSystem':
        """Toeplitz system with the given bands"""
        m = len(rhs)
        return cls(np.full(m, lower), np.full(m, diag), np.full(m, upper), rhs)

    @property
    def size(self) -> int:
        return len(self.diag)

    def off_diagonal_sum(self) -> np.ndarray:
        off = np.abs(self.upper).copy()
        off[-1] = 0.0
        off[1:] += np.abs(self.lower[1:])
        return off

    def is_diagonally_dominant(self) -> bool:
        """Strict row dominance |diag| > |lower| + |upper|"""
        return bool(np.all(np.abs(self.diag) > self.off_diagonal_sum()))

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = self.diag * x
        y[1:] += self.lower[1:] * x[:-1]
        y[:-1] += self.upper[:-1] * x[1:]
        return y

    def residual(self, x: np.ndarray) -> float:
        """max_i |(A x - rhs)_i|"""
        return float(np.max(np.abs(self.matvec(x) - self.rhs))) if self.size else 0.0

    def to_dense(self) -> np.ndarray:
        dense = np.diag(self.diag)
        if self.size > 1:
            dense += np.diag(self.lower[1:], -1) + np.diag(self.upper[:-1], 1)
        return dense


def solve(system: TridiagonalSystem) -> np.ndarray:
    """
    Thomas forward elimination and back substitution, no pivoting

    Args:
        system: Diagonally dominant tridiagonal system

    Returns:
        Solution vector x

    Raises:
        SingularSystemError: if a pivot vanishes relative to its row
    """
    m = system.size
    if m == 0:
        return np.zeros(0)

    # Plain lists keep the scalar loop cheap
    lower = system.lower.tolist()
    diag = system.diag.tolist()
    upper = system.upper.tolist()
    rhs = system.rhs.tolist()

    c_prime = [0.0] * m
    d_prime = [0.0] * m

    pivot = diag[0]
    if abs(pivot) <= PIVOT_TOLERANCE * (abs(diag[0]) + abs(upper[0])):
        raise SingularSystemError(0, pivot)
    c_prime[0] = upper[0] / pivot
    d_prime[0] = rhs[0] / pivot

    for j in range(1, m):
        pivot = diag[j] - lower[j] * c_prime[j - 1]
        if abs(pivot) <= PIVOT_TOLERANCE * (abs(diag[j]) + abs(lower[j]) + abs(upper[j])):
            raise SingularSystemError(j, pivot)
        c_prime[j] = upper[j] / pivot
        d_prime[j] = (rhs[j] - lower[j] * d_prime[j - 1]) / pivot

    x = [0.0] * m
    x[-1] = d_prime[-1]
    for j in range(m - 2, -1, -1):
        x[j] = d_prime[j] - c_prime[j] * x[j + 1]

    return np.array(x)
