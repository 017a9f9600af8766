#!/usr/bin/env python3
"""
Fractional Coefficients - Weights of the shifted Caputo discretization

Builds the a_l, b_l arrays once per (alpha, tau, N) and serves the
c_k^{(n+1)} and d_k^{(n+1)} weights on demand from the three-branch formulas.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import special

logger = logging.getLogger(__name__)


def gamma(x: float) -> float:
    """
    Euler gamma function for positive real arguments

    Args:
        x: Argument, must be > 0

    Returns:
        Gamma(x) as a float
    """
    if not np.isfinite(x) or x <= 0:
        raise ValueError(f"gamma() needs a positive argument, got {x}")
    return float(special.gamma(x))


@dataclass(frozen=True)
class FractionalParams:
    """Order, time step and step count of one run"""
    alpha: float
    tau: float
    big_n: int

    def __post_init__(self):
        if not 1.0 < self.alpha < 2.0:
            raise ValueError(f"alpha must lie in (1, 2), got {self.alpha}")
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if int(self.big_n) != self.big_n or self.big_n < 1:
            raise ValueError(f"step count N must be an integer >= 1, got {self.big_n}")

    @property
    def theta(self) -> float:
        return (3.0 - self.alpha) / 2.0

    @property
    def final_time(self) -> float:
        return self.tau * self.big_n

    @classmethod
    def from_horizon(cls, alpha: float, final_time: float, big_n: int) -> 'FractionalParams':
        """Params for N uniform steps over [0, final_time]"""
        if final_time <= 0:
            raise ValueError(f"final time must be positive, got {final_time}")
        return cls(alpha=alpha, tau=final_time / big_n, big_n=big_n)


class CoefficientTable:
    """Immutable weight table for one FractionalParams"""

    def __init__(self, params: FractionalParams):
        self.params = params
        alpha, theta, big_n = params.alpha, params.theta, params.big_n

        # (l + theta)^p for l = 0..N-1, l = 0 taken directly
        shifts = np.arange(big_n, dtype=float) + theta
        pow2 = np.exp((2.0 - alpha) * np.log(shifts))
        pow3 = np.exp((3.0 - alpha) * np.log(shifts))
        pow2[0] = theta ** (2.0 - alpha)
        pow3[0] = theta ** (3.0 - alpha)

        a = np.empty(big_n)
        a[0] = pow2[0]
        a[1:] = pow2[1:] - pow2[:-1]

        # b_full[l] holds b_l; slot 0 is unused
        b_full = np.zeros(big_n)
        b_full[1:] = (pow3[1:] - pow3[:-1]) / (3.0 - alpha) - 0.5 * (pow2[1:] + pow2[:-1])

        a.flags.writeable = False
        b_full.flags.writeable = False
        self._a = a
        self._b = b_full

        self.mu = params.tau ** (alpha - 1.0) * gamma(3.0 - alpha)
        self._ratio = theta / (1.0 - theta)

        logger.info(f"Built coefficient table: alpha={alpha}, tau={params.tau:.6g}, N={big_n}, mu={self.mu:.6g}")

    @property
    def a(self) -> np.ndarray:
        """a_0..a_{N-1}"""
        return self._a

    @property
    def b(self) -> np.ndarray:
        """b_1..b_{N-1}"""
        return self._b[1:]

    def _check_index(self, k: int, n: int):
        if not 0 <= k <= n <= self.params.big_n - 1:
            raise IndexError(f"need 0 <= k <= n <= {self.params.big_n - 1}, got k={k}, n={n}")

    def c(self, k: int, n: int) -> float:
        """c_k^{(n+1)}"""
        self._check_index(k, n)
        a, b = self._a, self._b
        if n == 0:
            return float(a[0])
        if k == 0:
            return float(a[0] + b[1])
        if k < n:
            return float(a[k] + b[k + 1] - b[k])
        return float(a[n] - b[n])

    def d(self, k: int, n: int) -> float:
        """d_k^{(n+1)}"""
        value = self.c(k, n)
        if n >= 1 and k == n:
            value -= self._ratio * self._b[n]
        return value / self.mu

    def c_row(self, n: int) -> np.ndarray:
        """c_0^{(n+1)} .. c_n^{(n+1)} as one array"""
        self._check_index(n, n)
        a, b = self._a, self._b
        if n == 0:
            return a[:1].copy()
        row = a[:n + 1].copy()
        row[:n] += b[1:n + 1]
        row[1:] -= b[1:n + 1]
        return row

    def d_row(self, n: int) -> np.ndarray:
        """d_0^{(n+1)} .. d_n^{(n+1)} as one array"""
        row = self.c_row(n)
        if n >= 1:
            row[n] -= self._ratio * self._b[n]
        return row / self.mu

    def dump_rows(self, n: int):
        """(k, c_k^{(n+1)}, d_k^{(n+1)}) rows for k = 0..n"""
        c_row, d_row = self.c_row(n), self.d_row(n)
        return [(k, float(c_row[k]), float(d_row[k])) for k in range(n + 1)]


def build_table(params: FractionalParams) -> CoefficientTable:
    """Construct the coefficient table for validated params"""
    return CoefficientTable(params)
