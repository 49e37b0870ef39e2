"""Tridiagonal linear systems for the implicit heat-conduction update.

The production path wraps LAPACK's banded solver through scipy; a plain
Thomas elimination is kept alongside it as an independent reference
implementation, and the test suite cross-checks both against dense solves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded


@dataclass(frozen=True)
class TridiagonalSystem:
    """System A x = rhs with A tridiagonal.

    ``lower[i]`` multiplies x[i-1] (lower[0] is unused and must be 0) and
    ``upper[i]`` multiplies x[i+1] (upper[-1] is unused and must be 0).
    The heat-conduction assembly produces rows with diag = 1 + dt * c and
    |lower| + |upper| <= diag - 1, i.e. strict diagonal dominance, which
    makes pivot-free elimination safe.
    """

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray
    rhs: np.ndarray

    def __post_init__(self) -> None:
        for name in ("lower", "diag", "upper", "rhs"):
            arr = np.asarray(getattr(self, name), dtype=float)
            object.__setattr__(self, name, arr)
        n = self.diag.shape[0]
        for name in ("lower", "upper", "rhs"):
            if getattr(self, name).shape != (n,):
                raise ValueError(f"{name} must have shape ({n},)")
        if n < 1:
            raise ValueError("system must have at least one row")
        if self.lower[0] != 0.0 or self.upper[-1] != 0.0:
            raise ValueError("lower[0] and upper[-1] must be zero")

    @property
    def n(self) -> int:
        return self.diag.shape[0]

    def assert_diagonally_dominant(self) -> None:
        slack = np.abs(self.diag) - (np.abs(self.lower) + np.abs(self.upper))
        if not np.all(slack > 0.0):
            raise ValueError("tridiagonal system lost diagonal dominance")

    def residual(self, x: np.ndarray) -> float:
        """Relative sup-norm residual |A x - rhs| / max(|rhs|, 1)."""
        ax = self.diag * x
        ax[1:] += self.lower[1:] * x[:-1]
        ax[:-1] += self.upper[:-1] * x[1:]
        scale = max(float(np.max(np.abs(self.rhs))), 1.0)
        return float(np.max(np.abs(ax - self.rhs))) / scale


def solve_tridiagonal(system: TridiagonalSystem) -> np.ndarray:
    """Solve the system with the banded LAPACK routine."""
    system.assert_diagonally_dominant()
    n = system.n
    ab = np.zeros((3, n))
    ab[0, 1:] = system.upper[:-1]
    ab[1, :] = system.diag
    ab[2, :-1] = system.lower[1:]
    return solve_banded((1, 1), ab, system.rhs)


def thomas_solve(system: TridiagonalSystem) -> np.ndarray:
    """Reference Thomas elimination (forward sweep, back substitution)."""
    system.assert_diagonally_dominant()
    n = system.n
    lower = system.lower
    diag = system.diag
    upper = system.upper
    cp = np.empty(n)
    dp = np.empty(n)
    cp[0] = upper[0] / diag[0]
    dp[0] = system.rhs[0] / diag[0]
    for i in range(1, n):
        denom = diag[i] - lower[i] * cp[i - 1]
        cp[i] = upper[i] / denom
        dp[i] = (system.rhs[i] - lower[i] * dp[i - 1]) / denom
    x = np.empty(n)
    x[-1] = dp[-1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return x
