"""Small dense matrix helpers and finite-difference derivatives.

Everything here works on matrices of size 8x8 or smaller.
"""

from __future__ import annotations

import warnings
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

DEFAULT_STEP = 1e-5
PIVOT_RTOL = 1e-14


class SingularMatrixError(np.linalg.LinAlgError):
    """Raised when elimination meets a pivot that is numerically zero."""


def solve_linear(A, B) -> np.ndarray:
    """Solve ``A @ X = B`` by LU with partial pivoting.

    A pivot smaller than ``PIVOT_RTOL`` times the largest entry of its row in
    ``A`` is treated as a singular matrix.
    """
    A = np.asarray(A)
    B = np.asarray(B)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if B.shape[0] != A.shape[0]:
        raise ValueError(f"right-hand side with {B.shape[0]} rows does not fit {A.shape}")

    row_scale = np.max(np.abs(A), axis=1)
    if np.any(row_scale == 0.0):
        raise SingularMatrixError("matrix has an all-zero row")
    with warnings.catch_warnings():
        # singularity is reported below with our own exception
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=True)

    # piv encodes successive row swaps; replay them to know which original
    # row ended up at each pivot position
    order = np.arange(A.shape[0])
    for i, p in enumerate(piv):
        order[i], order[p] = order[p], order[i]
    pivots = np.abs(np.diag(lu))
    if np.any(pivots < PIVOT_RTOL * row_scale[order]):
        raise SingularMatrixError(
            f"pivot {pivots.min():.3e} below {PIVOT_RTOL:g} x row scale"
        )
    return scipy.linalg.lu_solve((lu, piv), B)


def inverse(A) -> np.ndarray:
    A = np.asarray(A)
    return solve_linear(A, np.eye(A.shape[0], dtype=A.dtype))


def determinant(A) -> float | complex:
    """Determinant of a square matrix (zero is a legitimate answer)."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    return np.linalg.det(A)


def condition_number(A) -> float:
    return float(np.linalg.cond(np.asarray(A)))


def central_difference(f: Callable, x: float, h: float = DEFAULT_STEP):
    """Symmetric difference quotient ``(f(x+h) - f(x-h)) / 2h``.

    ``f`` may return scalars or arrays. Truncation error is O(h^2).
    """
    if not h > 0:
        raise ValueError("step h must be positive")
    return (f(x + h) - f(x - h)) / (2.0 * h)


def richardson_even(values: Sequence[float], steps: Sequence[float]) -> float:
    """Extrapolate ``v(s) = v0 + c1 s^2 + c2 s^4 + ...`` to ``s = 0``.

    Fits a polynomial in ``s^2`` through all given points (Neville scheme),
    so ``n`` points cancel the first ``n - 1`` even error terms.
    """
    v = [float(x) for x in values]
    s2 = [float(s) ** 2 for s in steps]
    if len(v) != len(s2) or not v:
        raise ValueError("values and steps must be non-empty and of equal length")
    n = len(v)
    table = list(v)
    for level in range(1, n):
        for i in range(n - level):
            j = i + level
            table[i] = (s2[j] * table[i] - s2[i] * table[i + 1]) / (s2[j] - s2[i])
    return table[0]
