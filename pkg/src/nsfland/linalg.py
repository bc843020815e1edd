"""Dense LU factorisation with partial pivoting.

Small self-contained solver used for the absorbing-chain linear systems
(at most a few hundred unknowns), keeping the numerical core of the
analysis in-repo and auditable.
"""

from __future__ import annotations

import numpy as np

from .errors import NumericalError, ValidationError


def lu_factor(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Factor ``a`` as ``P A = L U`` with partial (row) pivoting.

    Returns ``(lu, piv)`` where ``lu`` packs the unit-lower factor below
    the diagonal and the upper factor on and above it, and ``piv[k]`` is
    the row swapped with row ``k`` at step ``k``.
    """
    lu = np.array(a, dtype=np.float64, copy=True)
    if lu.ndim != 2 or lu.shape[0] != lu.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {lu.shape}")
    n = lu.shape[0]
    piv = np.arange(n)
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if lu[p, k] == 0.0:
            raise NumericalError(f"singular matrix: zero pivot at column {k}")
        piv[k] = p
        if p != k:
            lu[[k, p], :] = lu[[p, k], :]
        lu[k + 1 :, k] /= lu[k, k]
        lu[k + 1 :, k + 1 :] -= np.outer(lu[k + 1 :, k], lu[k, k + 1 :])
    return lu, piv


def lu_solve(
    factors: tuple[np.ndarray, np.ndarray], b: np.ndarray
) -> np.ndarray:
    """Solve ``A x = b`` given ``lu_factor(A)``; ``b`` may have many columns."""
    lu, piv = factors
    n = lu.shape[0]
    x = np.array(b, dtype=np.float64, copy=True)
    vector = x.ndim == 1
    if vector:
        x = x[:, None]
    if x.shape[0] != n:
        raise ValidationError(
            f"right-hand side has {x.shape[0]} rows, expected {n}"
        )
    for k in range(n):
        p = piv[k]
        if p != k:
            x[[k, p], :] = x[[p, k], :]
    for k in range(1, n):
        x[k, :] -= lu[k, :k] @ x[:k, :]
    for k in range(n - 1, -1, -1):
        x[k, :] -= lu[k, k + 1 :] @ x[k + 1 :, :]
        x[k, :] /= lu[k, k]
    return x[:, 0] if vector else x


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve ``A x = b`` by LU factorisation with partial pivoting."""
    return lu_solve(lu_factor(a), b)
