"""Exact rational scalars and small dense rational matrices.

``Rational`` is ``fractions.Fraction``: arbitrary precision, always in lowest
terms with positive denominator, exact add/mul/neg/inverse.  Matrices are
numpy object arrays of ``Rational`` so that ``@``, ``.T`` and elementwise
products stay exact.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

Rational = Fraction


def rational_matrix(rows) -> np.ndarray:
    """Build an object-dtype matrix of Rationals from nested values."""
    rows = [[Rational(v) for v in row] for row in rows]
    out = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, row in enumerate(rows):
        out[i, :] = row
    return out


def rational_zeros(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out[...] = Rational(0)
    return out


def rational_identity(n: int) -> np.ndarray:
    out = rational_zeros((n, n))
    for i in range(n):
        out[i, i] = Rational(1)
    return out


def rational_inverse(matrix: np.ndarray) -> np.ndarray:
    """Exact inverse by Gauss-Jordan elimination with partial pivoting on != 0."""
    n = matrix.shape[0]
    if matrix.shape != (n, n):
        raise ValueError(f"matrix must be square, got {matrix.shape}")
    aug = [[Rational(matrix[i, j]) for j in range(n)]
           + [Rational(1) if i == j else Rational(0) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot_row is None:
            raise ZeroDivisionError("matrix is singular")
        aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        pivot = aug[col][col]
        aug[col] = [v / pivot for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    return rational_matrix([row[n:] for row in aug])


def to_float(matrix: np.ndarray) -> np.ndarray:
    """Round every Rational entry to the nearest double."""
    return np.array([[float(v) for v in row] for row in matrix], dtype=np.float64)
