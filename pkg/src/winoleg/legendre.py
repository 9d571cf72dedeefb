"""Monic Legendre polynomials and the polynomial base-change matrices.

The base-change pair (P, P_inv) re-expresses degree < m polynomials between
the canonical monomial base and the monic Legendre base.  P is unit
upper-triangular; its transpose holds one polynomial's ascending-power
coefficients per row, so printing ``P.T`` shows the polynomials directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rational import Rational, rational_inverse, rational_zeros


def monic_legendre(n: int) -> list[Rational]:
    """Coefficients (ascending, length n+1) of the monic Legendre polynomial p_n.

    Defined by p_0 = 1, p_1 = x and the three-term recurrence
    p_{n+1}(x) = x * p_n(x) - (n^2 / (4n^2 - 1)) * p_{n-1}(x), which keeps the
    leading coefficient exactly 1 and all coefficients rational.
    """
    if n < 0:
        raise ValueError("polynomial degree must be non-negative")
    prev = [Rational(1)]
    if n == 0:
        return prev
    cur = [Rational(0), Rational(1)]
    for i in range(1, n):
        c = Rational(i * i, 4 * i * i - 1)
        nxt = [Rational(0)] + cur
        for j, v in enumerate(prev):
            nxt[j] -= c * v
        prev, cur = cur, nxt
    return cur


@dataclass(frozen=True)
class BaseChange:
    """Exact base-change matrices of dimension m.

    P[j][i] is the coefficient of x^j in p_i, so P maps Legendre-base
    coefficient vectors to canonical ones and P_inv maps back.
    """

    m: int
    P: np.ndarray
    P_inv: np.ndarray


def build_base_change(m: int) -> BaseChange:
    """Build the m x m base-change pair in exact rational arithmetic."""
    if m < 1:
        raise ValueError("base-change dimension must be >= 1")
    P = rational_zeros((m, m))
    for i in range(m):
        for j, c in enumerate(monic_legendre(i)):
            P[j, i] = c
    return BaseChange(m=m, P=P, P_inv=_unit_upper_inverse(P))


def _unit_upper_inverse(P: np.ndarray) -> np.ndarray:
    # Back-substitution on a unit upper-triangular matrix; exact and O(m^3).
    m = P.shape[0]
    inv = rational_zeros((m, m))
    for col in range(m):
        inv[col, col] = Rational(1)
        for row in range(col - 1, -1, -1):
            acc = Rational(0)
            for t in range(row + 1, col + 1):
                acc += P[row, t] * inv[t, col]
            inv[row, col] = -acc
    return inv


def _check_inverse(bc: BaseChange) -> bool:
    eye = bc.P @ bc.P_inv
    m = bc.m
    return all(eye[i, j] == (1 if i == j else 0) for i in range(m) for j in range(m))


if __name__ == "__main__":
    for m in range(1, 9):
        assert _check_inverse(build_base_change(m)), m
    print("base-change self-check passed for m = 1..8")
