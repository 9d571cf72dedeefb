"""Monic Legendre polynomials and base-change matrices, incl. golden values."""

import pytest

from winoleg import Rational, build_base_change, monic_legendre

# The m=6 pair as published, ascending powers per row of the transpose.
GOLDEN_PT_6 = [
    [1, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0],
    [Rational(-1, 3), 0, 1, 0, 0, 0],
    [0, Rational(-3, 5), 0, 1, 0, 0],
    [Rational(3, 35), 0, Rational(-6, 7), 0, 1, 0],
    [0, Rational(5, 21), 0, Rational(-10, 9), 0, 1],
]
GOLDEN_PINVT_6 = [
    [1, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0],
    [Rational(1, 3), 0, 1, 0, 0, 0],
    [0, Rational(3, 5), 0, 1, 0, 0],
    [Rational(1, 5), 0, Rational(6, 7), 0, 1, 0],
    [0, Rational(3, 7), 0, Rational(10, 9), 0, 1],
]


def eval_recurrence(n, x):
    """Evaluate the monic polynomial directly from the recurrence (oracle)."""
    prev, cur = Rational(1), x
    if n == 0:
        return prev
    for i in range(1, n):
        prev, cur = cur, x * cur - Rational(i * i, 4 * i * i - 1) * prev
    return cur


def test_low_degrees():
    assert monic_legendre(0) == [1]
    assert monic_legendre(1) == [0, 1]
    assert monic_legendre(2) == [Rational(-1, 3), 0, 1]
    assert monic_legendre(4) == [Rational(3, 35), 0, Rational(-6, 7), 0, 1]


def test_leading_coefficient_is_one():
    for n in range(9):
        assert monic_legendre(n)[-1] == 1


def test_negative_degree_rejected():
    with pytest.raises(ValueError):
        monic_legendre(-1)


def test_golden_m6():
    bc = build_base_change(6)
    pt = bc.P.T
    pinvt = bc.P_inv.T
    for i in range(6):
        for j in range(6):
            assert pt[i, j] == GOLDEN_PT_6[i][j], (i, j)
            assert pinvt[i, j] == GOLDEN_PINVT_6[i][j], (i, j)


def test_m1_trivial():
    bc = build_base_change(1)
    assert bc.P[0, 0] == 1 and bc.P_inv[0, 0] == 1


def test_nonzero_counts():
    for m, expected in [(4, 6), (6, 12)]:
        p = build_base_change(m).P
        assert sum(1 for i in range(m) for j in range(m) if p[i, j] != 0) == expected


def test_parity_sparsity():
    pt = build_base_change(8).P.T
    for i in range(8):
        for j in range(8):
            if (i - j) % 2 == 1:
                assert pt[i, j] == 0


@pytest.mark.parametrize("m", range(1, 9))
def test_inverse_and_unit_triangular(m):
    bc = build_base_change(m)
    eye = bc.P @ bc.P_inv
    for i in range(m):
        for j in range(m):
            assert eye[i, j] == (1 if i == j else 0)
            if i > j:
                assert bc.P[i, j] == 0  # unit upper-triangular => det is 1
        assert bc.P[i, i] == 1


def test_polynomial_evaluation_consistency():
    # coefficient rows against direct recurrence evaluation at rational points
    for n in range(8):
        coeffs = monic_legendre(n)
        for x in (Rational(0), Rational(1), Rational(-2), Rational(3, 7)):
            horner = Rational(0)
            for c in reversed(coeffs):
                horner = horner * x + c
            assert horner == eval_recurrence(n, x)
