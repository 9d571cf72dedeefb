"""Exact Toom-Cook/Winograd transform construction for F(o, k).

For m = o + k - 1 distinct interpolation points (optionally including the
point at infinity) this builds rational matrices G (m x k), B (m x m) and
A (m x o) such that, for any kernel g and input slice d,

    A.T @ ((G @ g) * (B.T @ d))

equals the 1-D valid cross-correlation of d with g, exactly.  The 2-D form
nests the same matrices as sandwich products.

Row conventions: each finite point contributes a B.T row holding the monic
polynomial that vanishes at the other finite points, a G row holding its
power sequence scaled by the Lagrange normalization 1/prod(p_i - p_j), and
an A.T column holding its plain power sequence.  The infinity rows select
leading coefficients: G row [0..0 1], A.T column [0..0 1], and the B.T row
holds the full modulus polynomial over all finite points.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DimensionError, InvalidPointsError
from .legendre import BaseChange, build_base_change
from .rational import Rational, rational_zeros, to_float

INFINITY_TOKENS = ("inf", "infinity", "oo", "∞")


def poly_from_roots(roots) -> list[Rational]:
    """Ascending coefficients of prod(x - r) over the given roots ([] -> [1])."""
    coeffs = [Rational(1)]
    for r in roots:
        r = Rational(r)
        shifted = [Rational(0)] + coeffs
        for i, c in enumerate(coeffs):
            shifted[i] -= r * c
        coeffs = shifted
    return coeffs


@dataclass(frozen=True)
class InterpolationPoints:
    """A set of pairwise-distinct finite rational points, plus optionally infinity."""

    finite_points: tuple[Rational, ...]
    use_infinity: bool = False

    def __post_init__(self):
        pts = tuple(Rational(p) for p in self.finite_points)
        object.__setattr__(self, "finite_points", pts)
        if len(set(pts)) != len(pts):
            raise InvalidPointsError(f"interpolation points contain duplicates: {self}")

    @property
    def count(self) -> int:
        return len(self.finite_points) + (1 if self.use_infinity else 0)

    @classmethod
    def default(cls, m: int) -> "InterpolationPoints":
        """The conventional point ladder 0, 1, -1, 2, -2, ... closed with infinity."""
        pts: list[Rational] = []
        v = 1
        while len(pts) < m - 1:
            if not pts:
                pts.append(Rational(0))
                continue
            pts.append(Rational(v))
            if len(pts) < m - 1:
                pts.append(Rational(-v))
            v += 1
        return cls(finite_points=tuple(pts), use_infinity=True)

    @classmethod
    def parse(cls, text: str) -> "InterpolationPoints":
        """Parse a comma-separated list such as "0,1,-1,2,-2,inf" ("1/2" allowed)."""
        finite: list[Rational] = []
        use_inf = False
        for tok in text.split(","):
            tok = tok.strip()
            if not tok:
                continue
            if tok.lower() in INFINITY_TOKENS:
                if use_inf:
                    raise InvalidPointsError("infinity listed twice")
                use_inf = True
                continue
            try:
                finite.append(Rational(tok))
            except (ValueError, ZeroDivisionError) as exc:
                raise InvalidPointsError(f"cannot parse interpolation point {tok!r}") from exc
        return cls(finite_points=tuple(finite), use_infinity=use_inf)

    def __str__(self) -> str:
        toks = [str(p) for p in self.finite_points]
        if self.use_infinity:
            toks.append("inf")
        return ",".join(toks)


@dataclass
class WinogradPlan:
    """Transform matrices and tile geometry for one F(o, k) configuration.

    Matrices are exact (object dtype of Rational) as built; ``plan_to_float``
    produces the double-precision twin used by the runtime pipelines.  When
    ``base_change`` is present the derived matrices are G_P = P@G, B_P = P@B,
    A_P = P@A.
    """

    o: int
    k: int
    m: int
    points: InterpolationPoints
    G: np.ndarray
    B: np.ndarray
    A: np.ndarray
    base_change: BaseChange | None = None
    G_P: np.ndarray | None = None
    B_P: np.ndarray | None = None
    A_P: np.ndarray | None = None

    @property
    def is_exact(self) -> bool:
        return self.G.dtype == object

    @property
    def BT(self) -> np.ndarray:
        return self.B.T

    @property
    def AT(self) -> np.ndarray:
        return self.A.T


def build_plan(o: int, k: int, points: InterpolationPoints | None = None,
               use_legendre: bool = False) -> WinogradPlan:
    """Construct the exact F(o, k) plan from the given interpolation points.

    Raises InvalidPointsError for duplicate finite points and DimensionError
    when the point count differs from m = o + k - 1.
    """
    if o < 1 or k < 1:
        raise DimensionError(f"output and kernel sizes must be positive, got o={o} k={k}")
    m = o + k - 1
    if points is None:
        points = InterpolationPoints.default(m)
    if points.count != m:
        raise DimensionError(
            f"F({o},{k}) needs {m} interpolation points, got {points.count}")
    finite = points.finite_points
    if len(set(finite)) != len(finite):
        raise InvalidPointsError(f"interpolation points contain duplicates: {points}")

    G = rational_zeros((m, k))
    BT = rational_zeros((m, m))
    A = rational_zeros((m, o))
    for i, p in enumerate(finite):
        others = [q for j, q in enumerate(finite) if j != i]
        for j, c in enumerate(poly_from_roots(others)):
            BT[i, j] = c
        norm = Rational(1)
        for q in others:
            norm /= (p - q)
        power = Rational(1)
        for j in range(max(o, k)):
            if j < k:
                G[i, j] = norm * power
            if j < o:
                A[i, j] = power
            power *= p
    if points.use_infinity:
        for j, c in enumerate(poly_from_roots(finite)):
            BT[m - 1, j] = c
        G[m - 1, k - 1] = Rational(1)
        A[m - 1, o - 1] = Rational(1)

    plan = WinogradPlan(o=o, k=k, m=m, points=points, G=G, B=BT.T, A=A)
    if use_legendre:
        bc = build_base_change(m)
        plan.base_change = bc
        plan.G_P = bc.P @ plan.G
        plan.B_P = bc.P @ plan.B
        plan.A_P = bc.P @ plan.A
    return plan


def plan_to_float(plan: WinogradPlan) -> WinogradPlan:
    """Nearest-double twin of an exact plan; the exact plan is left untouched."""
    if not plan.is_exact:
        return plan
    bc = plan.base_change
    float_bc = None
    if bc is not None:
        float_bc = BaseChange(m=bc.m, P=to_float(bc.P), P_inv=to_float(bc.P_inv))
    return replace(
        plan,
        G=to_float(plan.G),
        B=to_float(plan.B),
        A=to_float(plan.A),
        base_change=float_bc,
        G_P=None if plan.G_P is None else to_float(plan.G_P),
        B_P=None if plan.B_P is None else to_float(plan.B_P),
        A_P=None if plan.A_P is None else to_float(plan.A_P),
    )


def condition_number(matrix: np.ndarray, norm: str = "two") -> float:
    """Condition number of a real matrix, for conditioning reports.

    "two": ratio of extreme singular values (works for rectangular input).
    "frobenius": ||M||_F * ||M^-1||_F for square input, singular-value ratio
    otherwise.  Singular matrices yield inf.
    """
    mat = np.asarray(matrix, dtype=np.float64)
    if mat.ndim != 2:
        raise DimensionError(f"condition_number expects a matrix, got shape {mat.shape}")
    if norm not in ("two", "frobenius"):
        raise ValueError(f"unknown norm {norm!r}")
    sv = np.linalg.svd(mat, compute_uv=False)
    # numerically singular (rank-deficient at working precision) -> sentinel
    if sv.min() <= sv.max() * max(mat.shape) * np.finfo(np.float64).eps:
        return float("inf")
    if norm == "frobenius" and mat.shape[0] == mat.shape[1]:
        return float(np.linalg.norm(mat) * np.linalg.norm(np.linalg.inv(mat)))
    return float(sv.max() / sv.min())
