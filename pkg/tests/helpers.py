"""Shared test utilities."""

from winoleg import BaseChange, build_plan
from winoleg.rational import rational_identity


def identity_base_plan(o, k):
    """A plan whose base change is the identity: legendre must equal canonical."""
    plan = build_plan(o, k)
    eye = rational_identity(plan.m)
    plan.base_change = BaseChange(m=plan.m, P=eye, P_inv=eye)
    plan.G_P, plan.B_P, plan.A_P = plan.G, plan.B, plan.A
    return plan
