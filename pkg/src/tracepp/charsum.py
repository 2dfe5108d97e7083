"""Weil sums S(a, b) = sum_w chi(a w^(q+1) + b w) and the root-count identity.

Closed forms are only applied inside the parameter ranges they are known
for.  Anything else falls back to direct summation and says so via the
branch label.
"""

from __future__ import annotations

import numpy as np

from . import gf2
from . import linmap
from .field import FieldCtx
from .linmap import LinPoly

BRANCH_TRIVIAL = "a=0"
BRANCH_ODD = "odd"
BRANCH_EVEN_FQ = "even:a-in-Fq"
BRANCH_EVEN_NONRESIDUE = "even:a-not-(q+1)-power"
BRANCH_FALLBACK = "direct-fallback"


def weil_direct(ctx: FieldCtx, a: int, b: int) -> int:
    ctx.require_tables()
    vals = ctx.mul_scalar_array(a, ctx.q1_table) ^ ctx.mul_scalar_array(b, ctx.elements_array)
    return int(ctx.chi_array(vals).sum())


def weil_odd(ctx: FieldCtx, a: int, b: int) -> int:
    """S(a, b) for odd n via S(a, b) = S(1, b/c), c^(q+1) = a."""
    if ctx.n % 2 == 0:
        raise ValueError("weil_odd needs odd n")
    if not a:
        raise ValueError("a must be nonzero")
    ctx.require_tables()
    c = ctx.root_q_plus_1(a)
    b1 = ctx.div(b, c)
    beta = ctx.artin_schreier_solve(b1 ^ 1, 2)
    if beta is None:
        return 0
    return ctx.chi(ctx.mul(ctx.frobenius(beta, ctx.m), beta) ^ beta) * ctx.S11


def even_branch(ctx: FieldCtx, a: int) -> str:
    if not a:
        return BRANCH_TRIVIAL
    if ctx.in_subfield(a, 1):
        return BRANCH_EVEN_FQ
    if not ctx.is_q_plus_1_power(a):
        return BRANCH_EVEN_NONRESIDUE
    return BRANCH_FALLBACK


def nonresidue_cols(ctx: FieldCtx, a: int) -> list[int]:
    """Columns of beta -> a^(q^(n-1)) beta^(q^(n-1)) + a beta^q."""
    m, n = ctx.m, ctx.n
    cols = []
    for i in range(ctx.mn):
        e = ctx.mul(a, 1 << i)
        cols.append(ctx.frobenius(e, m * (n - 1)) ^ ctx.mul(a, ctx.frobenius(1 << i, m)))
    return cols


def weil_even(ctx: FieldCtx, a: int, b: int) -> int:
    value, _ = _weil_even(ctx, a, b)
    return value


def _weil_even(ctx: FieldCtx, a: int, b: int) -> tuple[int, str]:
    if ctx.n % 2:
        raise ValueError("weil_even needs even n")
    if not a:
        raise ValueError("a must be nonzero")
    q, half = ctx.q, ctx.n // 2
    branch = even_branch(ctx, a)
    if branch == BRANCH_EVEN_FQ:
        beta = ctx.artin_schreier_solve(b, 2)
        if beta is None:
            return 0, branch
        beta_q1 = ctx.mul(ctx.frobenius(beta, ctx.m), beta)
        return ctx.chi(ctx.div(beta_q1, a)) * (-q) ** (half + 1), branch
    if branch == BRANCH_EVEN_NONRESIDUE:
        beta = gf2.solve(nonresidue_cols(ctx, a), b)
        assert beta is not None, "the semilinear map is a bijection here"
        beta_q1 = ctx.mul(ctx.frobenius(beta, ctx.m), beta)
        return ctx.chi(ctx.mul(a, beta_q1)) * (-q) ** half, branch
    return weil_direct(ctx, a, b), branch


def weil_closed(ctx: FieldCtx, a: int, b: int) -> tuple[int, str]:
    """Closed-form S(a, b) with the branch that produced it."""
    if not a:
        return (ctx.size if not b else 0), BRANCH_TRIVIAL
    if ctx.n % 2:
        return weil_odd(ctx, a, b), BRANCH_ODD
    return _weil_even(ctx, a, b)


def root_count(ctx: FieldCtx, A: int, L: LinPoly, method: str = "direct") -> int:
    """Number of x with Tr(A x^(q+1)) + L(x) = 0."""
    ctx.require_tables()
    if method == "direct":
        f = ctx.tr_table[ctx.mul_scalar_array(A, ctx.q1_table)] ^ ctx.linear_table(linmap.to_matrix(ctx, L))
        return int(np.count_nonzero(f == 0))
    if method == "charsum":
        Lp = linmap.adjoint(ctx, L)
        total = 0
        for u in range(ctx.size):
            total += weil_closed(ctx, ctx.mul(A, ctx.tr(u)), linmap.evaluate(ctx, Lp, u))[0]
        if total % ctx.size:
            raise ArithmeticError(f"character-sum total {total} not divisible by {ctx.size}")
        return total // ctx.size
    raise ValueError(f"unknown method {method!r}")
