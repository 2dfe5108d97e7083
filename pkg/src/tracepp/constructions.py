"""Building new permutation polynomials Tr(x^(q+1)) + L(x) from old ones.

Each builder checks its hypotheses on the polynomial basis (enough, since
every identity involved is F_2-linear), emits the resulting 2-linear
polynomials, and confirms each one with the criterion and the census.
A confirmed hypothesis with a failing output raises ConsistencyError.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import gf2
from . import linmap as lm
from .criteria import (
    NOT_MET,
    PERMUTATION,
    ConsistencyError,
    Verdict,
    oracle_profile,
    pp_even,
    pp_odd,
)
from .field import FieldCtx
from .linmap import LinPoly

RULE_ELL_LAMBDA = "ell-lambda"
RULE_ZERO_TRACE = "compose-zero-trace"
RULE_FIXED_TRACE = "compose-fixed-trace"
RULE_AFFINE = "affine-variants"
RULE_EVEN_LAMBDA = "even-lambda-stability"

PROP_ZERO_TRACE = "prop_zero_trace"
THM_FIXED_TRACE = "thm_fixed_trace"


@dataclass
class Construction:
    polys: list[LinPoly]
    verdict: Verdict
    labels: list[str] = field(default_factory=list)


def stabilizes_ker_tr(ctx: FieldCtx, M: LinPoly) -> bool:
    return lm.image_of(ctx, M, ctx.ker_tr) == ctx.ker_tr


def trace_rule_holds(ctx: FieldCtx, lam_adj: LinPoly, rule: str) -> bool:
    """Tr(lam'(x)) against Tr(x)^(1/2), Tr(x) or 0, checked on the polynomial basis."""
    for i in range(ctx.mn):
        e = 1 << i
        got = ctx.tr(lm.evaluate(ctx, lam_adj, e))
        t = ctx.tr(e)
        want = {"sqrt": ctx.frobenius(t, -1), "identity": t, "zero": 0}[rule]
        if got != want:
            return False
    return True


def kernel_bound_holds(ctx: FieldCtx, L: LinPoly) -> bool:
    """|ker L| <= q, necessary for Tr(x^(q+1)) + L(x) to permute."""
    return lm.kernel(ctx, L).size <= ctx.q


def _confirm(ctx: FieldCtx, L: LinPoly, what: str) -> None:
    v = pp_odd(ctx, L) if ctx.n % 2 else pp_even(ctx, 1, L)
    if not v.is_permutation:
        raise ConsistencyError(f"{what}: hypotheses hold but {v.rule} rejects {L}")
    if ctx.has_tables and not oracle_profile(ctx, 1, L).is_permutation:
        raise ConsistencyError(f"{what}: hypotheses hold but the census rejects {L}")


def _finish(ctx: FieldCtx, rule: str, trace, polys: list[LinPoly], labels: list[str]) -> Construction:
    if not all(h for _, h in trace):
        return Construction([], Verdict(NOT_MET, rule, trace))
    for L, label in zip(polys, labels):
        _confirm(ctx, L, f"{rule} [{label}]")
    v = Verdict(PERMUTATION, rule, trace)
    if ctx.has_tables:
        v.oracle = {"checked": True, "agrees": True}
    return Construction(polys, v, labels)


def _require_odd(ctx: FieldCtx) -> None:
    if ctx.n % 2 == 0:
        raise ValueError("this construction needs odd n")


def construct_ell_lambda(ctx: FieldCtx, lam: LinPoly, ell_coeffs: Sequence[int]) -> Construction:
    """Tr(x^(q+1) + ell(x)) + lam(x), returned as Tr(x^(q+1)) + L(x)."""
    _require_odd(ctx)
    lam_adj = lm.adjoint(ctx, lam)
    coeffs = list(ell_coeffs)
    trace = [
        ("lam'(ker Tr) = ker Tr", stabilizes_ker_tr(ctx, lam_adj)),
        ("Tr(lam'(x)) = Tr(x)^(1/2)", trace_rule_holds(ctx, lam_adj, "sqrt")),
        ("ell has coefficients in F_q", all(ctx.in_subfield(c, 1) for c in coeffs)),
        ("ell has degree < q", len(coeffs) <= ctx.m),
    ]
    ell = LinPoly.make(ctx, list(enumerate(coeffs)))
    perm = all(h for _, h in trace) and len({lm.evaluate(ctx, ell, y) for y in ctx.elements_of(1)}) == ctx.q
    trace.append(("ell permutes F_q", perm))
    L = lam + lm.compose(ctx, lm.trace_poly(ctx), ell)
    return _finish(ctx, RULE_ELL_LAMBDA, trace, [L], ["L"])


def construct_compose(ctx: FieldCtx, L: LinPoly, lam: LinPoly, mode: str) -> Construction:
    """L o lam and lam o L."""
    _require_odd(ctx)
    lam_adj = lm.adjoint(ctx, lam)
    if mode == PROP_ZERO_TRACE:
        rule = RULE_ZERO_TRACE
        trace = [
            ("L'(ker Tr) = ker Tr", stabilizes_ker_tr(ctx, lm.adjoint(ctx, L))),
            ("lam'(ker Tr) = ker Tr", stabilizes_ker_tr(ctx, lam_adj)),
            ("Tr(lam'(x)) = 0", trace_rule_holds(ctx, lam_adj, "zero")),
        ]
    elif mode == THM_FIXED_TRACE:
        rule = RULE_FIXED_TRACE
        trace = [
            ("Tr(x^(q+1)) + L(x) permutes", pp_odd(ctx, L).is_permutation),
            ("lam'(ker Tr) = ker Tr", stabilizes_ker_tr(ctx, lam_adj)),
            ("Tr(lam'(x)) = Tr(x)", trace_rule_holds(ctx, lam_adj, "identity")),
        ]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    polys = [lm.compose(ctx, L, lam), lm.compose(ctx, lam, L)]
    return _finish(ctx, rule, trace, polys, ["L o lam", "lam o L"])


def affine_gate(ctx: FieldCtx, lam: LinPoly) -> bool:
    """Whether y -> y + Tr(lam'(y)) permutes F_q."""
    lam_adj = lm.adjoint(ctx, lam)
    images = {y ^ ctx.tr(lm.evaluate(ctx, lam_adj, y)) for y in ctx.elements_of(1)}
    return len(images) == ctx.q


def construct_affine_variants(ctx: FieldCtx, L: LinPoly, lam: LinPoly) -> Construction:
    """L + L(Tr(lam)) + Tr(lam)^2 and L + Tr(lam(L)) + Tr(lam(x^2))."""
    _require_odd(ctx)
    trace = [
        ("Tr(x^(q+1)) + L(x) permutes", pp_odd(ctx, L).is_permutation),
        ("y + Tr(lam'(y)) permutes F_q", affine_gate(ctx, lam)),
    ]
    T = lm.trace_poly(ctx)
    sq = lm.monomial(ctx, 1, 1)
    t_lam = lm.compose(ctx, T, lam)
    first = L + lm.compose(ctx, L, t_lam) + lm.compose(ctx, sq, t_lam)
    second = L + lm.compose(ctx, t_lam, L) + lm.compose(ctx, t_lam, sq)
    return _finish(ctx, RULE_AFFINE, trace, [first, second], ["L + L(Tr lam) + (Tr lam)^2", "L + Tr lam(L) + Tr lam(x^2)"])


def lambda_even_derived(ctx: FieldCtx, L: LinPoly, lam: LinPoly) -> Construction:
    """Derived witnesses from a bijective lam stabilising F_q^2 or F_q (n even)."""
    if ctx.n % 2:
        raise ValueError("this construction needs even n")
    base = [
        ("Tr(x^(q+1)) + L(x) permutes", pp_even(ctx, 1, L).is_permutation),
        ("lam bijective", lm.is_bijective(ctx, lam)),
    ]
    stab2 = lm.image_of(ctx, lam, ctx.subfield(2)) == ctx.subfield(2)
    stab1 = lm.image_of(ctx, lam, ctx.subfield(1)) == ctx.subfield(1)
    trace = base + [("lam(F_q^2) = F_q^2", stab2), ("lam(F_q) = F_q", stab1)]
    if not all(h for _, h in base) or not (stab1 or stab2):
        return Construction([], Verdict(NOT_MET, RULE_EVEN_LAMBDA, trace))
    polys, labels = [], []
    if stab2:
        polys += [lam, lm.compose(ctx, L, lam)]
        labels += ["lam", "L o lam"]
    if stab1:
        polys.append(lm.compose(ctx, lam, L))
        labels.append("lam o L")
    for P, label in zip(polys, labels):
        _confirm(ctx, P, f"{RULE_EVEN_LAMBDA} [{label}]")
    v = Verdict(PERMUTATION, RULE_EVEN_LAMBDA, trace)
    if ctx.has_tables:
        v.oracle = {"checked": True, "agrees": True}
    return Construction(polys, v, labels)


# -- samplers for hypothesis-satisfying lam ---------------------------------

def _random_invertible(rng: np.random.Generator, dim: int) -> list[int]:
    while True:
        cols = [int(rng.integers(0, 1 << dim)) for _ in range(dim)]
        if gf2.rank(cols) == dim:
            return cols


def sample_lambda(ctx: FieldCtx, rng: np.random.Generator, trace_rule: str) -> LinPoly:
    """A random lam with lam'(ker Tr) = ker Tr and the given Tr(lam'(x)) rule.

    lam' is built on the basis (ker Tr basis, trace lifts of a basis of F_q)
    and converted back to the polynomial basis; lam is its adjoint.
    """
    kb = list(ctx.ker_tr.basis)
    fq_basis = list(ctx.subfield(1).basis)
    lifts = [ctx.trace_preimage(v) for v in fq_basis]
    dim_k = len(kb)
    mix = _random_invertible(rng, dim_k)
    images = [gf2.apply(kb, c) for c in mix]
    for v, r in zip(fq_basis, lifts):
        target = {"sqrt": ctx.frobenius(v, -1), "identity": v, "zero": 0}[trace_rule]
        noise = gf2.apply(kb, int(rng.integers(0, 1 << dim_k)))
        images.append(noise ^ (ctx.trace_preimage(target) if target else 0))
    basis = kb + lifts
    binv = gf2.inverse(basis)
    if binv is None:
        raise AssertionError("ker Tr basis and trace lifts must span the field")
    cols = [gf2.apply(images, binv[j]) for j in range(ctx.mn)]
    return lm.adjoint(ctx, lm.from_cols(ctx, cols))


def sample_linpoly(ctx: FieldCtx, rng: np.random.Generator, max_terms: int = 3) -> LinPoly:
    nterms = int(rng.integers(1, max_terms + 1))
    return LinPoly.make(ctx, [(int(rng.integers(0, ctx.mn)), int(rng.integers(0, ctx.size))) for _ in range(nterms)])


def sample_bijection(ctx: FieldCtx, rng: np.random.Generator, max_terms: int = 3) -> LinPoly:
    while True:
        L = sample_linpoly(ctx, rng, max_terms)
        if lm.is_bijective(ctx, L):
            return L


def pp_witnesses(ctx: FieldCtx, rng: np.random.Generator, count: int, max_tries: int = 20000) -> list[LinPoly]:
    """Up to ``count`` distinct L with Tr(x^(q+1)) + L(x) a permutation."""
    found: list[LinPoly] = []
    seen = set()
    check = pp_odd if ctx.n % 2 else (lambda c, L: pp_even(c, 1, L))
    for _ in range(max_tries):
        if len(found) >= count:
            break
        L = sample_linpoly(ctx, rng)
        if L.terms in seen:
            continue
        seen.add(L.terms)
        if check(ctx, L).is_permutation:
            found.append(L)
    return found


def find_affine_lambda(ctx: FieldCtx, rng: np.random.Generator, max_tries: int = 1000) -> Optional[LinPoly]:
    for _ in range(max_tries):
        lam = sample_linpoly(ctx, rng)
        if affine_gate(ctx, lam):
            return lam
    return None
