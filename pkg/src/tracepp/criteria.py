"""Permutation criteria for f(x) = Tr(A x^(q+1)) + L(x) and their oracle.

Each criterion returns a :class:`Verdict`.  Closed-form statements are
paired with a direct subspace or matrix computation of the same quantity;
when ``verify`` is on and the two disagree a :class:`ConsistencyError` is
raised instead of silently trusting either side.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import gf2
from . import linmap as lm
from .field import FieldCtx, Subspace
from .linmap import LinPoly

PERMUTATION = "permutation"
N_TO_1 = "n_to_1"
NOT_INJECTIVE = "not_injective"
NOT_MET = "hypotheses_not_met"

RULE_ODD = "odd-coefficients"
RULE_ODD_QUOTIENT = "odd-quotient-automorphism"
RULE_ODD_BINOMIAL = "odd-binomial-clauses"
RULE_ODD_TRINOMIAL = "n3-trinomial-clauses"
RULE_EVEN = "even-kernel-inclusion"
RULE_EVEN_BINOMIAL_PROP = "even-binomial-inclusion"
RULE_EVEN_BINOMIAL_COR = "even-binomial-clauses"
RULE_INVERSE = "inverse-coefficients"
RULE_ORACLE = "oracle"


class ConsistencyError(RuntimeError):
    """A closed form and the matching direct computation disagree."""


@dataclass
class Verdict:
    kind: str
    rule: str
    trace: list[tuple[str, bool]] = field(default_factory=list)
    N: Optional[int] = None
    oracle: Optional[dict] = None

    def __post_init__(self):
        if self.kind == N_TO_1 and self.N == 1:
            self.kind = PERMUTATION
        if self.kind == PERMUTATION:
            self.N = 1

    @property
    def is_permutation(self) -> bool:
        return self.kind == PERMUTATION

    @property
    def decided(self) -> bool:
        return self.kind != NOT_MET

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.N is not None:
            d["N"] = self.N
        d["rule"] = self.rule
        d["trace"] = [{"hypothesis": h, "holds": bool(v)} for h, v in self.trace]
        if self.oracle is not None:
            d["oracle"] = self.oracle
        return d


@dataclass(frozen=True)
class MapProfile:
    """Fiber census: ((fiber size, how many image points have it), ...)."""

    fibers: tuple[tuple[int, int], ...]

    @property
    def total(self) -> int:
        return sum(s * c for s, c in self.fibers)

    @property
    def is_N_to_1(self) -> Optional[int]:
        return self.fibers[0][0] if len(self.fibers) == 1 else None

    @property
    def is_permutation(self) -> bool:
        return self.is_N_to_1 == 1


def map_table(ctx: FieldCtx, A: int, L: LinPoly) -> np.ndarray:
    """Values of Tr(A x^(q+1)) + L(x) for every x, indexed by x."""
    ctx.require_tables()
    return ctx.tr_table[ctx.mul_scalar_array(A, ctx.q1_table)] ^ ctx.linear_table(lm.to_matrix(ctx, L))


def oracle_profile(ctx: FieldCtx, A: int, L: LinPoly) -> MapProfile:
    counts = np.bincount(map_table(ctx, A, L), minlength=ctx.size)
    sizes = Counter(counts[counts > 0].tolist())
    return MapProfile(tuple(sorted(sizes.items())))


def oracle_verdict(ctx: FieldCtx, A: int, L: LinPoly) -> Verdict:
    prof = oracle_profile(ctx, A, L)
    N = prof.is_N_to_1
    if N is not None:
        return Verdict(N_TO_1, RULE_ORACLE, [], N)
    return Verdict(NOT_INJECTIVE, RULE_ORACLE)


def agrees(verdict: Verdict, profile: MapProfile) -> Optional[bool]:
    """Whether a decided verdict matches the census (None if undecided)."""
    if not verdict.decided:
        return None
    if verdict.is_permutation != profile.is_permutation:
        return False
    if verdict.kind == N_TO_1:
        return profile.is_N_to_1 == verdict.N
    return True


def attach_oracle(ctx: FieldCtx, verdict: Verdict, A: int, L: LinPoly) -> Verdict:
    prof = oracle_profile(ctx, A, L)
    verdict.oracle = {"checked": True, "agrees": agrees(verdict, prof)}
    return verdict


# -- shared pieces ----------------------------------------------------------

def _require_odd(ctx: FieldCtx) -> None:
    if ctx.n % 2 == 0:
        raise ValueError("this criterion needs odd n")


def _require_even(ctx: FieldCtx) -> None:
    if ctx.n % 2:
        raise ValueError("this criterion needs even n")


def normalize(ctx: FieldCtx, A: int, L: LinPoly) -> Optional[LinPoly]:
    """L(alpha^-1 x) with alpha^(q+1) = A, so that f(alpha^-1 y) = Tr(y^(q+1)) + that.

    Returns None when A has no (q+1)-th root (possible only for even n).
    """
    if not A:
        raise ValueError("A must be nonzero")
    if A == 1:
        return L
    alpha = ctx.root_q_plus_1(A)
    if alpha is None:
        return None
    return lm.scale_input(ctx, L, ctx.inv(alpha))


def ker_tr_cap_ker(ctx: FieldCtx, M: LinPoly) -> Subspace:
    """ker Tr intersected with ker M, by one stacked elimination."""
    mn = ctx.mn
    cols = [ctx.tr(1 << i) | (lm.evaluate(ctx, M, 1 << i) << mn) for i in range(mn)]
    return Subspace.spanned_by(gf2.kernel(cols))


def ker_tr2_adjoint(ctx: FieldCtx, L: LinPoly) -> Subspace:
    """ker(Tr_2 o L')."""
    Lp = lm.adjoint(ctx, L)
    return Subspace.spanned_by(gf2.kernel([ctx.trace_to(lm.evaluate(ctx, Lp, 1 << i), 2) for i in range(ctx.mn)]))


def _residue_ne(ctx: FieldCtx, a: int, b: int, num: int, den: int) -> bool:
    return not ctx.power_residue_equal(a, b, num, den)


# -- odd n ------------------------------------------------------------------

def pp_odd(ctx: FieldCtx, L: LinPoly, A: int = 1) -> Verdict:
    """Coefficient criterion: L_i(1) in F_q, ell permutes F_q, ker Tr & ker L' = 0."""
    _require_odd(ctx)
    L = normalize(ctx, A, L)
    trace: list[tuple[str, bool]] = []
    dec = lm.q_decompose(ctx, L)
    in_fq = dec.all_in(ctx, 1)
    trace.append(("L_i(1) in F_q for all i", in_fq))
    if not in_fq:
        return Verdict(NOT_INJECTIVE, RULE_ODD, trace)
    ell = lm.build_ell(ctx, dec, with_sqrt_term=True)
    trace.append(("ell permutes F_q", ell.is_permutation))
    if not ell.is_permutation:
        return Verdict(NOT_INJECTIVE, RULE_ODD, trace)
    N = ker_tr_cap_ker(ctx, lm.adjoint(ctx, L)).size
    trace.append(("ker Tr & ker L' = {0}", N == 1))
    return Verdict(N_TO_1, RULE_ODD, trace, N)


def pp_odd_quotient(ctx: FieldCtx, L: LinPoly, A: int = 1) -> Verdict:
    """Subspace criterion: L'(ker Tr) = ker Tr and L' + x^(1/2) is an automorphism mod ker Tr."""
    _require_odd(ctx)
    L = normalize(ctx, A, L)
    trace: list[tuple[str, bool]] = []
    Lp = lm.adjoint(ctx, L)
    onto = lm.image_of(ctx, Lp, ctx.ker_tr) == ctx.ker_tr
    trace.append(("L'(ker Tr) = ker Tr", onto))
    if not onto:
        return Verdict(NOT_INJECTIVE, RULE_ODD_QUOTIENT, trace)
    act = lm.quotient_action(ctx, Lp + lm.sqrt_poly(ctx))
    trace.append(("L'(x) + x^(1/2) is an automorphism of F/ker Tr", act.automorphism))
    return Verdict(PERMUTATION if act.automorphism else NOT_INJECTIVE, RULE_ODD_QUOTIENT, trace)


def n_to_1_odd(ctx: FieldCtx, L: LinPoly, A: int = 1) -> Optional[int]:
    """N = |ker Tr & ker L'| when ell permutes F_q, else None."""
    _require_odd(ctx)
    L = normalize(ctx, A, L)
    dec = lm.q_decompose(ctx, L)
    if not dec.all_in(ctx, 1) or not lm.build_ell(ctx, dec, True).is_permutation:
        return None
    return ker_tr_cap_ker(ctx, lm.adjoint(ctx, L)).size


def binomial_kernel_closed(ctx: FieldCtx, a: int, k: int, b: int, l: int) -> tuple[Optional[int], str]:
    """|ker Tr & ker L'| for L = a x^(2^k) + b x^(2^l) from the case table.

    Returns (None, reason) outside the covered coefficient conditions.
    """
    m, mn, q = ctx.m, ctx.mn, ctx.q
    k %= mn
    l %= mn
    if not lm.binomial(ctx, a, k, b, l).terms:
        raise ValueError("L = 0")
    d = math.gcd(l - k, mn)
    e = math.gcd(l - k, m)
    r = d // e
    if _residue_ne(ctx, a, b, ctx.order, (1 << d) - 1):
        return 1, "distinct residues"
    if (k - l) % m == 0:
        s = a ^ b
        if not ctx.in_subfield(s, 1):
            return None, "k = l mod m but a+b not in F_q"
        if s:
            return 1 << d, "k = l mod m, a+b != 0"
        if ctx.trace_to(ctx.inv(a), r) == 0:
            return 1 << d, "k = l mod m, a+b = Tr_r(1/a) = 0"
        return q ** (r - 1), "k = l mod m, a+b = 0, Tr_r(1/a) != 0"
    if not (ctx.in_subfield(a, 1) and ctx.in_subfield(b, 1)):
        return None, "k != l mod m but a, b not both in F_q"
    if _residue_ne(ctx, a, b, q - 1, (1 << e) - 1) or (ctx.n // r) % 2 == 0:
        return 1 << d, "k != l mod m, 2^d case"
    return 1 << (d - e), "k != l mod m, 2^(d-e) case"


def binomial_kernel_card(ctx: FieldCtx, a: int, k: int, b: int, l: int, verify: bool = True) -> Optional[int]:
    """Closed-form |ker Tr & ker L'| for a binomial; None when hypotheses are not met."""
    _require_odd(ctx)
    value, case = binomial_kernel_closed(ctx, a, k, b, l)
    if verify and value is not None:
        direct = ker_tr_cap_ker(ctx, lm.adjoint(ctx, lm.binomial(ctx, a, k, b, l))).size
        if direct != value:
            raise ConsistencyError(f"binomial kernel ({case}): closed {value} != direct {direct}")
    return value


# readings of the two ambiguous binomial clauses
READING_OR_AND = "X or (Y and Z)"
READING_AND_OR = "(X or Y) and Z"
EXP_2S_MINUS_1 = "(q-1)/(2^s-1)"
EXP_2_S_MINUS_1 = "(q-1)/2^(s-1)"


def binomial_pp_odd(
    ctx: FieldCtx,
    a: int,
    k: int,
    b: int,
    l: int,
    *,
    precedence: str = READING_OR_AND,
    monomial_exponent: str = EXP_2S_MINUS_1,
    verify: bool = True,
) -> Verdict:
    """Clause lists for binomial L = a x^(2^k) + b x^(2^l), n odd, A = 1."""
    _require_odd(ctx)
    m, mn, q = ctx.m, ctx.mn, ctx.q
    k %= mn
    l %= mn
    L = lm.binomial(ctx, a, k, b, l)
    if L.is_zero():
        raise ValueError("L = 0")
    if len(L) == 1:
        # merged or single term: treat as the monomial c x^(2^j)
        (j, c), = L.terms
        a, k, b, l = c, j, 0, j
    elif not a:
        a, k, b, l = b, l, a, k
    trace: list[tuple[str, bool]] = []
    in_fq = lambda x: ctx.in_subfield(x, 1)  # noqa: E731

    if not b:
        s = math.gcd(k - 1, m)
        trace.append(("a in F_q^*", bool(a) and in_fq(a)))
        if monomial_exponent == EXP_2S_MINUS_1:
            num, den = q - 1, (1 << s) - 1
        else:
            num, den = q - 1, 1 << (s - 1)
            if num % den:
                trace.append((f"exponent (q-1)/2^(s-1) integral (s={s})", False))
                return Verdict(NOT_MET, RULE_ODD_BINOMIAL, trace)
        ok = bool(a) and in_fq(a) and ctx.pow(a, num // den) != 1
        trace.append((f"a^({monomial_exponent}) != 1 (s={s})", ok))
        v = Verdict(PERMUTATION if ok else NOT_INJECTIVE, RULE_ODD_BINOMIAL, trace)
        return _verify_against(ctx, v, L, verify and monomial_exponent == EXP_2S_MINUS_1)

    d = math.gcd(l - k, mn)
    if (k - l) % m == 0:
        s = math.gcd(k - 1, m)
        t = a ^ b
        residues = _residue_ne(ctx, a, b, ctx.order, (1 << d) - 1)
        first = bool(t) and in_fq(t) and ctx.pow(t, (q - 1) // ((1 << s) - 1)) != 1 and residues
        second = not t and d == m and ctx.tr(ctx.inv(a)) != 0
        trace += [("a+b in F_q^*, (a+b)^((q-1)/(2^s-1)) != 1, residues differ", first),
                  ("a+b = 0, d = m, Tr(1/a) != 0", second)]
        v = Verdict(PERMUTATION if first or second else NOT_INJECTIVE, RULE_ODD_BINOMIAL, trace)
        return _verify_against(ctx, v, L, verify)

    if (l - 1) % m != 0:
        if (k - 1) % m == 0:
            a, k, b, l = b, l, a, k
        else:
            trace.append(("k = l mod m, or one of k, l = 1 mod m", False))
            return Verdict(NOT_MET, RULE_ODD_BINOMIAL, trace)
    s = math.gcd(k - 1, m)
    both_fq = in_fq(a) and in_fq(b)
    trace.append(("a, b in F_q", both_fq))
    if not both_fq:
        return _verify_against(ctx, Verdict(NOT_INJECTIVE, RULE_ODD_BINOMIAL, trace), L, verify)
    ell_ok = _residue_ne(ctx, a, b ^ 1, q - 1, (1 << s) - 1)
    trace.append(("a^((q-1)/(2^s-1)) != (b+1)^((q-1)/(2^s-1))", ell_ok))
    X = _residue_ne(ctx, a, b, ctx.order, (1 << d) - 1)
    Y = m % d == 0
    Z = Y and ctx.power_residue_equal(a, b, q - 1, (1 << d) - 1)
    if precedence == READING_OR_AND:
        kernel_ok = X or (Y and Z)
    else:
        kernel_ok = (X or Y) and Z
    trace.append((f"residue clause [{precedence}]", kernel_ok))
    v = Verdict(PERMUTATION if ell_ok and kernel_ok else NOT_INJECTIVE, RULE_ODD_BINOMIAL, trace)
    return _verify_against(ctx, v, L, verify and precedence == READING_OR_AND)


def _verify_against(ctx: FieldCtx, v: Verdict, L: LinPoly, verify: bool, A: int = 1) -> Verdict:
    if verify:
        ref = pp_odd(ctx, L, A) if ctx.n % 2 else pp_even(ctx, A, L)
        if ref.is_permutation != v.is_permutation:
            raise ConsistencyError(f"{v.rule} says {v.kind} but {ref.rule} says {ref.kind} for {L}")
    return v


@dataclass
class TrinomialReport:
    """Closed-form and direct values for L = (a x + b x^q + c x^(q^2))^(2^k), n = 3."""

    rank: int
    det: int
    det_direct: int
    ker_L: int
    ker_L_direct: int
    cap: Optional[int]
    cap_direct: int
    cap_case: str
    verdict: Verdict


def _field_rank(ctx: FieldCtx, rows: list[list[int]]) -> int:
    rows = [r[:] for r in rows]
    rank = 0
    ncols = len(rows[0])
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = ctx.inv(rows[rank][col])
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = ctx.mul(rows[i][col], inv)
                rows[i] = [x ^ ctx.mul(f, y) for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _det3(ctx: FieldCtx, M: list[list[int]]) -> int:
    mul = ctx.mul
    (a, b, c), (d, e, f), (g, h, i) = M
    return (mul(a, mul(e, i) ^ mul(f, h)) ^ mul(b, mul(d, i) ^ mul(f, g)) ^ mul(c, mul(d, h) ^ mul(e, g)))


def trinomial_poly(ctx: FieldCtx, a: int, b: int, c: int, k: int) -> LinPoly:
    base = LinPoly.make(ctx, [(0, a), (ctx.m, b), (2 * ctx.m, c)])
    return lm.compose(ctx, lm.monomial(ctx, 1, k), base)


def trinomial_n3(ctx: FieldCtx, a: int, b: int, c: int, k: int = 0, verify: bool = True) -> TrinomialReport:
    if ctx.n != 3:
        raise ValueError("trinomial_n3 needs n = 3")
    if not 0 <= k < ctx.m:
        raise ValueError("k must satisfy 0 <= k < m")
    m, q = ctx.m, ctx.q
    fr = lambda x, i: ctx.frobenius(x, m * i)  # noqa: E731
    mul = ctx.mul
    M = [[a, b, c], [fr(c, 1), fr(a, 1), fr(b, 1)], [fr(b, 2), fr(c, 2), fr(a, 2)]]
    norm_exp = q * q + q + 1
    det = (ctx.pow(a, norm_exp) ^ ctx.pow(b, norm_exp) ^ ctx.pow(c, norm_exp)
           ^ ctx.tr(mul(a, mul(fr(b, 1), fr(c, 2)))))
    det_direct = _det3(ctx, M)
    rank = _field_rank(ctx, M) if any(a_ for row in M for a_ in row) else 0
    ker_L = q ** (3 - rank)

    L = trinomial_poly(ctx, a, b, c, k)
    ker_L_direct = lm.kernel(ctx, L).size
    cap_direct = ker_tr_cap_ker(ctx, lm.adjoint(ctx, L)).size
    t = a ^ b ^ c
    tr_form = ctx.tr(mul(fr(a, 1), a) ^ mul(fr(a, 1), b) ^ mul(fr(b, 1), b))
    if t and ctx.in_subfield(t, 1):
        cap, cap_case = ker_L, "L(1) in F_q^*"
    elif not t:
        if tr_form:
            cap, cap_case = 1, "L(1) = 0, Tr(a^(q+1)+a^q b+b^(q+1)) != 0"
        elif a == fr(b, 2) and a == fr(c, 1):
            cap, cap_case = q * q, "L(1) = 0, a = b^(q^2) = c^q"
        else:
            cap, cap_case = q, "L(1) = 0, otherwise"
    else:
        cap, cap_case = None, "L(1) not in F_q"

    s = math.gcd(k - 1, m)
    trace = []
    ell_ok = ctx.pow(t, (q - 1) // ((1 << s) - 1)) != 1
    trace.append(("(a+b+c)^((q-1)/(2^s-1)) != 1", ell_ok))
    first = bool(t) and ctx.in_subfield(t, 1) and det != 0
    second = not t and tr_form != 0
    trace += [("a+b+c in F_q^* and det != 0", first), ("a+b+c = 0 and Tr(a^(q+1)+a^q b+b^(q+1)) != 0", second)]
    verdict = Verdict(PERMUTATION if ell_ok and (first or second) else NOT_INJECTIVE, RULE_ODD_TRINOMIAL, trace)

    if verify:
        problems = []
        if det != det_direct:
            problems.append(f"det {det:#x} != {det_direct:#x}")
        if ker_L != ker_L_direct:
            problems.append(f"|ker L| {ker_L} != {ker_L_direct}")
        if cap is not None and cap != cap_direct:
            problems.append(f"|ker Tr & ker L'| ({cap_case}) {cap} != {cap_direct}")
        if problems:
            raise ConsistencyError("; ".join(problems))
        _verify_against(ctx, verdict, L, True)
    return TrinomialReport(rank, det, det_direct, ker_L, ker_L_direct, cap, cap_direct, cap_case, verdict)


# -- even n -----------------------------------------------------------------

def pp_even(ctx: FieldCtx, A: int, L: LinPoly) -> Verdict:
    """ker(Tr_2 o L') inside ker Tr and ker L = 0; never a PP if A is not a (q+1)-th power."""
    _require_even(ctx)
    if not A:
        raise ValueError("A must be nonzero")
    trace: list[tuple[str, bool]] = []
    residue = ctx.is_q_plus_1_power(A)
    trace.append(("A^((q^n-1)/(q+1)) = 1", residue))
    if not residue:
        return Verdict(NOT_INJECTIVE, RULE_EVEN, trace)
    L = normalize(ctx, A, L)
    incl = ker_tr2_adjoint(ctx, L).issubset(ctx.ker_tr)
    trace.append(("ker(Tr_2 o L') in ker Tr", incl))
    if not incl:
        return Verdict(NOT_INJECTIVE, RULE_EVEN, trace)
    N = lm.kernel(ctx, L).size
    trace.append(("ker L = {0}", N == 1))
    return Verdict(N_TO_1, RULE_EVEN, trace, N)


def n_to_1_even(ctx: FieldCtx, L: LinPoly, A: int = 1) -> Optional[int]:
    """N = |ker L'| when ker(Tr_2 o L') lies in ker Tr, else None."""
    _require_even(ctx)
    L = normalize(ctx, A, L)
    if L is None or not ker_tr2_adjoint(ctx, L).issubset(ctx.ker_tr):
        return None
    return lm.kernel(ctx, lm.adjoint(ctx, L)).size


def _even_prop_bullets(ctx: FieldCtx, a: int, b: int, k: int, l: int) -> list[tuple[str, bool]]:
    """The three bullets for q^2-linear components a = L_k(1), b = L_l(1), 0 <= k < l < 2m."""
    m, q = ctx.m, ctx.q
    fr = lambda x, i: ctx.frobenius(x, m * i)  # noqa: E731
    mul = ctx.mul
    in2 = lambda x: ctx.in_subfield(x, 2)  # noqa: E731
    e = math.gcd(l - k, 2 * m)
    delta = mul(fr(a, 2), b) ^ mul(a, fr(b, 2))
    b1 = False
    if l - k == m and not in2(a) and delta:
        dq = fr(delta, 1)
        eq1 = mul(dq, fr(a, 2) ^ a) ^ mul(delta, fr(b, 3) ^ fr(b, 1))
        eq2 = mul(dq, fr(b, 2) ^ b) ^ mul(delta, fr(a, 3) ^ fr(a, 1))
        b1 = eq1 == 0 and eq2 == 0
    b2 = in2(a) and in2(b) and _residue_ne(ctx, a, b, q * q - 1, (1 << e) - 1)
    b3 = False
    if m % e == 0 and a and b and in2(a) and in2(b):
        den = (1 << e) - 1
        b3 = ctx.pow(a, (1 << (l - k)) * (q - 1) // den) == ctx.pow(b, (q - 1) // den)
    return [
        ("l-k = m, a not in F_q^2, delta != 0, delta equations", b1),
        ("a, b in F_q^2, a^((q^2-1)/(2^e-1)) != b^((q^2-1)/(2^e-1))", b2),
        ("e | m, a, b in F_q^2^*, a^(2^(l-k)(q-1)/(2^e-1)) = b^((q-1)/(2^e-1))", b3),
    ]


def binomial_even(ctx: FieldCtx, a: int, k: int, b: int, l: int, mode: str = "corollary",
                  verify: bool = True) -> Verdict:
    """Binomial L = a x^(2^k) + b x^(2^l), n even, A = 1.

    ``proposition`` decides the kernel inclusion ker(Tr_2 o L') in ker Tr
    (which makes f exactly N-to-1 with N = |ker L|); ``corollary`` decides
    the permutation property.
    """
    _require_even(ctx)
    m, mn = ctx.m, ctx.mn
    k %= mn
    l %= mn
    L = lm.binomial(ctx, a, k, b, l)
    if L.is_zero():
        raise ValueError("L = 0")
    if len(L) == 1:
        (j, c), = L.terms
        a, k, b, l = c, j, 0, j
    if k > l:
        a, k, b, l = b, l, a, k
    d = math.gcd(l - k, mn)
    residues = _residue_ne(ctx, a, b, ctx.order, (1 << d) - 1)
    N_closed = 1 if residues else 1 << d

    if mode == "proposition":
        kr, lr = k % (2 * m), l % (2 * m)
        if kr == lr:
            s = a ^ b
            trace = [("single q^2-component L_k(1) in F_q^2^*", bool(s) and ctx.in_subfield(s, 2))]
        else:
            A_, B_ = (a, b) if kr < lr else (b, a)
            lo, hi = min(kr, lr), max(kr, lr)
            trace = _even_prop_bullets(ctx, A_, B_, lo, hi)
        incl = any(v for _, v in trace)
        if verify:
            direct = ker_tr2_adjoint(ctx, L).issubset(ctx.ker_tr)
            if direct != incl:
                raise ConsistencyError(f"even binomial inclusion clauses say {incl}, direct inclusion is {direct} for {L}")
            if incl and lm.kernel(ctx, L).size != N_closed:
                raise ConsistencyError("binomial kernel size disagrees with the residue test")
        v = Verdict(N_TO_1 if incl else NOT_INJECTIVE, RULE_EVEN_BINOMIAL_PROP, trace, N_closed if incl else None)
        return v

    if mode != "corollary":
        raise ValueError(f"unknown mode {mode!r}")
    m2 = 2 * m
    fr = lambda x, i: ctx.frobenius(x, m * i)  # noqa: E731
    in2 = lambda x: ctx.in_subfield(x, 2)  # noqa: E731
    e = math.gcd(l - k, m2)
    delta = ctx.mul(fr(a, 2), b) ^ ctx.mul(a, fr(b, 2))
    c1 = False
    if (l - k) % m2 == m and not in2(a) and delta:
        dq = fr(delta, 1)
        eq1 = ctx.mul(dq, fr(a, 2) ^ a) ^ ctx.mul(delta, fr(b, 3) ^ fr(b, 1))
        eq2 = ctx.mul(dq, fr(b, 2) ^ b) ^ ctx.mul(delta, fr(a, 3) ^ fr(a, 1))
        c1 = eq1 == 0 and eq2 == 0
    c2 = (k - l) % m2 != 0 and in2(a) and in2(b) and _residue_ne(ctx, a, b, ctx.q ** 2 - 1, (1 << e) - 1)
    c3 = (k - l) % m2 == 0 and in2(a ^ b)
    trace = [
        ("a^((q^n-1)/(2^d-1)) != b^((q^n-1)/(2^d-1))", residues),
        ("l-k = m mod 2m, a not in F_q^2, delta != 0, delta equations", c1),
        ("k != l mod 2m, a, b in F_q^2, e-residues differ", c2),
        ("k = l mod 2m, a+b in F_q^2", c3),
    ]
    v = Verdict(PERMUTATION if residues and (c1 or c2 or c3) else NOT_INJECTIVE, RULE_EVEN_BINOMIAL_COR, trace)
    return _verify_against(ctx, v, L, verify)


@dataclass
class InverseReport:
    verdict: Verdict
    inverse: Optional[LinPoly]
    coefficient_test: Optional[bool]
    image_test: Optional[bool]


def inverse_criterion(ctx: FieldCtx, L: LinPoly, verify: bool = True) -> InverseReport:
    """For bijective L: PP iff every (L^-1)_i(1) lies in F_q^2 iff F_q is inside L(F_q^2)."""
    _require_even(ctx)
    inv = lm.inverse(ctx, L)
    if inv is None:
        v = Verdict(NOT_INJECTIVE, RULE_INVERSE, [("L bijective", False)])
        return InverseReport(v, None, None, None)
    coef = lm.q_decompose(ctx, inv).all_in(ctx, 2)
    img = ctx.subfield(1).issubset(lm.image_of(ctx, L, ctx.subfield(2)))
    trace = [("L bijective", True), ("(L^-1)_i(1) in F_q^2 for all i", coef), ("F_q in L(F_q^2)", img)]
    if coef != img:
        raise ConsistencyError(f"coefficient test {coef} but image test {img} for {L}")
    v = Verdict(PERMUTATION if coef else NOT_INJECTIVE, RULE_INVERSE, trace)
    _verify_against(ctx, v, L, verify)
    return InverseReport(v, inv, coef, img)
