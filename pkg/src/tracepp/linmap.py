"""2-linear polynomials sum_j c_j x^(2^j) over F_{q^n}.

A LinPoly is the universal representation; q-linearity (c_j != 0 only when
m | j) is a predicate.  Exponent indices live in Z/mn because x^(2^mn) = x
on the field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Union

from . import gf2
from .field import FieldCtx, Subspace


@dataclass(frozen=True)
class LinPoly:
    mn: int
    terms: tuple[tuple[int, int], ...]  # (j, c_j), sorted by j, c_j != 0

    @classmethod
    def make(cls, ctx: FieldCtx, terms: Union[Mapping[int, int], Iterable[tuple[int, int]]]) -> "LinPoly":
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, int] = {}
        for j, c in items:
            j %= ctx.mn
            acc[j] = acc.get(j, 0) ^ c
        return cls(ctx.mn, tuple(sorted((j, c) for j, c in acc.items() if c)))

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self.terms)

    def coeff(self, j: int) -> int:
        return self.coeffs.get(j % self.mn, 0)

    def is_zero(self) -> bool:
        return not self.terms

    def is_q_linear(self, m: int) -> bool:
        return all(j % m == 0 for j, _ in self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: "LinPoly") -> "LinPoly":
        if self.mn != other.mn:
            raise ValueError("polynomials over different fields")
        acc = self.coeffs
        for j, c in other.terms:
            acc[j] = acc.get(j, 0) ^ c
        return LinPoly(self.mn, tuple(sorted((j, c) for j, c in acc.items() if c)))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c:#x}*x^(2^{j})" for j, c in self.terms)


# -- constructors -----------------------------------------------------------

def zero(ctx: FieldCtx) -> LinPoly:
    return LinPoly(ctx.mn, ())


def identity(ctx: FieldCtx) -> LinPoly:
    return LinPoly.make(ctx, {0: 1})


def monomial(ctx: FieldCtx, c: int, j: int) -> LinPoly:
    return LinPoly.make(ctx, [(j, c)])


def binomial(ctx: FieldCtx, a: int, k: int, b: int, l: int) -> LinPoly:
    return LinPoly.make(ctx, [(k, a), (l, b)])


def sqrt_poly(ctx: FieldCtx) -> LinPoly:
    """x^(1/2) = x^(2^(mn-1))."""
    return LinPoly.make(ctx, {ctx.mn - 1: 1})


def trace_poly(ctx: FieldCtx, k: int = 1) -> LinPoly:
    """Tr_k as the polynomial sum_i x^(q^(ki))."""
    if ctx.n % k:
        raise ValueError(f"k = {k} does not divide n = {ctx.n}")
    return LinPoly.make(ctx, [(ctx.m * k * i, 1) for i in range(ctx.n // k)])


def scale_input(ctx: FieldCtx, L: LinPoly, s: int) -> LinPoly:
    """The polynomial x -> L(s x)."""
    return LinPoly.make(ctx, [(j, ctx.mul(c, ctx.frobenius(s, j))) for j, c in L.terms])


def from_cols(ctx: FieldCtx, cols) -> LinPoly:
    """Interpolate the unique 2-linear polynomial realising an F_2-linear map.

    With d_i the trace-dual basis of the polynomial basis, the map is
    x -> sum_i M(2^i) absTr(d_i x), so c_j = sum_i M(2^i) d_i^(2^j).
    """
    terms = []
    for j in range(ctx.mn):
        c = 0
        for i, img in enumerate(cols):
            if img:
                c ^= ctx.mul(img, ctx.frobenius(ctx.dual_basis[i], j))
        terms.append((j, c))
    return LinPoly.make(ctx, terms)


# -- evaluation and algebra -------------------------------------------------

def evaluate(ctx: FieldCtx, L: LinPoly, x: int) -> int:
    r = 0
    for j, c in L.terms:
        r ^= ctx.mul(c, ctx.frobenius(x, j))
    return r


def add(ctx: FieldCtx, L: LinPoly, M: LinPoly) -> LinPoly:
    return L + M


def adjoint(ctx: FieldCtx, L: LinPoly) -> LinPoly:
    """L'(x) = sum_j (c_j x)^(2^-j), adjoint for the absolute trace form."""
    return LinPoly.make(ctx, [(-j, ctx.frobenius(c, -j)) for j, c in L.terms])


def compose(ctx: FieldCtx, M: LinPoly, L: LinPoly) -> LinPoly:
    """Coefficients of M(L(x))."""
    terms = []
    for i, d in M.terms:
        for j, c in L.terms:
            terms.append((i + j, ctx.mul(d, ctx.frobenius(c, i))))
    return LinPoly.make(ctx, terms)


def to_matrix(ctx: FieldCtx, L: LinPoly) -> list[int]:
    """Columns of L in the polynomial basis: column i is L(2^i)."""
    return [evaluate(ctx, L, 1 << i) for i in range(ctx.mn)]


def kernel(ctx: FieldCtx, L: LinPoly) -> Subspace:
    return Subspace.spanned_by(gf2.kernel(to_matrix(ctx, L)))


def image(ctx: FieldCtx, L: LinPoly) -> Subspace:
    return Subspace.spanned_by(to_matrix(ctx, L))


def image_of(ctx: FieldCtx, L: LinPoly, w: Subspace) -> Subspace:
    """L(W) for a subspace W."""
    return Subspace.spanned_by(evaluate(ctx, L, b) for b in w.basis)


def inverse(ctx: FieldCtx, L: LinPoly) -> Optional[LinPoly]:
    inv = gf2.inverse(to_matrix(ctx, L))
    if inv is None:
        return None
    return from_cols(ctx, inv)


def is_bijective(ctx: FieldCtx, L: LinPoly) -> bool:
    return gf2.rank(to_matrix(ctx, L)) == ctx.mn


# -- q-decomposition and the maps on F_q ------------------------------------

@dataclass(frozen=True)
class QDecomposition:
    """values[i] = L_i(1) where L(x) = sum_i L_i(x^(2^i)) with q-linear L_i."""

    values: tuple[int, ...]

    def all_in(self, ctx: FieldCtx, k: int) -> bool:
        return all(ctx.in_subfield(v, k) for v in self.values)


def q_decompose(ctx: FieldCtx, L: LinPoly) -> QDecomposition:
    values = [0] * ctx.m
    for j, c in L.terms:
        values[j % ctx.m] ^= c
    return QDecomposition(tuple(values))


def q_components(ctx: FieldCtx, L: LinPoly) -> list[LinPoly]:
    """The q-linear L_i themselves, so that L(x) = sum_i L_i(x^(2^i))."""
    parts: list[list[tuple[int, int]]] = [[] for _ in range(ctx.m)]
    for j, c in L.terms:
        parts[j % ctx.m].append((j - j % ctx.m, c))
    return [LinPoly.make(ctx, p) for p in parts]


@dataclass(frozen=True)
class FqMap:
    """A map on F_q, tabulated on the subfield's elements."""

    domain: tuple[int, ...]
    images: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.images[self.domain.index(x)]

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.domain, self.images))

    @property
    def is_permutation(self) -> bool:
        return len(set(self.images)) == len(self.images)


def build_ell(ctx: FieldCtx, dec: QDecomposition, with_sqrt_term: bool) -> FqMap:
    """x -> sum_i (L_i(1) x)^(2^(m-i)) [+ x^(2^(m-1))] on F_q.

    Raises ValueError if some L_i(1) lies outside F_q.
    """
    if not dec.all_in(ctx, 1):
        raise ValueError("some L_i(1) is not in F_q")
    m = ctx.m
    domain = tuple(ctx.elements_of(1))
    images = []
    for x in domain:
        y = 0
        for i, v in enumerate(dec.values):
            y ^= ctx.frobenius(ctx.mul(v, x), m - i)
        if with_sqrt_term:
            y ^= ctx.frobenius(x, m - 1)
        images.append(y)
    return FqMap(domain, tuple(images))


@dataclass(frozen=True)
class QuotientAction:
    """Action of a linear map on F_{q^n}/ker Tr, identified with F_q via Tr."""

    stable: bool
    induced: Optional[FqMap]

    @property
    def automorphism(self) -> bool:
        return self.stable and self.induced is not None and self.induced.is_permutation


def quotient_action(ctx: FieldCtx, L: LinPoly) -> QuotientAction:
    stable = all(ctx.tr(evaluate(ctx, L, b)) == 0 for b in ctx.ker_tr.basis)
    if not stable:
        return QuotientAction(False, None)
    domain = tuple(ctx.elements_of(1))
    images = tuple(ctx.tr(evaluate(ctx, L, ctx.trace_preimage(v))) for v in domain)
    return QuotientAction(True, FqMap(domain, images))


# -- encodings --------------------------------------------------------------

def to_json(L: LinPoly) -> list:
    return [[j, f"{c:#x}"] for j, c in L.terms]


def from_json(ctx: FieldCtx, data) -> LinPoly:
    """Parse ``[[j, "0x.."], ...]`` (a JSON string or an already-loaded list)."""
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, list):
        raise ValueError("LinPoly JSON must be an array of [j, coeff] pairs")
    terms = []
    for item in data:
        if not isinstance(item, (list, tuple)) or len(item) != 2:
            raise ValueError(f"bad LinPoly term {item!r}")
        j, c = item
        if not isinstance(j, int):
            raise ValueError(f"bad exponent index {j!r}")
        terms.append((j, ctx.parse_elt(c)))
    return LinPoly.make(ctx, terms)
