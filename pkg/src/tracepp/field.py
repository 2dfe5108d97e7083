"""Arithmetic in the binary tower F_{2^{mn}} > F_{q^n} > F_q with q = 2^m.

Elements are plain ints in the polynomial basis: bit i is the coefficient
of X^i modulo the field modulus.  Subfields F_{q^k} are never given their
own representation; they are the fixed points of x -> x^{q^k}.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import gf2

DEFAULT_CAP = 24
TABLE_CAP = 20


class FieldTooLargeError(RuntimeError):
    """An operation needs log tables or exhaustive loops the field is too big for."""


class ReducibleModulusError(ValueError):
    pass


# -- GF(2)[X] helpers -------------------------------------------------------

def clmul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_mod(a: int, f: int) -> int:
    df = f.bit_length() - 1
    while a.bit_length() - 1 >= df:
        a ^= f << (a.bit_length() - 1 - df)
    return a


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def is_irreducible(f: int) -> bool:
    """Ben-Or test: f has no factor of degree <= deg(f)/2."""
    d = f.bit_length() - 1
    if d < 1:
        return False
    if d == 1:
        return True
    if not f & 1:
        return False
    x = 0b10
    h = x
    for _ in range(d // 2):
        h = poly_mod(clmul(h, h), f)
        if poly_gcd(f, h ^ x) != 1:
            return False
    return True


def smallest_irreducible(degree: int) -> int:
    f = 1 << degree
    while not is_irreducible(f):
        f += 1
    return f


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


# -- specs and subspaces ----------------------------------------------------

_SPEC_RE = re.compile(r"^\s*m\s*=\s*(\d+)\s*,\s*n\s*=\s*(\d+)\s*(?:,\s*mod\s*=\s*(0[xX][0-9a-fA-F]+)\s*)?$")


@dataclass(frozen=True)
class FieldSpec:
    m: int
    n: int
    modulus: Optional[int] = None

    @property
    def mn(self) -> int:
        return self.m * self.n

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``m=<int>,n=<int>[,mod=0x<hex>]``."""
        match = _SPEC_RE.match(text)
        if match is None:
            raise ValueError(f"bad field spec {text!r}; expected m=<int>,n=<int>[,mod=0x<hex>]")
        m, n, mod = match.groups()
        return cls(int(m), int(n), int(mod, 16) if mod else None)

    def __str__(self) -> str:
        s = f"m={self.m},n={self.n}"
        if self.modulus is not None:
            s += f",mod={self.modulus:#x}"
        return s


@dataclass(frozen=True)
class Subspace:
    """F_2-subspace held as a fully reduced echelon basis (canonical)."""

    basis: tuple[int, ...]

    @classmethod
    def spanned_by(cls, vectors) -> "Subspace":
        return cls(tuple(gf2.echelon(vectors)))

    @classmethod
    def full(cls, dim: int) -> "Subspace":
        return cls(tuple(1 << i for i in reversed(range(dim))))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return 1 << len(self.basis)

    def __contains__(self, x: int) -> bool:
        return gf2.reduce(x, self.basis) == 0

    def __len__(self) -> int:
        return self.size

    def elements(self) -> list[int]:
        return gf2.span(self.basis)

    def issubset(self, other: "Subspace") -> bool:
        return all(b in other for b in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.spanned_by(self.basis + other.basis)

    def intersect(self, other: "Subspace") -> "Subspace":
        # (s, t) -> sum s_i a_i + sum t_j b_j; kernel pairs give common vectors
        cols = list(self.basis) + list(other.basis)
        vecs = []
        for combo in gf2.kernel(cols):
            v = 0
            for i, a in enumerate(self.basis):
                if (combo >> i) & 1:
                    v ^= a
            vecs.append(v)
        return Subspace.spanned_by(vecs)

    def reduce(self, x: int) -> int:
        """Smallest (as an integer) element of the coset x + self."""
        return gf2.reduce(x, self.basis)


# -- the field context ------------------------------------------------------

class FieldCtx:
    """F_{q^n} with q = 2^m, plus the tables the rest of the package leans on.

    Treat instances as immutable; everything is computed in ``__init__``.
    """

    def __init__(self, spec: FieldSpec, cap: int = DEFAULT_CAP):
        if spec.m < 1 or spec.n < 1:
            raise ValueError("m and n must be positive")
        if spec.mn > cap:
            raise FieldTooLargeError(f"mn = {spec.mn} exceeds the cap {cap}")
        mn = spec.mn
        if spec.modulus is None:
            modulus = smallest_irreducible(mn)
        else:
            modulus = spec.modulus
            if modulus.bit_length() - 1 != mn:
                raise ReducibleModulusError(f"modulus {modulus:#x} does not have degree {mn}")
            if not is_irreducible(modulus):
                raise ReducibleModulusError(f"modulus {modulus:#x} is reducible over F_2")
        self.spec = FieldSpec(spec.m, spec.n, modulus)
        self.m, self.n, self.mn = spec.m, spec.n, mn
        self.q = 1 << spec.m
        self.size = 1 << mn
        self.order = self.size - 1
        self.modulus = modulus
        self.cap = cap

        sq = [self._mulmod(1 << i, 1 << i) for i in range(mn)]
        frob = [[1 << i for i in range(mn)]]
        for _ in range(1, mn):
            frob.append(gf2.compose(sq, frob[-1]))
        self._frob_cols = frob
        self.generator = self._least_primitive()

        self.has_tables = mn <= TABLE_CAP
        self.exp: list[int] = []
        self.log: list[int] = []
        if self.has_tables:
            self._build_tables()

        self._trace_cols = {k: self._make_trace_cols(k) for k in range(1, spec.n + 1) if spec.n % k == 0}
        self.abs_trace_mask = sum(
            gf2.parity(self._abs_trace_slow(1 << i)) << i for i in range(mn)
        )
        self.ker_tr = Subspace.spanned_by(gf2.kernel(self._trace_cols[1]))
        # d_k with abs_trace(2^i * d_k) = [i == k]
        gram = [
            sum(gf2.parity(self.mul(1 << i, 1 << j) & self.abs_trace_mask) << i for i in range(mn))
            for j in range(mn)
        ]
        self.dual_basis = [gf2.solve(gram, 1 << k) for k in range(mn)]

        if spec.n % 2 == 1:
            assert math.gcd(self.q + 1, self.order) == 1
        self.S11: Optional[int] = None
        if self.has_tables:
            self._build_arrays()
            if spec.n % 2 == 1:
                w = self.elements_array
                self.S11 = int(self.chi_array(self.q1_table ^ w).sum())

    # construction helpers

    def _mulmod(self, a: int, b: int) -> int:
        return poly_mod(clmul(a, b), self.modulus)

    def _pow_slow(self, x: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._mulmod(r, x)
            x = self._mulmod(x, x)
            e >>= 1
        return r

    def _least_primitive(self) -> int:
        primes = _prime_factors(self.order)
        for g in range(1, self.size):
            if all(self._pow_slow(g, self.order // p) != 1 for p in primes):
                return g
        raise AssertionError("no primitive element")

    def _build_tables(self) -> None:
        order = self.order
        exp = [0] * (2 * order + 1)
        log = [0] * self.size
        x = 1
        g = self.generator
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = self._mulmod(x, g)
        for i in range(order, 2 * order + 1):
            exp[i] = exp[i - order]
        self.exp, self.log = exp, log
        self.exp_np = np.array(exp, dtype=np.int64)
        self.log_np = np.array(log, dtype=np.int64)

    def _build_arrays(self) -> None:
        w = np.arange(self.size, dtype=np.int64)
        self.elements_array = w
        self.abs_trace_bits = self.linear_table([gf2.parity(self.abs_trace_mask & (1 << i)) for i in range(self.mn)])
        self.chi_table = 1 - 2 * self.abs_trace_bits
        self.tr_table = self.linear_table(self._trace_cols[1])
        self.q1_table = self.mul_arrays(self.frobenius_array(w, self.m), w)

    def _make_trace_cols(self, k: int) -> list[int]:
        cols = []
        for i in range(self.mn):
            e = 1 << i
            t = 0
            for j in range(self.n // k):
                t ^= self.frobenius(e, self.m * k * j)
            cols.append(t)
        return cols

    def _abs_trace_slow(self, x: int) -> int:
        t = 0
        for k in range(self.mn):
            t ^= self.frobenius(x, k)
        assert t in (0, 1)
        return t

    def require_tables(self) -> None:
        if not self.has_tables:
            raise FieldTooLargeError(
                f"mn = {self.mn} is above the table cap {TABLE_CAP}; this operation needs log tables"
            )

    # scalar arithmetic

    def mul(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        if self.has_tables:
            return self.exp[self.log[a] + self.log[b]]
        return self._mulmod(a, b)

    def inv(self, a: int) -> int:
        if not a:
            raise ZeroDivisionError("0 has no inverse")
        if self.has_tables:
            return self.exp[self.order - self.log[a]]
        return self._pow_slow(a, self.order - 1)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, x: int, e: int) -> int:
        """x^e for e >= 0, with 0^0 = 1 and 0^e = 0 otherwise."""
        if e < 0:
            return self.pow(self.inv(x), -e)
        if not x:
            return 0 if e else 1
        if self.has_tables:
            return self.exp[(self.log[x] * e) % self.order]
        return self._pow_slow(x, e % self.order)

    def frobenius(self, x: int, k: int) -> int:
        """x^(2^k), with k taken mod mn (negative k allowed)."""
        k %= self.mn
        if not k or not x:
            return x
        if self.has_tables:
            return self.exp[(self.log[x] << k) % self.order]
        return gf2.apply(self._frob_cols[k], x)

    def frobenius_cols(self, k: int) -> list[int]:
        return self._frob_cols[k % self.mn]

    def trace_to(self, x: int, k: int = 1) -> int:
        """Trace of F_{q^n} onto F_{q^k}; k must divide n."""
        cols = self._trace_cols.get(k)
        if cols is None:
            raise ValueError(f"k = {k} does not divide n = {self.n}")
        return gf2.apply(cols, x)

    def tr(self, x: int) -> int:
        return gf2.apply(self._trace_cols[1], x)

    def trace_cols(self, k: int = 1) -> list[int]:
        if k not in self._trace_cols:
            raise ValueError(f"k = {k} does not divide n = {self.n}")
        return self._trace_cols[k]

    def abs_trace(self, x: int) -> int:
        return gf2.parity(x & self.abs_trace_mask)

    def chi(self, x: int) -> int:
        return -1 if gf2.parity(x & self.abs_trace_mask) else 1

    def in_subfield(self, x: int, k: int) -> bool:
        """Membership in F_{q^k} (k need not divide n; then it is F_{q^gcd})."""
        return self.frobenius(x, self.m * k) == x

    def subfield(self, k: int) -> Subspace:
        cols = [c ^ (1 << i) for i, c in enumerate(self.frobenius_cols(self.m * k))]
        return Subspace.spanned_by(gf2.kernel(cols))

    def full_space(self) -> Subspace:
        return Subspace.full(self.mn)

    def elements(self) -> range:
        return range(self.size)

    def elements_of(self, k: int) -> list[int]:
        """Elements of F_{q^k} in increasing order."""
        return sorted(self.subfield(k).elements())

    def multiplication_cols(self, c: int) -> list[int]:
        return [self.mul(c, 1 << i) for i in range(self.mn)]

    # residues, pairings and the semilinear solvers

    def power_residue_equal(self, a: int, b: int, num: int, den: int) -> bool:
        """Whether a^(num/den) == b^(num/den), exact, with 0^e = 0 for e > 0."""
        if den == 0 or num % den:
            raise ValueError(f"{den} does not divide {num}")
        e = num // den
        if e == 0 and (a == 0 or b == 0):
            raise ValueError("0^0 is not evaluated")
        return self.pow(a, e) == self.pow(b, e)

    def pairing(self, a: int, b: int, kind: str = "absolute") -> int:
        if kind == "absolute":
            return self.abs_trace(self.mul(a, b))
        if kind == "q":
            return self.tr(self.mul(a, b))
        raise ValueError(f"unknown pairing {kind!r}")

    def perp(self, w: Subspace, pairing: str = "absolute") -> Subspace:
        """Annihilator of ``w`` under the trace form (absolute or over F_q)."""
        width = 1 if pairing == "absolute" else self.mn
        cols = []
        for i in range(self.mn):
            v = 0
            for k, beta in enumerate(w.basis):
                v |= self.pairing(beta, 1 << i, pairing) << (k * width)
            cols.append(v)
        return Subspace.spanned_by(gf2.kernel(cols))

    def artin_schreier_cols(self, j: int) -> list[int]:
        """Columns of x -> x^(q^j) + x."""
        return [c ^ (1 << i) for i, c in enumerate(self.frobenius_cols(self.m * j))]

    def artin_schreier_solve(self, b: int, j: int) -> Optional[int]:
        """Some beta with beta^(q^j) + beta = b, or None."""
        return gf2.solve(self.artin_schreier_cols(j), b)

    def root_q_plus_1(self, a: int) -> Optional[int]:
        """A (q+1)-th root of ``a``; unique when n is odd, None if there is none."""
        if not a:
            raise ValueError("A must be nonzero")
        if self.n % 2:
            return self.pow(a, pow(self.q + 1, -1, self.order))
        self.require_tables()
        la = self.log[a]
        if la % (self.q + 1):
            return None
        return self.exp[la // (self.q + 1)]

    def is_q_plus_1_power(self, a: int) -> bool:
        """Whether a is a nonzero (q+1)-th power: a^((q^n-1)/(q+1)) = 1 for even n, always for odd n."""
        if not a:
            return False
        if self.n % 2:
            return True
        return self.pow(a, self.order // (self.q + 1)) == 1

    def trace_preimage(self, v: int) -> int:
        """Smallest element x (integer order) with Tr(x) = v, v in F_q."""
        x0 = gf2.solve(self._trace_cols[1], v)
        if x0 is None:
            raise ValueError(f"{v:#x} is not in F_q")
        return self.ker_tr.reduce(x0)

    # whole-field vectorised helpers (need tables)

    def mul_scalar_array(self, a: int, arr: np.ndarray) -> np.ndarray:
        if not a:
            return np.zeros_like(arr)
        out = self.exp_np[self.log_np[arr] + self.log[a]]
        out[arr == 0] = 0
        return out

    def mul_arrays(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        out = self.exp_np[self.log_np[x] + self.log_np[y]]
        out[(x == 0) | (y == 0)] = 0
        return out

    def frobenius_array(self, arr: np.ndarray, k: int) -> np.ndarray:
        k %= self.mn
        if not k:
            return arr.copy()
        out = self.exp_np[(self.log_np[arr] << k) % self.order]
        out[arr == 0] = 0
        return out

    def chi_array(self, arr: np.ndarray) -> np.ndarray:
        return self.chi_table[arr]

    def linear_table(self, cols: Sequence[int]) -> np.ndarray:
        """Images of every field element (indexed by element) under a linear map."""
        self.require_tables()
        t = np.zeros(1 << len(cols), dtype=np.int64)
        for i, c in enumerate(cols):
            t[1 << i: 2 << i] = t[: 1 << i] ^ c
        return t

    # encodings

    def fmt(self, x: int) -> str:
        return f"{x:#x}"

    def parse_elt(self, text) -> int:
        x = int(text, 16) if isinstance(text, str) else int(text)
        if not 0 <= x < self.size:
            raise ValueError(f"{text!r} is not an element of F_2^{self.mn}")
        return x

    def __repr__(self) -> str:
        return f"FieldCtx({self.spec})"

    @property
    def subfield_lattice(self) -> list[int]:
        """Degrees k (over F_q) of the intermediate fields F_{q^k}."""
        return [k for k in range(1, self.n + 1) if self.n % k == 0]


def make_field(spec, cap: int = DEFAULT_CAP) -> FieldCtx:
    """Build a field context from a FieldSpec or a ``m=..,n=..`` string."""
    if isinstance(spec, str):
        spec = FieldSpec.parse(spec)
    return FieldCtx(spec, cap)

