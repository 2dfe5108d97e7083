"""Dense GF(2) linear algebra on int bitsets.

A linear map F_2^n -> F_2^k is given by its columns: ``cols[i]`` is the
image of the i-th unit vector, packed as an int.
"""

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence


def apply(cols: Sequence[int], x: int) -> int:
    """Multiply the column matrix by the bit vector ``x``."""
    r = 0
    i = 0
    while x:
        if x & 1:
            r ^= cols[i]
        x >>= 1
        i += 1
    return r


def parity(x: int) -> int:
    return x.bit_count() & 1


def echelon(vectors: Iterable[int]) -> List[int]:
    """Fully reduced row echelon basis, sorted by leading bit (descending).

    The result is canonical for the span, so two spans are equal iff their
    echelon bases are equal.
    """
    pivots: dict[int, int] = {}
    for v in vectors:
        while v:
            lb = v.bit_length() - 1
            p = pivots.get(lb)
            if p is None:
                pivots[lb] = v
                break
            v ^= p
    # back-substitute so every pivot bit appears in exactly one vector;
    # lower pivots are already reduced when used
    order = sorted(pivots)
    for idx, lb in enumerate(order):
        v = pivots[lb]
        for lower in order[:idx]:
            if (v >> lower) & 1:
                v ^= pivots[lower]
        pivots[lb] = v
    return [pivots[lb] for lb in reversed(order)]


def reduce(v: int, basis: Sequence[int]) -> int:
    """Reduce ``v`` modulo an echelon basis (as returned by :func:`echelon`)."""
    for b in basis:
        if (v >> (b.bit_length() - 1)) & 1:
            v ^= b
    return v


def rank(cols: Iterable[int]) -> int:
    return len(echelon(cols))


class _Eliminator:
    """Incremental elimination that remembers which inputs built each pivot."""

    def __init__(self, cols: Sequence[int]):
        self.pivots: dict[int, tuple[int, int]] = {}
        self.kernel: List[int] = []
        for i, v in enumerate(cols):
            c = 1 << i
            while v:
                lb = v.bit_length() - 1
                p = self.pivots.get(lb)
                if p is None:
                    self.pivots[lb] = (v, c)
                    break
                v ^= p[0]
                c ^= p[1]
            if not v:
                self.kernel.append(c)

    def solve(self, target: int) -> Optional[int]:
        c = 0
        while target:
            p = self.pivots.get(target.bit_length() - 1)
            if p is None:
                return None
            target ^= p[0]
            c ^= p[1]
        return c


def kernel(cols: Sequence[int]) -> List[int]:
    """Basis (echelon form) of the null space of the column matrix."""
    return echelon(_Eliminator(cols).kernel)


def image(cols: Sequence[int]) -> List[int]:
    return echelon(cols)


def solve(cols: Sequence[int], target: int) -> Optional[int]:
    """Some ``x`` with ``apply(cols, x) == target``, or None."""
    return _Eliminator(cols).solve(target)


def inverse(cols: Sequence[int]) -> Optional[List[int]]:
    """Columns of the inverse of a square matrix, or None if singular."""
    n = len(cols)
    elim = _Eliminator(cols)
    if elim.kernel or len(elim.pivots) != n:
        return None
    out = []
    for j in range(n):
        x = elim.solve(1 << j)
        if x is None:
            return None
        out.append(x)
    return out


def compose(outer: Sequence[int], inner: Sequence[int]) -> List[int]:
    """Columns of ``outer . inner``."""
    return [apply(outer, c) for c in inner]


def span(basis: Sequence[int]) -> List[int]:
    """All 2^len(basis) vectors of the span; bit i of the index selects basis[i]."""
    out = [0]
    for b in basis:
        out += [v ^ b for v in out]
    return out
