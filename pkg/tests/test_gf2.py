from hypothesis import given, strategies as st

from tracepp import gf2

cols_st = st.integers(1, 8).flatmap(lambda n: st.lists(st.integers(0, (1 << n) - 1), min_size=n, max_size=n))


def brute_span(vectors):
    out = {0}
    for v in vectors:
        out |= {x ^ v for x in out}
    return out


@given(st.lists(st.integers(0, 255), max_size=10))
def test_echelon_is_canonical_basis_of_span(vectors):
    basis = gf2.echelon(vectors)
    assert brute_span(basis) == brute_span(vectors)
    assert len(brute_span(basis)) == 1 << len(basis)
    assert gf2.echelon(reversed(vectors)) == basis
    leads = [b.bit_length() - 1 for b in basis]
    assert leads == sorted(leads, reverse=True)
    for b in basis:
        for lead in leads:
            if lead != b.bit_length() - 1:
                assert not (b >> lead) & 1


@given(cols_st)
def test_kernel_rank_nullity(cols):
    ker = gf2.kernel(cols)
    assert all(gf2.apply(cols, v) == 0 for v in ker)
    assert len(ker) + gf2.rank(cols) == len(cols)
    brute = {x for x in range(1 << len(cols)) if gf2.apply(cols, x) == 0}
    assert brute_span(ker) == brute


@given(cols_st, st.integers(0, 255))
def test_solve_finds_preimage_iff_in_image(cols, x):
    target = gf2.apply(cols, x % (1 << len(cols)))
    y = gf2.solve(cols, target)
    assert y is not None and gf2.apply(cols, y) == target
    span = brute_span(cols)
    outside = next((t for t in range(1 << max(c.bit_length() for c in cols + [1])) if t not in span), None)
    if outside is not None:
        assert gf2.solve(cols, outside) is None


@given(cols_st)
def test_inverse(cols):
    inv = gf2.inverse(cols)
    n = len(cols)
    if gf2.rank(cols) < n:
        assert inv is None
    else:
        assert gf2.compose(cols, inv) == [1 << i for i in range(n)]
        assert gf2.compose(inv, cols) == [1 << i for i in range(n)]


def test_span_indexing_and_parity():
    basis = [0b001, 0b110]
    assert gf2.span(basis) == [0, 0b001, 0b110, 0b111]
    assert gf2.parity(0b1011) == 1 and gf2.parity(0) == 0
    assert gf2.reduce(0b111, gf2.echelon(basis)) == 0
