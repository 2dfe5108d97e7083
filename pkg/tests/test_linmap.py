import json

import pytest
from hypothesis import given, settings, strategies as st

from conftest import get_field
from tracepp import linmap as lm
from tracepp.linmap import LinPoly
from tracepp.xval import adjoint_checks

SPECS = ["m=1,n=2", "m=1,n=3", "m=2,n=2", "m=1,n=4", "m=2,n=3", "m=3,n=3"]


@st.composite
def field_and_polys(draw, count=2):
    F = get_field(draw(st.sampled_from(SPECS)))
    term = st.tuples(st.integers(0, F.mn - 1), st.integers(0, F.size - 1))
    polys = [LinPoly.make(F, draw(st.lists(term, max_size=4))) for _ in range(count)]
    return F, polys


@settings(max_examples=80)
@given(field_and_polys())
def test_adjoint_identities(data):
    F, (L, M) = data
    assert all(adjoint_checks(F, L, M).values())


@settings(max_examples=60)
@given(field_and_polys(), st.data())
def test_evaluation_is_linear_and_compose_matches(data, draw):
    F, (L, M) = data
    x, y = draw.draw(st.integers(0, F.size - 1)), draw.draw(st.integers(0, F.size - 1))
    assert lm.evaluate(F, L, x ^ y) == lm.evaluate(F, L, x) ^ lm.evaluate(F, L, y)
    assert lm.evaluate(F, lm.compose(F, M, L), x) == lm.evaluate(F, M, lm.evaluate(F, L, x))
    assert lm.evaluate(F, L + M, x) == lm.evaluate(F, L, x) ^ lm.evaluate(F, M, x)


@settings(max_examples=60)
@given(field_and_polys(count=1))
def test_interpolation_roundtrip(data):
    F, (L,) = data
    assert lm.from_cols(F, lm.to_matrix(F, L)) == L
    inv = lm.inverse(F, L)
    assert (inv is None) != lm.is_bijective(F, L)
    if inv is not None:
        assert lm.compose(F, inv, L) == lm.identity(F)


@settings(max_examples=60)
@given(field_and_polys(count=1), st.data())
def test_q_components_rebuild_l(data, draw):
    F, (L,) = data
    parts = lm.q_components(F, L)
    dec = lm.q_decompose(F, L)
    x = draw.draw(st.integers(0, F.size - 1))
    total = 0
    for i, part in enumerate(parts):
        assert part.is_q_linear(F.m)
        assert lm.evaluate(F, part, 1) == dec.values[i]
        total ^= lm.evaluate(F, part, F.frobenius(x, i))
    assert total == lm.evaluate(F, L, x)


def test_scale_input_and_constructors():
    F = get_field("m=2,n=3")
    L = lm.binomial(F, 5, 1, 9, 4)
    s = 17
    assert all(lm.evaluate(F, lm.scale_input(F, L, s), x) == lm.evaluate(F, L, F.mul(s, x)) for x in range(F.size))
    T = lm.trace_poly(F)
    assert all(lm.evaluate(F, T, x) == F.tr(x) for x in range(F.size))
    sq = lm.sqrt_poly(F)
    assert all(F.mul(lm.evaluate(F, sq, x), lm.evaluate(F, sq, x)) == x for x in range(F.size))
    assert lm.binomial(F, 3, 2, 3, 8).is_zero()  # 8 = 2 mod 6
    with pytest.raises(ValueError):
        lm.trace_poly(F, 2)


def test_build_ell_and_quotient_action():
    F = get_field("m=2,n=3")
    a = F.elements_of(1)[2]
    dec = lm.q_decompose(F, lm.monomial(F, a, 1))
    ell = lm.build_ell(F, dec, with_sqrt_term=True)
    assert ell.is_permutation and set(ell.as_dict()) == set(F.elements_of(1))
    with pytest.raises(ValueError):
        lm.build_ell(F, lm.q_decompose(F, lm.monomial(F, F.generator, 0)), True)
    act = lm.quotient_action(F, lm.identity(F))
    assert act.automorphism and all(act.induced(v) == v for v in F.elements_of(1))
    assert not lm.quotient_action(F, lm.monomial(F, F.generator, 0)).stable


def test_json_roundtrip_and_malformed():
    F = get_field("m=1,n=4")
    L = lm.binomial(F, 3, 1, 0xA, 3)
    assert lm.from_json(F, json.dumps(lm.to_json(L))) == L
    assert lm.from_json(F, [[5, "0x1"]]) == lm.monomial(F, 1, 1)
    for bad in ['{"j": 1}', '[[1]]', '[["1", "0x1"]]', '[[0, "0x10"]]']:
        with pytest.raises(ValueError):
            lm.from_json(F, bad)
