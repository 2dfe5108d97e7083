import pytest

from conftest import get_field
from tracepp import charsum
from tracepp import linmap as lm


@pytest.mark.parametrize("spec", ["m=1,n=1", "m=1,n=3", "m=2,n=3", "m=1,n=2", "m=1,n=4", "m=2,n=2", "m=1,n=6"])
def test_closed_equals_direct_everywhere(spec):
    F = get_field(spec)
    for a in range(F.size):
        for b in range(F.size):
            value, branch = charsum.weil_closed(F, a, b)
            assert value == charsum.weil_direct(F, a, b), (a, b, branch)


def test_s11_squares_to_q_power():
    for spec in ["m=1,n=3", "m=2,n=3", "m=1,n=5", "m=3,n=3"]:
        F = get_field(spec)
        assert F.S11 ** 2 == F.q ** (F.n + 1)


def test_branch_labels():
    F = get_field("m=1,n=4")
    assert charsum.even_branch(F, 0) == charsum.BRANCH_TRIVIAL
    assert charsum.even_branch(F, 1) == charsum.BRANCH_EVEN_FQ
    labels = {charsum.even_branch(F, a) for a in range(1, F.size)}
    assert labels == {charsum.BRANCH_EVEN_FQ, charsum.BRANCH_EVEN_NONRESIDUE, charsum.BRANCH_FALLBACK}
    assert charsum.weil_closed(get_field("m=1,n=3"), 3, 1)[1] == charsum.BRANCH_ODD


def test_parity_and_argument_errors():
    with pytest.raises(ValueError):
        charsum.weil_odd(get_field("m=1,n=2"), 1, 0)
    with pytest.raises(ValueError):
        charsum.weil_even(get_field("m=1,n=3"), 1, 0)
    with pytest.raises(ValueError):
        charsum.weil_odd(get_field("m=1,n=3"), 0, 1)
    with pytest.raises(ValueError):
        charsum.root_count(get_field("m=1,n=3"), 1, lm.identity(get_field("m=1,n=3")), "fourier")


def test_root_count_methods_agree():
    F = get_field("m=2,n=2")
    for A in (1, 2, 7):
        for L in (lm.zero(F), lm.identity(F), lm.binomial(F, 3, 1, 5, 2)):
            direct = charsum.root_count(F, A, L, "direct")
            assert direct == charsum.root_count(F, A, L, "charsum")
            brute = sum(F.tr(F.mul(A, F.pow(x, F.q + 1))) ^ lm.evaluate(F, L, x) == 0 for x in range(F.size))
            assert direct == brute
