import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rrgparity.series import (
    PrecisionError,
    Pochhammer,
    ProductSpec,
    SeriesError,
    SeriesQ,
    SeriesXQ,
    coeff,
    coeff_xq,
    expand_product,
    invert,
    mul,
    pochhammer,
    scale_substitute,
    triple,
)

N = 8
coeffs = st.lists(st.integers(-50, 50), min_size=N + 1, max_size=N + 1)
series = coeffs.map(SeriesQ)
units = st.tuples(st.sampled_from([1, -1]), st.lists(st.integers(-9, 9), min_size=N, max_size=N)).map(
    lambda t: SeriesQ([t[0]] + t[1])
)


def test_difference_of_squares():
    assert mul(SeriesQ([1, 1], 5), SeriesQ([1, -1], 5)) == SeriesQ([1, 0, -1], 5)


def test_geometric_times_one_minus_q():
    assert SeriesQ([1] * 9) * SeriesQ([1, -1], 8) == SeriesQ.one(8)


def test_invert_examples():
    assert invert(SeriesQ([1, -1], 4)) == SeriesQ([1] * 5)
    assert invert(SeriesQ.one(3)) == SeriesQ.one(3)
    euler = expand_product(pochhammer(1, 1), 12)
    assert invert(euler).coeffs == (1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77)


def test_invert_needs_unit():
    with pytest.raises(SeriesError):
        invert(SeriesQ([2, 1]))


def test_mismatched_orders():
    with pytest.raises(SeriesError):
        SeriesQ([1], 3) + SeriesQ([1], 4)


def test_coeff():
    assert coeff(SeriesQ([1, 0, 3]), 2) == 3
    with pytest.raises(SeriesError):
        coeff(SeriesQ([1, 0, 3]), 3)


def test_pentagonal():
    f = expand_product(pochhammer(1, 1), 12)
    expect = {0: 1, 1: -1, 2: -1, 5: 1, 7: 1, 12: -1}
    assert f.coeffs == tuple(expect.get(n, 0) for n in range(13))


def test_overpartition_product():
    f = expand_product(ProductSpec((Pochhammer(1, 1, sign=-1), Pochhammer(1, 1, inverse=True))), 4)
    assert f.coeffs == (1, 2, 4, 8, 14)


def test_empty_product_and_euler():
    assert expand_product(ProductSpec(()), 5) == SeriesQ.one(5)
    distinct = expand_product(pochhammer(1, 1, sign=-1), 30)
    odd = expand_product(pochhammer(1, 2, inverse=True), 30)
    assert distinct == odd


def test_triple_product_jacobi():
    # (q, q^2, q^3; q^3) is the pentagonal series too
    assert expand_product(triple(1, 3), 20) == expand_product(pochhammer(1, 1), 20)


def test_finite_pochhammer():
    # (q;q)_2 = (1-q)(1-q^2)
    assert expand_product(pochhammer(1, 1, length=2), 5).coeffs == (1, -1, -1, 1, 0, 0)


def test_x_product_and_substitution():
    f = SeriesXQ.monomial(1, 1, 6)
    assert scale_substitute(f, e=2) == SeriesXQ.monomial(1, 3, 6)
    one = SeriesXQ.one(6)
    assert scale_substitute(one, e=3) == one
    diag = SeriesXQ.from_dict({(m, m): 1 for m in range(7)}, 6)
    g = scale_substitute(diag, m=2, N=6)
    assert g == SeriesXQ.from_dict({(m, 2 * m): 1 for m in range(4)}, 6)


def test_substitution_precision():
    with pytest.raises(PrecisionError):
        scale_substitute(SeriesXQ.one(3), m=2, N=8)


def test_coeff_xq_and_at_x_one():
    f = expand_product(pochhammer(1, 1, sign=-1, x_power=1), 6)
    # (-xq;q)_oo: x^2 q^3 from 1+2
    assert coeff_xq(f, 2, 3) == 1
    assert f.at_x_one() == expand_product(pochhammer(1, 1, sign=-1), 6)


def test_json_round_trip():
    f = expand_product(pochhammer(1, 1, sign=-1, x_power=1), 6)
    assert SeriesXQ.from_json(f.to_json()) == f
    g = SeriesQ([3, -10**30, 7])
    assert SeriesQ.from_json(g.to_json()) == g


@given(series, series, series)
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == SeriesQ.zero(N)
    assert f * SeriesQ.one(N) == f


@given(units)
def test_invert_round_trip(f):
    assert mul(f, invert(f)) == SeriesQ.one(N)
    assert invert(invert(f)) == f


@settings(max_examples=40)
@given(st.integers(1, 4), st.integers(1, 3), st.integers(0, 6))
def test_finite_times_tail_is_infinite(c, d, n):
    # (a;q)_n (a q^{nd}; q)_oo = (a;q)_oo
    M = 20
    head = expand_product(pochhammer(c, d, length=n), M)
    tail = expand_product(pochhammer(c + n * d, d), M)
    assert head * tail == expand_product(pochhammer(c, d), M)
