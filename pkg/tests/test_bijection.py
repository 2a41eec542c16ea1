import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rrgparity.bijection import BijectionError, SplitPair, check_bijection, count_pairs, forward, inverse
from rrgparity.families import FamilySpec, OverPartition, count, iter_admissible

O = OverPartition.from_parts


def test_examples():
    assert forward(O([1]), 2, 1) == SplitPair((1,), OverPartition())
    assert forward(O([2, 2]), 2, 1) == SplitPair((), O([2]))
    assert forward(OverPartition(), 2, 1) == SplitPair((), OverPartition())
    assert inverse(SplitPair((1,), OverPartition()), 2, 1) == O([1])
    assert inverse(SplitPair((), O([2])), 2, 1) == O([2, 2])
    assert inverse(SplitPair((), OverPartition()), 2, 1) == OverPartition()


def test_overline_transport():
    lam = O([3, 3, 3, 1], [3])
    p = forward(lam, 3, 2)
    assert p.gamma == (3, 1) and p.beta_prime == O([3], [3])
    assert inverse(p, 3, 2) == lam


def test_domain_errors():
    with pytest.raises(BijectionError):
        forward(O([2]), 2, 1)  # even size with odd frequency is not in U
    with pytest.raises(BijectionError):
        inverse(SplitPair((2,), OverPartition()), 2, 1)
    with pytest.raises(BijectionError):
        inverse(SplitPair((3, 3), OverPartition()), 2, 1)
    with pytest.raises(BijectionError):
        forward(OverPartition(), 1, 2)


@pytest.mark.parametrize("variant", ["U", "Ubar"])
@pytest.mark.parametrize("k,a", [(2, 1), (2, 2), (1, 1)])
def test_check_passes(k, a, variant):
    rep = check_bijection(k, a, 12, variant)
    assert rep.passed, rep.witnesses[:3]
    assert [r["n"] for r in rep.rows] == list(range(13))


def test_n_max_zero():
    rep = check_bijection(2, 1, 0)
    assert rep.passed and rep.rows == [{"n": 0, "source": 1, "pairs": 1, "ok": True}]


def test_count_pairs():
    for n in range(12):
        assert count_pairs(2, 1, n) == count(FamilySpec("U", 4, 2), n)
        assert count_pairs(2, 2, n, "Ubar") == count(FamilySpec("Ubar", 4, 4), n)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda k: st.tuples(st.just(k), st.integers(1, k))), st.integers(0, 14),
       st.integers(0, 10**6), st.sampled_from(["U", "Ubar"]))
def test_round_trip_property(ka, n, pick, variant):
    k, a = ka
    items = list(iter_admissible(FamilySpec(variant, 2 * k, 2 * a), n))
    if not items:
        return
    lam = items[pick % len(items)]
    p = forward(lam, k, a, variant)
    assert p.weight == n
    assert inverse(p, k, a, variant) == lam
