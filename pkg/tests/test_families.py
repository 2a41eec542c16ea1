import pytest

from rrgparity.families import (
    FAMILIES,
    FamilyError,
    FamilySpec,
    OverPartition,
    admits,
    count,
    count_by_parts,
    enumerate_overpartitions,
    enumerate_partitions,
    family_series,
    family_series_xq,
    refined_count,
)
from rrgparity.identities import get_case
from rrgparity.series import Pochhammer, ProductSpec, coeff_xq, expand_product

O = OverPartition.from_parts


def test_small_enumerations():
    assert list(enumerate_overpartitions(0)) == [OverPartition()]
    items = list(enumerate_overpartitions(3))
    assert len(items) == 8 == len(set(items))
    assert sorted(map(str, items)) == sorted(
        ["(3)", "(3̄)", "(2,1)", "(2̄,1)", "(2,1̄)", "(2̄,1̄)", "(1,1,1)", "(1̄,1,1)"]
    )
    assert sorted(enumerate_partitions(4)) == sorted([(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)])


def test_enumeration_totals_match_product():
    prod = expand_product(ProductSpec((Pochhammer(1, 1, sign=-1), Pochhammer(1, 1, inverse=True))), 14)
    assert [sum(1 for _ in enumerate_overpartitions(n)) for n in range(15)] == list(prod.coeffs)


def test_clauses():
    assert not admits(FamilySpec("U", 2, 2), O([1], [1]))
    assert admits(FamilySpec("Bbar", 2, i=1), O([2], [2]))
    assert not admits(FamilySpec("Bbar", 2, i=1), O([1]))
    for fam in FAMILIES:
        if fam in ("Abar", "Bbar"):
            spec = FamilySpec(fam, 2, i=1)
        elif fam == "Urefined":
            spec = FamilySpec(fam, 2, 2, 1)
        else:
            spec = FamilySpec(fam, 2, 2)
        assert admits(spec, OverPartition())


def test_hand_counts():
    assert count(FamilySpec("B", 2, 2), 4) == 2 == count(FamilySpec("A", 2, 2), 4)
    assert count(FamilySpec("Abar", 2, i=1), 2) == 2 == count(FamilySpec("Bbar", 2, i=1), 2)
    assert count(FamilySpec("U", 2, 2), 1) == 1
    assert coeff_xq(family_series_xq(FamilySpec("U", 4, 2), 3), 1, 1) == 1


def test_partition_families_reject_overlines():
    assert not admits(FamilySpec("B", 3, 2), O([2], [2]))


@pytest.mark.parametrize(
    "spec",
    [FamilySpec("U", 4, 2), FamilySpec("Ubar", 5, 3), FamilySpec("Bbar", 3, i=2), FamilySpec("W", 3, 1),
     FamilySpec("Wbar", 3, 2), FamilySpec("G", 4, 2), FamilySpec("Urefined", 4, 4, 2), FamilySpec("U", 3, 0),
     FamilySpec("U", 3, 4)],
)
def test_transfer_matches_enumeration(spec):
    f = family_series_xq(spec, 12)
    for n in range(13):
        assert f.at_x_one().coeffs[n] == count(spec, n)
        for m in range(n + 1):
            assert coeff_xq(f, m, n) == count_by_parts(spec, m, n)
        assert f.x_degree(n) <= n


def test_refined_counts_partition_u():
    for k, a in [(4, 2), (4, 4), (5, 3)]:
        for n in range(11):
            assert sum(refined_count(k, a, i, n) for i in range(1, a + 1)) == count(FamilySpec("U", k, a), n)
    assert refined_count(3, 2, 1, 0) == 1


def test_refined_series_matches_kernel_difference():
    case = get_case("thm-4.1:U22a")
    top, kernel = (s.build({"k": 2, "a": 1}, 20) for s in case.sides)
    assert family_series(FamilySpec("Urefined", 4, 2, 2), 20) == kernel.at_x_one() == top.at_x_one()


def test_monotone_in_a():
    for n in range(12):
        assert count(FamilySpec("U", 4, 1), n) <= count(FamilySpec("U", 4, 2), n)
        assert count(FamilySpec("Bbar", 3, i=1), n) <= count(FamilySpec("Bbar", 3, i=2), n)


def test_family_series_base():
    assert family_series(FamilySpec("U", 4, 2), 0).coeffs == (1,)


def test_validation():
    with pytest.raises(FamilyError, match="valid ids"):
        FamilySpec("Z", 2, 1)
    with pytest.raises(FamilyError):
        FamilySpec("G", 3, 2)
    with pytest.raises(FamilyError):
        FamilySpec("Bbar", 2, 1)
    with pytest.raises(FamilyError):
        count(FamilySpec("U", 2, 2), 10**6)


def test_overpartition_json_and_weight():
    lam = O([3, 3, 1], [3])
    assert lam.weight == 7 and lam.num_parts == 3
    assert lam.to_json() == {"parts": [3, 3, 1], "overlined": [3]}
    assert str(lam) == "(3̄,3,1)"
