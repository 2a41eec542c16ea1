import pytest

from rrgparity.identities import (
    DomainError,
    get_case,
    perturb,
    registry,
    run_case,
    select,
    verify,
    verify_functional,
    verify_grid,
)


def test_registry_shape():
    cases = registry()
    assert len(cases) >= 24
    assert {c.variables for c in cases} == {"q", "xq"}
    assert all(len(c.sides) >= 2 for c in cases)
    c34 = get_case("thm-3.4")
    assert c34.variables == "q" and c34.lhs.label == "U enumeration" and c34.rhs.product is not None
    assert get_case("thm-3.1").variables == "xq"


@pytest.mark.parametrize(
    "cid,params,N",
    [("thm-1.11", {"k": 2, "a": 2}, 30), ("thm-1.10", {"k": 3, "i": 2}, 25), ("lemma-2.3", {"K": 6, "I": 4}, 24),
     ("thm-5.2", {"k": 2, "a": 1}, 20), ("thm-3.3", {"k": 2, "a": 2}, 16), ("thm-3.4", {"k": 2, "a": 2}, 30)],
)
def test_examples_pass(cid, params, N):
    assert verify(get_case(cid), params, N).passed


def test_every_case_passes_at_order_zero():
    for case in registry():
        p = case.grid(3)[0]
        assert verify(case, p, 0).passed, case.id


def test_domain_errors_name_hypothesis():
    with pytest.raises(DomainError, match="k ≡ a"):
        verify(get_case("thm-1.11"), {"k": 2, "a": 1}, 10)
    with pytest.raises(DomainError, match="k odd and a even"):
        verify(get_case("thm-1.5"), {"k": 4, "a": 2}, 10)
    with pytest.raises(DomainError, match="missing"):
        verify(get_case("thm-1.1"), {"k": 2}, 10)


def test_functional_requires_two_variables():
    with pytest.raises(DomainError):
        verify_functional(get_case("thm-3.4"), {"k": 1, "a": 1}, 10, 5)
    assert verify_functional(get_case("thm-3.1"), {"k": 2, "a": 1}, 14, 6).passed


def test_selection():
    sec6 = select(["thm-6.*"])
    assert sec6 and all(c.theorem.startswith("thm-6.") for c in sec6)
    assert select(["nothing-here"]) == []
    assert verify_grid(["nothing-here"]) == []
    # misprinted forms only by exact id or on request
    assert [c.id for c in select(["thm-1.8"])] == ["thm-1.8"]
    assert "thm-1.8/as-printed" in [c.id for c in select(["thm-1.8"], include_as_printed=True)]
    assert [c.id for c in select(["thm-1.8/as-printed"])] == ["thm-1.8/as-printed"]


def test_grid_is_deterministic_and_parallel_safe():
    a = verify_grid(["thm-1.*"], k_max=3, N=12)
    b = verify_grid(["thm-1.*"], k_max=3, N=12, jobs=4)
    assert [r.to_json() for r in a] == [r.to_json() for r in b]
    assert [r.sort_key() for r in a] == sorted(r.sort_key() for r in a)


def test_as_printed_forms_are_refuted():
    r = verify(get_case("thm-1.8/as-printed"), {"k": 2, "a": 1}, 20)
    assert not r.passed and r.witness["n"] == 5
    r = verify(get_case("thm-1.2/as-printed"), {"k": 2, "a": 1}, 10)
    assert not r.passed and r.witness["n"] == 1


def test_odd_modulus_closed_form_counterexample():
    # U_{3,1}(5): (3,1̄,1) is admissible but the product gives one item fewer
    r = verify(get_case("thm-1.11"), {"k": 3, "a": 1}, 10)
    assert r.verdict == "fail"
    assert (r.witness["n"], r.witness["left"], r.witness["right"]) == (5, "2", "1")


def test_negative_control():
    bad = perturb(get_case("thm-3.4"))
    r = verify(bad, {"k": 2, "a": 1}, 20)
    assert not r.passed and r.witness["n"] <= 6
    assert verify(get_case("thm-3.4"), {"k": 2, "a": 1}, 20).passed


def test_errors_are_collected():
    r = run_case(get_case("thm-1.11"), {"k": 2, "a": 1}, 5)
    assert r.verdict == "error" and "k ≡ a" in r.error


def test_report_json():
    r = verify(get_case("thm-4.4:xq"), {"k": 1, "a": 1}, 8)
    d = r.to_json()
    assert d["verdict"] == "fail" and {"m", "n", "left", "right", "left_side", "right_side"} <= set(d["witness"])
