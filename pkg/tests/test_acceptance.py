"""Acceptance criteria, one test each.  Every test prints a single PASS/FAIL line."""

import random
import time

import pytest

from rrgparity.bijection import check_bijection
from rrgparity.families import FamilySpec, count, enumerate_overpartitions
from rrgparity.identities import get_case, perturb, verify, verify_grid
from rrgparity.qkernel import MultisumSpec, multisum
from rrgparity.series import Pochhammer, ProductSpec, SeriesQ, expand_product, invert, mul, triple


@pytest.fixture
def line(capsys):
    def emit(num, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {num:>2}] {'PASS' if ok else 'FAIL'}: {detail}")
    return emit


def _summary(reports):
    bad = [r for r in reports if not r.passed]
    text = f"{len(reports) - len(bad)}/{len(reports)} reports pass"
    if bad:
        text += "; first failure " + bad[0].row().split(None, 1)[1]
    return bad, text


def test_criterion_01_rrg_counts(line):
    t0 = time.perf_counter()
    bad = []
    for k in range(2, 5):
        for a in range(1, k + 1):
            for n in range(26):
                ca, cb = count(FamilySpec("A", k, a), n), count(FamilySpec("B", k, a), n)
                if ca != cb:
                    bad.append((k, a, n, ca, cb))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 60
    line(1, ok, f"A_(k,a)(n) = B_(k,a)(n) for 2<=k<=4, n<=25 by enumeration, {dt:.1f}s"
         + (f"; mismatch {bad[0]}" if bad else ""))
    assert ok


def test_criterion_02_andrews_gordon(line):
    bad = []
    for k in range(1, 5):
        for a in range(1, k + 1):
            prod = expand_product(ProductSpec((*triple(a, 2 * k + 1).factors, Pochhammer(1, 1, inverse=True))), 40)
            if multisum(MultisumSpec(k, a), 40) != prod:
                bad.append((k, a))
    line(2, not bad, f"Andrews-Gordon multisum = product for k<=4, all a, N=40" + (f"; fails {bad}" if bad else ""))
    assert not bad


def test_criterion_03_parity_suite(line):
    ids = ["thm-1.2", "thm-1.3", "thm-1.4", "thm-1.5", "thm-1.6", "thm-1.7", "thm-1.8", "thm-1.9"]
    reports = verify_grid(ids, k_max=4, N=25)
    bad, text = _summary(reports)
    printed = verify_grid(["thm-1.2/as-printed", "thm-1.8/as-printed"], k_max=4, N=25)
    refuted = sum(not r.passed for r in printed)
    line(3, not bad, f"W, Wbar, G vs products and multisums, k<=4, N=25: {text} "
         f"(misprinted forms refuted in {refuted}/{len(printed)} tuples)")
    assert not bad


def test_criterion_04_overpartition_rrg(line):
    bad = []
    for k in range(2, 5):
        for i in range(1, k + 1):
            for n in range(21):
                x, y = count(FamilySpec("Abar", k, i=i), n), count(FamilySpec("Bbar", k, i=i), n)
                if x != y:
                    bad.append((k, i, n, x, y))
    line(4, not bad, "Abar_(k,i)(n) = Bbar_(k,i)(n) for k<=4, n<=20 by enumeration" + (f"; {bad[0]}" if bad else ""))
    assert not bad


def test_criterion_05_u_closed_forms(line):
    ids = ["thm-1.11", "thm-1.12", "thm-1.13", "thm-3.4", "thm-4.2", "thm-4.4", "thm-5.4", "thm-6.4"]
    reports = verify_grid(ids, k_max=4, N=25)
    bad, text = _summary(reports)
    even = [r for r in reports if r.id in ("thm-3.4", "thm-4.2", "thm-5.4")
            or (r.id.startswith("thm-1.1") and r.params["k"] % 2 == 0)]
    text += f"; even-modulus cases {sum(r.passed for r in even)}/{len(even)} pass"
    line(5, not bad, "U and Ubar enumeration vs closed forms, k<=4, N=25: " + text)
    assert not bad


def test_criterion_06_two_variable_forms(line):
    reports = verify_grid(["thm-3.1", "thm-5.3", "thm-6.3"], k_max=3, N=20, x_bound=20)
    bad, text = _summary(reports)
    line(6, not bad, "two-variable closed forms, x-degree<=20, q-order 20, k<=3: " + text)
    assert not bad


def test_criterion_07_kernel_relations(line):
    reports = verify_grid(["lemma-2.1", "lemma-2.2", "lemma-2.3", "thm-2.4"], k_max=4, N=30)
    bad, text = _summary(reports)
    line(7, not bad, "kernel initial values, reflection, shift relation, double recurrence, k<=4, N=30: " + text)
    assert not bad


def test_criterion_08_functional_equations(line):
    ids = ["thm-3.2", "thm-3.3", "thm-4.1", "thm-4.3", "thm-5.2", "thm-6.1", "thm-6.2"]
    reports = verify_grid(ids, k_max=3, N=20, x_bound=20)
    bad, text = _summary(reports)
    line(8, not bad, "functional equations, N=20, x-degree<=20, k<=3: " + text)
    assert not bad


def test_criterion_09_bijection(line):
    grid = [(2, 1), (2, 2), (3, 1), (3, 2), (3, 3)]
    failed = [ka for ka in grid if not check_bijection(*ka, 16).passed]
    series = verify_grid(["thm-7.1:UB", "thm-7.1:UB2"], k_max=3, N=16)
    series = [r for r in series if (r.params["k"], r.params["a"]) in grid]
    bad, text = _summary(series)
    ok = not failed and not bad and len(series) == 2 * len(grid)
    line(9, ok, f"splitting map on {len(grid) - len(failed)}/{len(grid)} (k,a), n<=16; UB and UB2 series: {text}")
    assert ok


def test_criterion_10_negative_control(line):
    case = perturb(get_case("thm-3.4"))
    r = verify(case, {"k": 2, "a": 1}, 25)
    ok = r.verdict == "fail" and r.witness is not None and r.witness["n"] <= 10
    where = f"q^{r.witness['n']}: {r.witness['left']} != {r.witness['right']}" if r.witness else "no witness"
    line(10, ok, f"perturbed triple-product exponent is caught at {where}")
    assert ok


def test_criterion_11_plumbing(line):
    rng = random.Random(20261018)
    N = 12
    ring_ok = True
    for _ in range(200):
        f, g, h = (SeriesQ([rng.randint(-40, 40) for _ in range(N + 1)]) for _ in range(3))
        ring_ok &= (f * g) * h == f * (g * h) and f * (g + h) == f * g + f * h and f * g == g * f
        u = SeriesQ([rng.choice([1, -1])] + [rng.randint(-9, 9) for _ in range(N)])
        ring_ok &= mul(u, invert(u)) == SeriesQ.one(N)
    prod = expand_product(ProductSpec((Pochhammer(1, 1, sign=-1), Pochhammer(1, 1, inverse=True))), 30)
    totals = [sum(1 for _ in enumerate_overpartitions(n)) for n in range(31)]
    tot_ok = totals == list(prod.coeffs)
    ok = ring_ok and tot_ok
    line(11, ok, f"ring axioms and inverses on 200 random draws: {ring_ok}; "
         f"overpartition totals = (-q;q)/(q;q) to n=30: {tot_ok}")
    assert ok
