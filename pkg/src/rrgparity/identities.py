"""Registry of the identities as machine-checkable equalities of truncated series.

Each :class:`IdentityCase` carries two or more sides; ``verify`` builds every
side at the requested order and compares all of them against the first,
coefficient by coefficient.  There is no tolerance: a mismatch produces a
report with the first differing coefficient.

Parameters follow the statement being checked.  For the kernel lemmas the
parameters are doubled indices (K, I) so half-integer k and i are covered.
"""

from __future__ import annotations

import dataclasses
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from . import qkernel
from .families import FamilySpec, family_series, family_series_xq
from .qkernel import MultisumSpec, multisum, qbar_doubled
from .series import (
    Pochhammer,
    ProductSpec,
    SeriesQ,
    SeriesXQ,
    expand_product,
    scale_substitute,
)

__all__ = [
    "DomainError",
    "Side",
    "IdentityCase",
    "VerificationReport",
    "registry",
    "get_case",
    "select",
    "verify",
    "verify_functional",
    "verify_grid",
    "run_case",
    "perturb",
]

Params = Mapping[str, int]
Series = SeriesQ | SeriesXQ


class DomainError(ValueError):
    """Parameters outside the hypotheses of the statement being checked."""


@dataclass(frozen=True)
class Side:
    label: str
    build: Callable[[Params, int], Series]
    product: Callable[[Params], ProductSpec] | None = None


@dataclass(frozen=True)
class IdentityCase:
    id: str
    theorem: str
    title: str
    variables: str  # "q" or "xq"
    params: tuple[str, ...]
    domain: Callable[[Params], str | None]
    sides: tuple[Side, ...]
    as_printed: bool = False
    note: str = ""

    @property
    def lhs(self) -> Side:
        return self.sides[0]

    @property
    def rhs(self) -> Side:
        return self.sides[1]

    def check_params(self, p: Params) -> dict[str, int]:
        missing = [n for n in self.params if n not in p or p[n] is None]
        if missing:
            raise DomainError(f"{self.id}: missing parameter(s) {', '.join(missing)}")
        q = {n: int(p[n]) for n in self.params}
        msg = self.domain(q)
        if msg:
            raise DomainError(f"{self.id}: {msg}")
        return q

    def grid(self, k_max: int) -> list[dict[str, int]]:
        """Every valid parameter tuple with k <= k_max (K <= 2 k_max for doubled indices)."""
        out = []
        if self.params[0] == "K":
            firsts = range(1, 2 * k_max + 1)
        else:
            firsts = range(1, k_max + 1)
        for k in firsts:
            if len(self.params) == 1:
                cands = [{self.params[0]: k}]
            else:
                cands = [{self.params[0]: k, self.params[1]: s} for s in range(-1, k + 2)]
            for p in cands:
                if not self.domain(p):
                    out.append(p)
        return out


@dataclass
class VerificationReport:
    id: str
    params: dict[str, int]
    N: int
    verdict: str  # "pass", "fail" or "error"
    x_bound: int | None = None
    witness: dict | None = None
    error: str | None = None
    as_printed: bool = False

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def sort_key(self):
        return (self.id, tuple(sorted(self.params.items())), self.N)

    def to_json(self) -> dict:
        d = dataclasses.asdict(self)
        return {k: v for k, v in d.items() if v is not None and not (k == "as_printed" and not v)}

    def row(self) -> str:
        ps = ",".join(f"{k}={v}" for k, v in self.params.items())
        tail = ""
        if self.witness:
            w = self.witness
            where = f"x^{w['m']} q^{w['n']}" if "m" in w else f"q^{w['n']}"
            tail = f"  {where}: {w['left']} ({w['left_side']}) != {w['right']} ({w['right_side']})"
        if self.error:
            tail = f"  {self.error}"
        flag = " [as printed]" if self.as_printed else ""
        return f"{self.verdict.upper():5} {self.id}{flag} ({ps}) N={self.N}{tail}"


# -- side builders ----------------------------------------------------------

P = Pochhammer


def _spec(*factors: Pochhammer, shift: int = 0, scalar: int = 1) -> ProductSpec:
    return ProductSpec(tuple(factors), scalar=scalar, q_shift=shift)


def _tri(a: int, M: int) -> tuple[Pochhammer, ...]:
    return (P(a, M), P(M - a, M), P(M, M))


def fam_q(label: str, family: str, f: Callable[[Params], tuple]) -> Side:
    def build(p, N):
        args = f(p)
        return family_series(FamilySpec(family, *args), N)

    return Side(label, build)


def fam_xq(label: str, family: str, f: Callable[[Params], tuple]) -> Side:
    def build(p, N):
        return family_series_xq(FamilySpec(family, *f(p)), N)

    return Side(label, build)


def prod_side(label: str, f: Callable[[Params], ProductSpec | list[ProductSpec]]) -> Side:
    """Side given by a product, or a sum of products."""

    def build(p, N):
        specs = f(p)
        if isinstance(specs, ProductSpec):
            specs = [specs]
        out = expand_product(specs[0], N)
        for s in specs[1:]:
            out = out + expand_product(s, N)
        return out

    def first(p):
        specs = f(p)
        return specs if isinstance(specs, ProductSpec) else specs[0]

    return Side(label, build, first)


def _dq(K: int, I: int, N: int) -> SeriesXQ:
    return qbar_doubled((K, I), N)


def _at(f: SeriesXQ, e: int) -> SeriesXQ:
    """f(x q^e; q)."""
    return scale_substitute(f, e=e)


def _xprod(N: int, *factors: Pochhammer) -> SeriesXQ:
    return expand_product(_spec(*factors), N)


def _minus_xq_step2(c: int, N: int) -> SeriesXQ:
    """(-x q^c; q^2)_oo."""
    return _xprod(N, P(c, 2, sign=-1, x_power=1))


def _one_plus_xq(f: SeriesXQ) -> SeriesXQ:
    return f + f.times_monomial(1, 1)


def _mono(f: SeriesXQ, m: int, e: int) -> SeriesXQ:
    return f.times_monomial(m, e)


def _boundary(f: SeriesXQ) -> SeriesXQ:
    """Terms x^m q^n of f with m = 0 or n = 0."""
    terms = {(m, n): c for m, n, c in f.items() if m == 0 or n == 0}
    return SeriesXQ.from_dict(terms, f.N)


def _bbar_in_q2(k: int, a: int, N: int) -> SeriesQ:
    """sum_n B̄_{k,a}(n) q^{2n} to order N."""
    half = family_series(FamilySpec("Bbar", k, i=a), N // 2)
    return SeriesQ([half.coeffs[n // 2] if n % 2 == 0 else 0 for n in range(N + 1)])


def _printed_andrews_gordon(k: int, a: int, N: int) -> SeriesQ:
    """The Andrews-Gordon multisum with linear term N_{a+1} + ... + N_{k-1}."""
    inv = {}
    total = SeriesQ.zero(N)
    for Ns in qkernel._chains(k - 1, N, None):
        e = sum(v * v for v in Ns) + sum(Ns[j - 1] for j in range(a + 1, k))
        if e > N:
            continue
        term = SeriesQ.monomial(e, N)
        padded = Ns + (0,)
        for j in range(len(Ns)):
            m = padded[j] - padded[j + 1]
            if m not in inv:
                inv[m] = expand_product(_spec(P(1, 1, length=m, inverse=True)), N)
            term = term * inv[m]
        total = total + term
    return total


# -- domains ----------------------------------------------------------------


def _need(cond: bool, msg: str) -> str | None:
    return None if cond else msg


def d_ka(lo: int = 1, kmin: int = 1) -> Callable[[Params], str | None]:
    return lambda p: _need(p["k"] >= kmin and p["k"] >= p["a"] >= lo, f"requires k >= a >= {lo}" + (f", k >= {kmin}" if kmin > 1 else ""))


def d_same_parity(p):
    return _need(p["k"] >= p["a"] >= 1, "requires k >= a >= 1") or _need(
        (p["k"] - p["a"]) % 2 == 0, "requires k ≡ a (mod 2)"
    )


def d_diff_parity(p):
    return _need(p["k"] >= p["a"] >= 1, "requires k >= a >= 1") or _need(
        (p["k"] - p["a"]) % 2 == 1, "requires k ≢ a (mod 2)"
    )


def d_k_odd_a_even(p):
    return _need(p["k"] >= p["a"] >= 1, "requires k >= a >= 1") or _need(
        p["k"] % 2 == 1 and p["a"] % 2 == 0, "requires k odd and a even"
    )


def d_k_even_a_odd(p):
    return _need(p["k"] >= p["a"] >= 1, "requires k >= a >= 1") or _need(
        p["k"] % 2 == 0 and p["a"] % 2 == 1, "requires k even and a odd"
    )


def d_a_even(p):
    return _need(p["k"] >= p["a"] >= 2, "requires k >= a >= 2") or _need(p["a"] % 2 == 0, "requires a even")


def d_ki(p):
    return _need(p["k"] >= 2 and p["k"] >= p["i"] >= 1, "requires k >= 2 and k >= i >= 1")


def d_KI(lo: int, hi_extra: int = 0):
    return lambda p: _need(
        p["K"] >= 1 and lo <= p["I"] <= p["K"] + hi_extra, f"requires {lo} <= I <= K{' + ' + str(hi_extra) if hi_extra else ''}"
    )


def d_K(p):
    return _need(p["K"] >= 1, "requires K >= 1")


def d_k(p):
    return _need(p["k"] >= 1, "requires k >= 1")


# -- the registry -----------------------------------------------------------


def _build_registry() -> list[IdentityCase]:
    cases: list[IdentityCase] = []

    def add(id, theorem, title, variables, params, domain, *sides, as_printed=False, note=""):
        cases.append(IdentityCase(id, theorem, title, variables, params, domain, tuple(sides), as_printed, note))

    ka = ("k", "a")

    # partition and overpartition counts ------------------------------------
    add("thm-1.1", "thm-1.1", "A_{k,a}(n) = B_{k,a}(n)", "q", ka, d_ka(),
        fam_q("A enumeration", "A", lambda p: (p["k"], p["a"])),
        fam_q("B enumeration", "B", lambda p: (p["k"], p["a"])))

    ag_product = lambda p: _spec(*_tri(p["a"], 2 * p["k"] + 1), P(1, 1, inverse=True))  # noqa: E731
    add("thm-1.2", "thm-1.2", "Andrews-Gordon multisum = (q^a,q^{2k+1-a},q^{2k+1};q^{2k+1})/(q)", "q", ka, d_ka(),
        Side("multisum", lambda p, N: multisum(MultisumSpec(p["k"], p["a"]), N)),
        prod_side("product", ag_product),
        fam_q("B enumeration", "B", lambda p: (p["k"], p["a"])),
        note="linear exponent N_a + ... + N_{k-1}")
    add("thm-1.2/as-printed", "thm-1.2", "multisum with linear term N_{a+1}+...+N_{k-1} (as printed)", "q", ka, d_ka(),
        Side("printed multisum", lambda p, N: _printed_andrews_gordon(p["k"], p["a"], N)),
        prod_side("product", ag_product),
        as_printed=True)

    add("thm-1.3", "thm-1.3", "W_{k,a}(n) = G_{k,a}(n)", "q", ka, d_same_parity,
        fam_q("W enumeration", "W", lambda p: (p["k"], p["a"])),
        fam_q("G enumeration", "G", lambda p: (p["k"], p["a"])))

    add("thm-1.4", "thm-1.4", "sum W_{k,a}(n) q^n = multisum = (-q;q^2)(q^a,q^{2k+2-a},q^{2k+2};q^{2k+2})/(q^2;q^2)",
        "q", ka, d_same_parity,
        fam_q("W enumeration", "W", lambda p: (p["k"], p["a"])),
        Side("multisum", lambda p, N: multisum(MultisumSpec(p["k"], p["a"], "W_even_parity"), N)),
        prod_side("product", lambda p: _spec(*_tri(p["a"], 2 * p["k"] + 2), P(1, 2, sign=-1), P(2, 2, inverse=True))))

    wbar_product = lambda p: _spec(  # noqa: E731
        *_tri(p["a"], 2 * p["k"] + 2), P(1, 2, sign=-1, inverse=True), P(1, 1, inverse=True))
    add("thm-1.5", "thm-1.5", "sum Wbar_{k,a}(n) q^n = (q^a,q^{2k+2-a},q^{2k+2};q^{2k+2})/((-q;q^2)(q;q))",
        "q", ka, d_k_odd_a_even,
        fam_q("Wbar enumeration", "Wbar", lambda p: (p["k"], p["a"])),
        prod_side("product", wbar_product))

    add("thm-1.6", "thm-1.6", "Wbar multisum = (-q^2;q^2)(q^a,..;q^{2k+2})/(q^2;q^2) = product of thm-1.5",
        "q", ka, d_k_odd_a_even,
        Side("multisum", lambda p, N: multisum(MultisumSpec(p["k"], p["a"], "Wbar_parity"), N)),
        prod_side("product (-q^2;q^2) form",
                  lambda p: _spec(*_tri(p["a"], 2 * p["k"] + 2), P(2, 2, sign=-1), P(2, 2, inverse=True))),
        prod_side("product (-q;q^2)(q;q) form", wbar_product),
        note="n_j read as N_j - N_{j+1}")

    def w_other(p):
        k, a, M = p["k"], p["a"], 2 * p["k"] + 2
        return [
            _spec(P(3, 2, sign=-1), P(a + 1, M), P(2 * k + 1 - a, M), P(M, M), P(2, 2, inverse=True)),
            _spec(P(3, 2, sign=-1), P(a - 1, M), P(2 * k + 3 - a, M), P(M, M), P(2, 2, inverse=True), shift=1),
        ]

    add("thm-1.7", "thm-1.7", "sum W_{k,a}(n) q^n for k ≢ a (mod 2)", "q", ka, d_diff_parity,
        fam_q("W enumeration", "W", lambda p: (p["k"], p["a"])),
        prod_side("product sum", w_other))

    def wbar_even_odd(M_of):
        return lambda p: _spec(P(2, 2, sign=-1), P(p["a"] + 1, M_of(p)), P(2 * p["k"] + 1 - p["a"], M_of(p)),
                               P(M_of(p), M_of(p)), P(2, 2, inverse=True))

    add("thm-1.8", "thm-1.8", "sum Wbar_{k,a}(n) q^n = (-q^2;q^2)(q^{a+1},q^{2k+1-a},q^{2k+2};q^{2k+2})/(q^2;q^2)",
        "q", ka, d_k_even_a_odd,
        fam_q("Wbar enumeration", "Wbar", lambda p: (p["k"], p["a"])),
        prod_side("product (modulus 2k+2)", wbar_even_odd(lambda p: 2 * p["k"] + 2)),
        note="modulus 2k+2; the modulus 2k+1 form is thm-1.8/as-printed")
    add("thm-1.8/as-printed", "thm-1.8", "Wbar product with modulus 2k+1 (as printed)", "q", ka, d_k_even_a_odd,
        fam_q("Wbar enumeration", "Wbar", lambda p: (p["k"], p["a"])),
        prod_side("product (modulus 2k+1)", wbar_even_odd(lambda p: 2 * p["k"] + 1)),
        as_printed=True)

    add("thm-1.9", "thm-1.9", "Wbar_{k,a}(n) = Wbar_{k,a-1}(n), a even", "q", ka, d_a_even,
        fam_q("Wbar_{k,a}", "Wbar", lambda p: (p["k"], p["a"])),
        fam_q("Wbar_{k,a-1}", "Wbar", lambda p: (p["k"], p["a"] - 1)))

    add("thm-1.10", "thm-1.10", "Abar_{k,i}(n) = Bbar_{k,i}(n)", "q", ("k", "i"), d_ki,
        fam_q("Abar enumeration", "Abar", lambda p: (p["k"], None, p["i"])),
        fam_q("Bbar enumeration", "Bbar", lambda p: (p["k"], None, p["i"])),
        prod_side("product", lambda p: _spec(P(1, 1, sign=-1), *_tri(p["i"], 2 * p["k"]), P(1, 1, inverse=True))))

    add("thm-1.11", "thm-1.11", "sum U_{k,a}(n) q^n = (-q;q)(q^a,q^{2k-a},q^{2k};q^{2k})/(q^2;q^2), k ≡ a",
        "q", ka, d_same_parity,
        fam_q("U enumeration", "U", lambda p: (p["k"], p["a"])),
        prod_side("product", lambda p: _spec(P(1, 1, sign=-1), *_tri(p["a"], 2 * p["k"]), P(2, 2, inverse=True))))

    def u_other(p):
        k, a, M = p["k"], p["a"], 2 * p["k"]
        return [
            _spec(P(2, 1, sign=-1), P(a + 1, M), P(2 * k - a - 1, M), P(M, M), P(2, 2, inverse=True)),
            _spec(P(2, 1, sign=-1), P(a - 1, M), P(2 * k - a + 1, M), P(M, M), P(2, 2, inverse=True), shift=1),
        ]

    add("thm-1.12", "thm-1.12", "sum U_{k,a}(n) q^n for k ≢ a (mod 2), stray x set to 1", "q", ka, d_diff_parity,
        fam_q("U enumeration", "U", lambda p: (p["k"], p["a"])),
        prod_side("product sum", u_other))

    ubar_product = lambda p: _spec(  # noqa: E731
        P(2, 2, sign=-1), P(2, 2, sign=-1), *_tri(p["a"], 2 * p["k"]), P(2, 2, inverse=True))
    add("thm-1.13", "thm-1.13", "Ubar_{k,a} = Ubar_{k,a-1} = (-q^2;q^2)^2(q^a,q^{2k-a},q^{2k};q^{2k})/(q^2;q^2), a even",
        "q", ka, d_a_even,
        fam_q("Ubar_{k,a}", "Ubar", lambda p: (p["k"], p["a"])),
        fam_q("Ubar_{k,a-1}", "Ubar", lambda p: (p["k"], p["a"] - 1)),
        prod_side("product", ubar_product))

    # kernel relations -------------------------------------------------------
    KI = ("K", "I")
    add("lemma-2.1", "lemma-2.1", "initial values: boundary terms of DQ_{K,I} are 1 (I >= 1) or 0 (I = 0)",
        "xq", KI, d_KI(0),
        Side("boundary of DQ", lambda p, N: _boundary(_dq(p["K"], p["I"], N))),
        Side("1 or 0", lambda p, N: SeriesXQ.one(N) if p["I"] else SeriesXQ.zero(N)))
    add("lemma-2.2", "lemma-2.2", "(xq) DQ_{K,-1} = -DQ_{K,1}", "xq", ("K",), d_K,
        Side("(xq) DQ_{K,-1}", lambda p, N: qkernel.reflect_minus(p["K"], N)[0]),
        Side("-DQ_{K,1}", lambda p, N: qkernel.reflect_minus(p["K"], N)[1]))
    add("lemma-2.3", "lemma-2.3", "DQ_{K,I} - DQ_{K,I-2} = (xq)^I DQ_{K,K-I}(xq) + (xq)^{I-2} DQ_{K,K-I+2}(xq)",
        "xq", KI, d_KI(1),
        Side("difference", lambda p, N: qkernel.shift_relation_sides((p["K"], p["I"]), N)[0]),
        Side("shifted kernels", lambda p, N: qkernel.shift_relation_sides((p["K"], p["I"]), N)[1]),
        note="I = 1 is checked in the form multiplied by xq")
    add("thm-2.4", "thm-2.4", "double recurrence for DQ_{2k,2a} in terms of DQ_{2k,2k-2h}(xq^2)", "xq", ka, d_ka(0),
        Side("DQ_{2k,2a}", lambda p, N: qkernel.double_recurrence_sides(p["k"], p["a"], N)[0]),
        Side("double sum", lambda p, N: qkernel.double_recurrence_sides(p["k"], p["a"], N)[1]))

    # U_{2k,2a} ---------------------------------------------------------------
    add("thm-3.1", "thm-3.1", "U_{2k,2a}(x;q) = (-xq;q^2) DQ_{2k,2a}(x;q)", "xq", ka, d_ka(),
        fam_xq("U_{2k,2a}(x;q)", "U", lambda p: (2 * p["k"], 2 * p["a"])),
        Side("(-xq;q^2) DQ", lambda p, N: _minus_xq_step2(1, N) * _dq(2 * p["k"], 2 * p["a"], N)))

    def u_even(p, N, a2):
        return family_series_xq(FamilySpec("U", 2 * p["k"], a2), N)

    def sum_shifted(p, N, lo, hi):
        k = p["k"]
        acc = SeriesXQ.zero(N)
        for h in range(lo, hi + 1):
            acc = acc + _mono(_at(u_even(p, N, 2 * k - 2 * h), 2), 2 * h, 4 * h)
        return acc

    def thm32_rhs(p, N):
        k, a = p["k"], p["a"]
        t1 = _mono(sum_shifted(p, N, 1, k - a) + sum_shifted(p, N, 0, k - a - 1), 2 * a, 2 * a)
        t2 = _mono(sum_shifted(p, N, 1, k - a + 1) + sum_shifted(p, N, 0, k - a), 2 * a - 2, 2 * a - 2)
        return _one_plus_xq(t1 + t2)

    add("thm-3.2", "thm-3.2", "U_{2k,2a} - U_{2k,2a-2} in terms of U_{2k,2k-2h}(xq^2)", "xq", ka, d_ka(),
        Side("difference", lambda p, N: u_even(p, N, 2 * p["a"]) - u_even(p, N, 2 * p["a"] - 2)),
        Side("shifted sums", thm32_rhs))

    def thm33_rhs(p, N):
        k, a = p["k"], p["a"]
        acc = SeriesXQ.zero(N)
        for i in range(1, a + 1):
            acc = acc + _mono(sum_shifted(p, N, 1, k - i) + sum_shifted(p, N, 0, k - i - 1), 2 * i, 2 * i)
            acc = acc + _mono(sum_shifted(p, N, 1, k - i + 1) + sum_shifted(p, N, 0, k - i), 2 * i - 2, 2 * i - 2)
        return _one_plus_xq(acc)

    add("thm-3.3", "thm-3.3", "U_{2k,2a}(x;q) as a double sum of U_{2k,2k-2h}(xq^2;q)", "xq", ka, d_ka(),
        Side("U_{2k,2a}(x;q)", lambda p, N: u_even(p, N, 2 * p["a"])),
        Side("double sum", thm33_rhs))

    add("thm-3.4", "thm-3.4", "sum U_{2k,2a}(n) q^n = (-q;q)(q^{2a},q^{4k-2a},q^{4k};q^{4k})/(q^2;q^2)", "q", ka, d_ka(),
        fam_q("U enumeration", "U", lambda p: (2 * p["k"], 2 * p["a"])),
        prod_side("product", lambda p: _spec(*_tri(2 * p["a"], 4 * p["k"]), P(1, 1, sign=-1), P(2, 2, inverse=True))),
        Side("(-q;q^2) Qbar_{k,a}(1;q^2)", lambda p, N: (
            expand_product(_spec(P(1, 2, sign=-1)), N)
            * qbar_doubled((2 * p["k"], 2 * p["a"]), N).at_x_one())))

    # U_{2k,2a-1} and U_{2k+1,2a} ---------------------------------------------
    def refined_top(K, A):
        return lambda p, N: family_series_xq(FamilySpec("Urefined", K(p), A(p), A(p)), N)

    add("thm-4.1:UU12", "thm-4.1", "U_{2k,2a-1} = U_{2k,2a} - U^{2a}_{2k,2a}", "xq", ka, d_ka(),
        fam_xq("U_{2k,2a-1}", "U", lambda p: (2 * p["k"], 2 * p["a"] - 1)),
        Side("U_{2k,2a} - U^{2a}_{2k,2a}", lambda p, N: u_even(p, N, 2 * p["a"])
             - refined_top(lambda p: 2 * p["k"], lambda p: 2 * p["a"])(p, N)))

    def kernel_difference(K, I):
        def build(p, N):
            d = _dq(K(p), I(p), N) - _dq(K(p), I(p) - 2, N)
            return _mono(_minus_xq_step2(3, N) * d, 1, 1)
        return build

    add("thm-4.1:U22a", "thm-4.1", "U^{2a}_{2k,2a}(x;q) = xq(-xq^3;q^2)[DQ_{2k,2a} - DQ_{2k,2a-2}]", "xq", ka, d_ka(),
        Side("U^{2a}_{2k,2a}", refined_top(lambda p: 2 * p["k"], lambda p: 2 * p["a"])),
        Side("kernel difference", kernel_difference(lambda p: 2 * p["k"], lambda p: 2 * p["a"])))

    def two_kernel(K, I_hi):
        def build(p, N):
            m3 = _minus_xq_step2(3, N)
            return m3 * _dq(K(p), I_hi(p), N) + _mono(m3 * _dq(K(p), I_hi(p) - 2, N), 1, 1)
        return build

    def u_odd_index_sum(M, lo, hi_of):
        # (-q^2;q)(q^lo,q^{M-lo},q^M;q^M)/(q^2;q^2) + q(-q^2;q)(q^{lo-2},...)/(q^2;q^2)
        def f(p):
            m = M(p)
            first = lo(p)
            return [
                _spec(P(2, 1, sign=-1), *_tri(first, m), P(2, 2, inverse=True)),
                _spec(P(2, 1, sign=-1), P(first - 2, m), P(hi_of(p), m), P(m, m), P(2, 2, inverse=True), shift=1),
            ]
        return f

    add("thm-4.2", "thm-4.2", "sum U_{2k,2a-1}(n) q^n as two products (stray x set to 1)", "q", ka, d_ka(),
        fam_q("U enumeration", "U", lambda p: (2 * p["k"], 2 * p["a"] - 1)),
        prod_side("product sum", u_odd_index_sum(lambda p: 4 * p["k"], lambda p: 2 * p["a"],
                                                  lambda p: 4 * p["k"] - 2 * p["a"] + 2)))
    add("thm-4.2:xq", "thm-4.2", "U_{2k,2a-1}(x;q) = (-xq^3;q^2)DQ_{2k,2a} + xq(-xq^3;q^2)DQ_{2k,2a-2}", "xq", ka,
        d_ka(),
        fam_xq("U_{2k,2a-1}(x;q)", "U", lambda p: (2 * p["k"], 2 * p["a"] - 1)),
        Side("kernel form", two_kernel(lambda p: 2 * p["k"], lambda p: 2 * p["a"])))

    add("thm-4.3:UU21", "thm-4.3", "U_{2k+1,2a} = U_{2k+1,2a+1} - U^{2a+1}_{2k+1,2a+1}", "xq", ka, d_ka(),
        fam_xq("U_{2k+1,2a}", "U", lambda p: (2 * p["k"] + 1, 2 * p["a"])),
        Side("U_{2k+1,2a+1} - U^{2a+1}_{2k+1,2a+1}", lambda p, N: family_series_xq(
            FamilySpec("U", 2 * p["k"] + 1, 2 * p["a"] + 1), N)
            - refined_top(lambda p: 2 * p["k"] + 1, lambda p: 2 * p["a"] + 1)(p, N)))
    add("thm-4.3:U2a-odd", "thm-4.3",
        "U^{2a+1}_{2k+1,2a+1}(x;q) = xq(-xq^3;q^2)[DQ_{2k+1,2a+1} - DQ_{2k+1,2a-1}]", "xq", ka, d_ka(),
        Side("U^{2a+1}_{2k+1,2a+1}", refined_top(lambda p: 2 * p["k"] + 1, lambda p: 2 * p["a"] + 1)),
        Side("kernel difference", kernel_difference(lambda p: 2 * p["k"] + 1, lambda p: 2 * p["a"] + 1)),
        note="odd-modulus analogue of U22a, as used for thm-4.4")

    add("thm-4.4", "thm-4.4", "sum U_{2k+1,2a}(n) q^n as two products (stray x set to 1)", "q", ka, d_ka(),
        fam_q("U enumeration", "U", lambda p: (2 * p["k"] + 1, 2 * p["a"])),
        prod_side("product sum", u_odd_index_sum(lambda p: 4 * p["k"] + 2, lambda p: 2 * p["a"] + 1,
                                                  lambda p: 4 * p["k"] - 2 * p["a"] + 3)))
    add("thm-4.4:xq", "thm-4.4", "U_{2k+1,2a}(x;q) = (-xq^3;q^2)DQ_{2k+1,2a+1} + xq(-xq^3;q^2)DQ_{2k+1,2a-1}",
        "xq", ka, d_ka(),
        fam_xq("U_{2k+1,2a}(x;q)", "U", lambda p: (2 * p["k"] + 1, 2 * p["a"])),
        Side("kernel form", two_kernel(lambda p: 2 * p["k"] + 1, lambda p: 2 * p["a"] + 1)))

    # Ubar_{2k,2a} ------------------------------------------------------------
    add("thm-5.1", "thm-5.1", "Ubar_{k,a}(n) = Ubar_{k,a-1}(n), a even", "q", ka, d_a_even,
        fam_q("Ubar_{k,a}", "Ubar", lambda p: (p["k"], p["a"])),
        fam_q("Ubar_{k,a-1}", "Ubar", lambda p: (p["k"], p["a"] - 1)))

    def ubar(K, A):
        return lambda p, N: family_series_xq(FamilySpec("Ubar", K(p), A(p)), N)

    def u(K, A):
        return lambda p, N: family_series_xq(FamilySpec("U", K(p), A(p)), N)

    add("thm-5.2", "thm-5.2",
        "Ubar_{2k,2a} - Ubar_{2k,2a-2} = (xq)^{2a}U_{2k,2k-2a}(xq) + (xq)^{2a-2}U_{2k,2k-2a+2}(xq)",
        "xq", ka, d_ka(),
        Side("difference", lambda p, N: ubar(lambda p: 2 * p["k"], lambda p: 2 * p["a"])(p, N)
             - ubar(lambda p: 2 * p["k"], lambda p: 2 * p["a"] - 2)(p, N)),
        Side("shifted U", lambda p, N: _mono(_at(u(lambda p: 2 * p["k"], lambda p: 2 * p["k"] - 2 * p["a"])(p, N), 1),
                                             2 * p["a"], 2 * p["a"])
             + _mono(_at(u(lambda p: 2 * p["k"], lambda p: 2 * p["k"] - 2 * p["a"] + 2)(p, N), 1),
                     2 * p["a"] - 2, 2 * p["a"] - 2)))

    add("thm-5.3", "thm-5.3", "Ubar_{2k,2a}(x;q) = (-xq^2;q^2) DQ_{2k,2a}(x;q)", "xq", ka, d_ka(),
        fam_xq("Ubar_{2k,2a}(x;q)", "Ubar", lambda p: (2 * p["k"], 2 * p["a"])),
        Side("(-xq^2;q^2) DQ", lambda p, N: _minus_xq_step2(2, N) * _dq(2 * p["k"], 2 * p["a"], N)))

    add("thm-5.4", "thm-5.4", "sum Ubar_{2k,2a}(n) q^n = (-q^2;q^2)^2(q^{2a},q^{4k-2a},q^{4k};q^{4k})/(q^2;q^2)",
        "q", ka, d_ka(),
        fam_q("Ubar enumeration", "Ubar", lambda p: (2 * p["k"], 2 * p["a"])),
        prod_side("product", lambda p: _spec(*_tri(2 * p["a"], 4 * p["k"]), P(2, 2, sign=-1), P(2, 2, sign=-1),
                                             P(2, 2, inverse=True))))

    # U_{2k+1,2a+1} and Ubar_{2k+1,2a} ----------------------------------------
    K1 = lambda p: 2 * p["k"] + 1  # noqa: E731

    def difU11_rhs(p, N):
        k, a = p["k"], p["a"]
        t = _mono(_at(ubar(K1, lambda p: 2 * k - 2 * a)(p, N), 1), 2 * a + 1, 2 * a + 1)
        t = t + _mono(_at(ubar(K1, lambda p: 2 * k - 2 * a + 2)(p, N), 1), 2 * a - 1, 2 * a - 1)
        return _one_plus_xq(t)

    add("thm-6.1:difU11", "thm-6.1", "U_{2k+1,2a+1} - U_{2k+1,2a-1} in terms of Ubar_{2k+1,.}(xq)", "xq", ka, d_ka(),
        Side("difference", lambda p, N: u(K1, lambda p: 2 * p["a"] + 1)(p, N) - u(K1, lambda p: 2 * p["a"] - 1)(p, N)),
        Side("shifted Ubar", difU11_rhs))
    add("thm-6.1:difU1", "thm-6.1", "U_{2k+1,1} = x^2q^2 Ubar_{2k+1,2k}(xq) + Ubar_{2k+1,2k+2}(xq)", "xq", ("k",), d_k,
        Side("U_{2k+1,1}", u(K1, lambda p: 1)),
        Side("shifted Ubar", lambda p, N: _mono(_at(ubar(K1, lambda p: 2 * p["k"])(p, N), 1), 2, 2)
             + _at(ubar(K1, lambda p: 2 * p["k"] + 2)(p, N), 1)))

    add("thm-6.2:diff", "thm-6.2",
        "Ubar_{2k+1,2a} - Ubar_{2k+1,2a-2} = (xq)^{2a}U_{2k+1,2k-2a+1}(xq) + (xq)^{2a-2}U_{2k+1,2k-2a+3}(xq)",
        "xq", ka, d_ka(),
        Side("difference", lambda p, N: ubar(K1, lambda p: 2 * p["a"])(p, N) - ubar(K1, lambda p: 2 * p["a"] - 2)(p, N)),
        Side("shifted U", lambda p, N: _mono(_at(u(K1, lambda p: 2 * p["k"] - 2 * p["a"] + 1)(p, N), 1),
                                             2 * p["a"], 2 * p["a"])
             + _mono(_at(u(K1, lambda p: 2 * p["k"] - 2 * p["a"] + 3)(p, N), 1), 2 * p["a"] - 2, 2 * p["a"] - 2)))
    add("thm-6.2:base", "thm-6.2", "Ubar_{2k+1,2}(x;q) = (xq)^2 U_{2k+1,2k-1}(xq) + U_{2k+1,2k+1}(xq)", "xq", ("k",), d_k,
        Side("Ubar_{2k+1,2}", ubar(K1, lambda p: 2)),
        Side("shifted U", lambda p, N: _mono(_at(u(K1, lambda p: 2 * p["k"] - 1)(p, N), 1), 2, 2)
             + _at(u(K1, lambda p: 2 * p["k"] + 1)(p, N), 1)))

    add("thm-6.3:U", "thm-6.3", "U_{2k+1,2a+1}(x;q) = (-xq;q^2) DQ_{2k+1,2a+1}(x;q)", "xq", ka, d_ka(0),
        fam_xq("U_{2k+1,2a+1}(x;q)", "U", lambda p: (2 * p["k"] + 1, 2 * p["a"] + 1)),
        Side("(-xq;q^2) DQ", lambda p, N: _minus_xq_step2(1, N) * _dq(2 * p["k"] + 1, 2 * p["a"] + 1, N)))
    add("thm-6.3:Ubar", "thm-6.3", "Ubar_{2k+1,2a} = Ubar_{2k+1,2a-1} = (-xq^2;q^2) DQ_{2k+1,2a}(x;q)", "xq", ka, d_ka(),
        fam_xq("Ubar_{2k+1,2a}(x;q)", "Ubar", lambda p: (2 * p["k"] + 1, 2 * p["a"])),
        fam_xq("Ubar_{2k+1,2a-1}(x;q)", "Ubar", lambda p: (2 * p["k"] + 1, 2 * p["a"] - 1)),
        Side("(-xq^2;q^2) DQ", lambda p, N: _minus_xq_step2(2, N) * _dq(2 * p["k"] + 1, 2 * p["a"], N)))

    add("thm-6.4:U", "thm-6.4", "sum U_{2k+1,2a+1}(n) q^n = (-q;q)(q^{2a+1},q^{4k+1-2a},q^{4k+2};q^{4k+2})/(q^2;q^2)",
        "q", ka, d_ka(0),
        fam_q("U enumeration", "U", lambda p: (2 * p["k"] + 1, 2 * p["a"] + 1)),
        prod_side("product", lambda p: _spec(*_tri(2 * p["a"] + 1, 4 * p["k"] + 2), P(1, 1, sign=-1),
                                             P(2, 2, inverse=True))))
    add("thm-6.4:Ubar", "thm-6.4",
        "sum Ubar_{2k+1,2a}(n) q^n = (-q^2;q^2)^2(q^{2a},q^{4k-2a+2},q^{4k+2};q^{4k+2})/(q^2;q^2)",
        "q", ka, d_ka(),
        fam_q("Ubar_{2k+1,2a}", "Ubar", lambda p: (2 * p["k"] + 1, 2 * p["a"])),
        fam_q("Ubar_{2k+1,2a-1}", "Ubar", lambda p: (2 * p["k"] + 1, 2 * p["a"] - 1)),
        prod_side("product", lambda p: _spec(*_tri(2 * p["a"], 4 * p["k"] + 2), P(2, 2, sign=-1), P(2, 2, sign=-1),
                                             P(2, 2, inverse=True))))

    # splitting into distinct parts and Bbar ----------------------------------
    add("thm-7.1:UB", "thm-7.1", "sum U_{2k,2a}(n) q^n = (-q;q^2) sum Bbar_{k,a}(n) q^{2n}", "q", ka, d_ka(),
        fam_q("U enumeration", "U", lambda p: (2 * p["k"], 2 * p["a"])),
        Side("(-q;q^2) Bbar(q^2)", lambda p, N: expand_product(_spec(P(1, 2, sign=-1)), N)
             * _bbar_in_q2(p["k"], p["a"], N)))
    add("thm-7.1:UB2", "thm-7.1", "sum Ubar_{2k,2a}(n) q^n = (-q^2;q^2) sum Bbar_{k,a}(n) q^{2n}", "q", ka, d_ka(),
        fam_q("Ubar enumeration", "Ubar", lambda p: (2 * p["k"], 2 * p["a"])),
        Side("(-q^2;q^2) Bbar(q^2)", lambda p, N: expand_product(_spec(P(2, 2, sign=-1)), N)
             * _bbar_in_q2(p["k"], p["a"], N)))

    ids = [c.id for c in cases]
    assert len(ids) == len(set(ids)), "duplicate registry ids"
    return cases


_REGISTRY: list[IdentityCase] | None = None


def registry() -> list[IdentityCase]:
    """Every registered identity, in a fixed order."""
    global _REGISTRY
    if _REGISTRY is None:
        _REGISTRY = _build_registry()
    return list(_REGISTRY)


def get_case(case_id: str) -> IdentityCase:
    for c in registry():
        if c.id == case_id:
            return c
    raise KeyError(f"no identity {case_id!r}")


def select(filters: Iterable[str] | None = None, include_as_printed: bool = False) -> list[IdentityCase]:
    """Cases whose id or theorem equals a filter, or whose id starts with ``filter + ':'``.

    A filter ending in ``*`` is a prefix match (``thm-6.*`` selects every ``thm-6.`` case).
    ``None`` selects everything.  Cases checking a misprinted form are only
    picked up by their exact id unless ``include_as_printed`` is set.
    """
    cases = registry()
    if filters is None:
        return [c for c in cases if include_as_printed or not c.as_printed]
    fl = list(filters)
    out = []
    for c in cases:
        for f in fl:
            if c.id == f:
                hit = True
            elif c.as_printed and not include_as_printed:
                hit = False
            elif f.endswith("*"):
                hit = c.id.startswith(f[:-1])
            else:
                hit = c.theorem == f
            if hit:
                out.append(c)
                break
    return out


# -- checking ---------------------------------------------------------------


def _first_mismatch(f: Series, g: Series, x_bound: int | None):
    if isinstance(f, SeriesQ):
        for n, (u, v) in enumerate(zip(f.coeffs, g.coeffs)):
            if u != v:
                return {"n": n, "left": str(u), "right": str(v)}
        return None
    for n, (pu, pv) in enumerate(zip(f.rows, g.rows)):
        top = max(len(pu), len(pv))
        if x_bound is not None:
            top = min(top, x_bound + 1)
        for m in range(top):
            u = pu[m] if m < len(pu) else 0
            v = pv[m] if m < len(pv) else 0
            if u != v:
                return {"m": m, "n": n, "left": str(u), "right": str(v)}
    return None


def verify(case: IdentityCase, params: Params, N: int, x_bound: int | None = None) -> VerificationReport:
    """Compare every side of ``case`` against the first up to q^N (and x^x_bound).

    Raises :class:`DomainError` when ``params`` violate the hypotheses.
    """
    if N < 0:
        raise DomainError("N must be non-negative")
    p = case.check_params(params)
    built = [s.build(p, N) for s in case.sides]
    for j in range(1, len(built)):
        w = _first_mismatch(built[0], built[j], x_bound if case.variables == "xq" else None)
        if w:
            w.update(left_side=case.sides[0].label, right_side=case.sides[j].label)
            return VerificationReport(case.id, p, N, "fail", x_bound, w, as_printed=case.as_printed)
    return VerificationReport(case.id, p, N, "pass", x_bound, as_printed=case.as_printed)


def verify_functional(case: IdentityCase, params: Params, N: int, x_bound: int) -> VerificationReport:
    """Two-variable check up to (x^x_bound, q^N)."""
    if case.variables != "xq":
        raise DomainError(f"{case.id} is an identity in q alone; use verify")
    return verify(case, params, N, x_bound)


def run_case(case: IdentityCase, p: Params, N: int, x_bound: int | None = None) -> VerificationReport:
    """Like :func:`verify`, but any exception becomes an ``error`` report."""
    return _run((case, p, N, x_bound))


def _run(job) -> VerificationReport:
    case, p, N, x_bound = job
    try:
        return verify(case, p, N, x_bound)
    except Exception as exc:  # collected per case, never fatal for the grid
        return VerificationReport(case.id, dict(p), N, "error", x_bound, error=f"{type(exc).__name__}: {exc}",
                                  as_printed=case.as_printed)


def verify_grid(
    filters: Iterable[str] | None = None,
    k_max: int = 4,
    N: int = 30,
    N_xq: int | None = None,
    x_bound: int | None = None,
    jobs: int = 1,
    include_as_printed: bool = False,
    params: Params | None = None,
) -> list[VerificationReport]:
    """Run the selected cases over every valid parameter tuple with k <= k_max.

    ``N_xq`` is the order used for two-variable cases (default: ``N``).  With
    ``params`` given, only that tuple is run for each case (domain errors are
    reported as errors).  Reports come back sorted by (id, params).
    """
    work = []
    for case in select(filters, include_as_printed):
        order = N if case.variables == "q" else (N_xq if N_xq is not None else N)
        if params is not None:
            grid = [{n: params.get(n) for n in case.params}]
        else:
            grid = case.grid(k_max)
        for p in grid:
            work.append((case, p, order, x_bound))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            reports = list(ex.map(_run, work))
    else:
        reports = [_run(w) for w in work]
    return sorted(reports, key=VerificationReport.sort_key)


def perturb(case: IdentityCase, bump: int = 1) -> IdentityCase:
    """A copy of ``case`` whose first product side has one base exponent moved by ``bump``.

    The factor moved is the first one with the largest step (the modulus of
    the triple product), e.g. q^{2a} -> q^{2a+1} in (q^{2a},q^{4k-2a},q^{4k};q^{4k}).
    """
    sides = list(case.sides)
    for j, s in enumerate(sides):
        if s.product is None:
            continue
        orig = s.product

        def moved(p, orig=orig):
            spec = orig(p)
            step = max(f.d for f in spec.factors)
            idx = next(i for i, f in enumerate(spec.factors) if f.d == step)
            fs = list(spec.factors)
            fs[idx] = dataclasses.replace(fs[idx], c=fs[idx].c + bump)
            return ProductSpec(tuple(fs), spec.scalar, spec.q_shift)

        sides[j] = Side(s.label + " (perturbed)", lambda p, N, moved=moved: expand_product(moved(p), N), moved)
        return dataclasses.replace(case, id=case.id + "/perturbed", sides=tuple(sides))
    raise ValueError(f"{case.id} has no product side to perturb")
