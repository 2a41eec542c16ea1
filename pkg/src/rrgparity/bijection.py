"""Split U_{2k,2a}-overpartitions into (distinct odd parts, B̄_{k,a}-overpartition).

``forward`` removes one non-overlined copy of every odd size whose total
frequency is odd; those removed parts form gamma.  Every size of the rest
now occurs an even number of times, so the copies pair up and each pair is
halved into beta'.  An overlined copy survives as the overlined copy in
beta'.  Hence |lambda| = |gamma| + 2 |beta'|.

With ``variant="Ubar"`` the roles of odd and even sizes swap: lambda runs over
Ubar_{2k,2a} and gamma has distinct even parts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .families import FamilyError, FamilySpec, OverPartition, admits, count, iter_admissible

__all__ = ["SplitPair", "BijectionError", "forward", "inverse", "check_bijection", "count_pairs", "VARIANTS"]

VARIANTS = ("U", "Ubar")


class BijectionError(ValueError):
    """An item outside the domain or image of the map."""


@dataclass(frozen=True)
class SplitPair:
    gamma: tuple[int, ...]  # distinct parts, decreasing
    beta_prime: OverPartition

    @property
    def weight(self) -> int:
        return sum(self.gamma) + 2 * self.beta_prime.weight

    def to_json(self) -> dict:
        return {"gamma": list(self.gamma), "beta_prime": self.beta_prime.to_json()}

    def __str__(self):
        return f"(gamma={list(self.gamma)}, beta'={self.beta_prime})"


def _removed_parity(variant: str) -> int:
    if variant not in VARIANTS:
        raise BijectionError(f"unknown variant {variant!r}; choose from {VARIANTS}")
    return 1 if variant == "U" else 0


def _source(k: int, a: int, variant: str) -> FamilySpec:
    return FamilySpec(variant, 2 * k, 2 * a)


def _target(k: int, a: int) -> FamilySpec:
    return FamilySpec("Bbar", k, i=a)


def _check_ka(k: int, a: int) -> None:
    if not k >= a >= 1:
        raise BijectionError(f"need k >= a >= 1, got k={k}, a={a}")


def forward(lam: OverPartition, k: int, a: int, variant: str = "U") -> SplitPair:
    """Image of an admissible ``lam`` as a :class:`SplitPair`."""
    _check_ka(k, a)
    par = _removed_parity(variant)
    if not admits(_source(k, a, variant), lam):
        raise BijectionError(f"{lam} is not admissible for {_source(k, a, variant).label}")
    gamma = []
    halves: dict[int, tuple[int, int]] = {}
    for l in range(1, lam.largest + 1):
        f, fb = lam.pair(l)
        if (f + fb) % 2:
            if l % 2 != par or f == 0:
                raise BijectionError(f"size {l} of {lam} has odd frequency but cannot be removed")
            gamma.append(l)
            f -= 1
        halves[l] = ((f + fb) // 2 - fb, fb)
    beta = OverPartition.from_freq_map(halves)
    return SplitPair(tuple(sorted(gamma, reverse=True)), beta)


def inverse(pair: SplitPair, k: int, a: int, variant: str = "U") -> OverPartition:
    """Rebuild lambda from a pair; raises if the result is outside the source family."""
    _check_ka(k, a)
    par = _removed_parity(variant)
    g = pair.gamma
    if len(set(g)) != len(g) or any(p < 1 or p % 2 != par for p in g):
        raise BijectionError(f"gamma={list(g)} is not a partition into distinct {'odd' if par else 'even'} parts")
    beta = pair.beta_prime
    if not admits(_target(k, a), beta):
        raise BijectionError(f"beta'={beta} is not admissible for {_target(k, a).label}")
    freq = {}
    top = max([beta.largest] + list(g))
    for l in range(1, top + 1):
        f, fb = beta.pair(l)
        total = 2 * (f + fb) + (l in g)
        freq[l] = (total - fb, fb)
    lam = OverPartition.from_freq_map(freq)
    if not admits(_source(k, a, variant), lam):
        raise BijectionError(f"{pair} rebuilds {lam}, which is not admissible for {_source(k, a, variant).label}")
    return lam


def _gammas(n: int, par: int) -> list[tuple[int, ...]]:
    """All gamma with |gamma| <= n and |gamma| ≡ n (mod 2): distinct parts of parity ``par``."""
    sizes = [s for s in range(1, n + 1) if s % 2 == par]
    out = []
    for r in range(len(sizes) + 1):
        for c in combinations(sizes, r):
            if sum(c) <= n and (n - sum(c)) % 2 == 0:
                out.append(tuple(sorted(c, reverse=True)))
    return sorted(out)


@dataclass
class BijectionReport:
    k: int
    a: int
    variant: str
    n_max: int
    passed: bool = True
    rows: list[dict] = field(default_factory=list)
    witnesses: list[dict] = field(default_factory=list)

    def fail(self, check: str, n: int, detail: str, item=None) -> None:
        self.passed = False
        w = {"check": check, "n": n, "detail": detail}
        if item is not None:
            w["item"] = item.to_json()
        self.witnesses.append(w)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "a": self.a,
            "variant": self.variant,
            "n_max": self.n_max,
            "passed": self.passed,
            "rows": self.rows,
            "witnesses": self.witnesses,
        }


def check_bijection(k: int, a: int, n_max: int, variant: str = "U", allow_large: bool = False) -> BijectionReport:
    """Exhaustive validation of forward/inverse for every weight n <= n_max.

    Checks totality, the SplitPair invariants, weight conservation,
    injectivity, both round trips (the second over every pair of the right
    weight, which also gives surjectivity) and the count identity
    |source(n)| = sum over gamma of Bbar_{k,a}((n - |gamma|)/2).
    """
    _check_ka(k, a)
    par = _removed_parity(variant)
    rep = BijectionReport(k, a, variant, n_max)
    src, tgt = _source(k, a, variant), _target(k, a)
    for n in range(n_max + 1):
        items = list(iter_admissible(src, n, allow_large))
        images: dict[SplitPair, OverPartition] = {}
        for lam in items:
            try:
                p = forward(lam, k, a, variant)
            except (BijectionError, FamilyError) as exc:
                rep.fail("total", n, str(exc), lam)
                continue
            if len(set(p.gamma)) != len(p.gamma) or any(x % 2 != par for x in p.gamma):
                rep.fail("gamma", n, f"gamma={list(p.gamma)}", lam)
            if not admits(tgt, p.beta_prime):
                rep.fail("beta_prime", n, f"beta'={p.beta_prime} not in {tgt.label}", lam)
            if p.weight != n:
                rep.fail("weight", n, f"|gamma| + 2|beta'| = {p.weight}", lam)
            if p in images:
                rep.fail("injective", n, f"{lam} and {images[p]} both map to {p}", lam)
            images[p] = lam
            try:
                back = inverse(p, k, a, variant)
            except BijectionError as exc:
                rep.fail("round_trip", n, str(exc), lam)
                continue
            if back != lam:
                rep.fail("round_trip", n, f"inverse gives {back}", lam)
        pairs = 0
        for gamma in _gammas(n, par):
            rest = n - sum(gamma)
            for beta in iter_admissible(tgt, rest // 2, allow_large):
                pairs += 1
                p = SplitPair(gamma, beta)
                try:
                    lam = inverse(p, k, a, variant)
                except BijectionError as exc:
                    rep.fail("surjective", n, str(exc))
                    continue
                if forward(lam, k, a, variant) != p:
                    rep.fail("round_trip_pairs", n, f"{p} -> {lam} -> {forward(lam, k, a, variant)}")
        ok = len(items) == pairs
        if not ok:
            rep.fail("count", n, f"{src.label}({n}) = {len(items)} but pairs = {pairs}")
        rep.rows.append({"n": n, "source": len(items), "pairs": pairs, "ok": ok})
    return rep


def count_pairs(k: int, a: int, n: int, variant: str = "U") -> int:
    """sum over gamma of Bbar_{k,a}((n - |gamma|)/2), gamma with distinct parts of the removed parity."""
    par = _removed_parity(variant)
    total = 0
    for gamma in _gammas(n, par):
        total += count(_target(k, a), (n - sum(gamma)) // 2)
    return total
