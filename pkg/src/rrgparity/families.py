"""Brute-force enumeration and exact counting of the partition families.

Every family is described by two local predicates on the frequency view
(part size l -> (f_l, f_l̄)): a per-size check and a check on each pair of
adjacent sizes (l, l + 1), with size 0 standing for the empty size below 1.
All defining clauses of these families only ever compare sizes l and l + 1,
so a transfer over sizes counts exactly the admissible overpartitions.

``admits`` is the literal membership test; for the gap conditions of B and
B̄ it walks the whole canonically sorted sequence.  ``count`` filters the
full enumeration.  ``family_series_xq`` uses the size-by-size transfer and is
cross-checked against ``count`` in the test suite.
"""

from __future__ import annotations

import os
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from .series import SeriesQ, SeriesXQ

__all__ = [
    "FamilyError",
    "OverPartition",
    "FamilySpec",
    "FAMILIES",
    "enumerate_overpartitions",
    "enumerate_partitions",
    "admits",
    "count",
    "count_by_parts",
    "family_series",
    "family_series_xq",
    "refined_count",
    "enumeration_budget",
]

DEFAULT_BUDGET = 30


def enumeration_budget() -> int:
    """Largest n enumerated without an explicit override (env RRGPARITY_BUDGET)."""
    return int(os.environ.get("RRGPARITY_BUDGET", DEFAULT_BUDGET))


class FamilyError(ValueError):
    """Bad family id, bad parameters, or an item outside a family's domain."""


Freq = tuple[int, int]  # (f_l, f_l̄)
_EMPTY: Freq = (0, 0)


@dataclass(frozen=True)
class OverPartition:
    """An overpartition in frequency form.

    ``freq[l - 1] == (f_l, f_l̄)`` with f_l̄ in {0, 1}; trailing empty sizes
    are trimmed so equal overpartitions compare equal.  A partition is an
    overpartition with every f_l̄ = 0.
    """

    freq: tuple[Freq, ...] = ()

    def __post_init__(self):
        fr = list(self.freq)
        while fr and fr[-1] == _EMPTY:
            fr.pop()
        for f, fb in fr:
            if f < 0 or fb not in (0, 1):
                raise FamilyError(f"invalid frequency pair ({f}, {fb})")
        object.__setattr__(self, "freq", tuple((int(f), int(fb)) for f, fb in fr))

    @classmethod
    def from_parts(cls, parts: Iterable[int], overlined: Iterable[int] = ()) -> "OverPartition":
        """Build from a multiset of sizes plus the set of sizes carrying an overline.

        Each size in ``overlined`` must occur in ``parts``; one of its copies
        becomes the overlined one.
        """
        counts: dict[int, int] = defaultdict(int)
        for p in parts:
            if p < 1:
                raise FamilyError(f"parts must be positive, got {p}")
            counts[p] += 1
        bars = set(overlined)
        for b in bars:
            if counts.get(b, 0) < 1:
                raise FamilyError(f"overlined size {b} does not occur")
        L = max(counts, default=0)
        return cls(tuple((counts.get(l, 0) - (l in bars), int(l in bars)) for l in range(1, L + 1)))

    @classmethod
    def from_freq_map(cls, m: dict[int, Freq]) -> "OverPartition":
        L = max((l for l, (f, fb) in m.items() if f or fb), default=0)
        return cls(tuple(m.get(l, _EMPTY) for l in range(1, L + 1)))

    def f(self, l: int) -> int:
        return self.freq[l - 1][0] if 1 <= l <= len(self.freq) else 0

    def fbar(self, l: int) -> int:
        return self.freq[l - 1][1] if 1 <= l <= len(self.freq) else 0

    def pair(self, l: int) -> Freq:
        return self.freq[l - 1] if 1 <= l <= len(self.freq) else _EMPTY

    @property
    def weight(self) -> int:
        return sum(l * (f + fb) for l, (f, fb) in enumerate(self.freq, 1))

    @property
    def num_parts(self) -> int:
        return sum(f + fb for f, fb in self.freq)

    @property
    def largest(self) -> int:
        return len(self.freq)

    @property
    def is_partition(self) -> bool:
        return not any(fb for _, fb in self.freq)

    def sequence(self) -> list[tuple[int, bool]]:
        """Canonical order: decreasing size, the overlined copy first within a size."""
        out: list[tuple[int, bool]] = []
        for l in range(len(self.freq), 0, -1):
            f, fb = self.freq[l - 1]
            out.extend([(l, True)] * fb + [(l, False)] * f)
        return out

    def parts(self) -> list[int]:
        return [l for l, _ in self.sequence()]

    def __str__(self):
        return "(" + ",".join(f"{l}̄" if bar else str(l) for l, bar in self.sequence()) + ")"

    def to_json(self) -> dict:
        return {"parts": self.parts(), "overlined": [l for l, (_, fb) in enumerate(self.freq, 1) if fb]}


def as_overpartition(item) -> OverPartition:
    if isinstance(item, OverPartition):
        return item
    return OverPartition.from_parts(item)


# -- enumeration ------------------------------------------------------------


def _enum(n: int, overlines: bool) -> Iterator[OverPartition]:
    # depth-first over sizes 1, 2, ...; lexicographic on the frequency vector
    bar_choices = (0, 1) if overlines else (0,)

    def rec(l: int, rem: int, acc: list[Freq]):
        if rem == 0:
            yield OverPartition(tuple(acc))
            return
        if l > rem:
            return
        for fb in bar_choices:
            for f in range(0, (rem - fb * l) // l + 1):
                acc.append((f, fb))
                yield from rec(l + 1, rem - (f + fb) * l, acc)
                acc.pop()

    yield from rec(1, n, [])


def enumerate_overpartitions(n: int) -> Iterator[OverPartition]:
    """Every overpartition of n exactly once, in a fixed order."""
    if n < 0:
        raise FamilyError("n must be non-negative")
    return _enum(n, True)


def enumerate_partitions(n: int) -> Iterator[tuple[int, ...]]:
    """Every partition of n as a non-increasing tuple, in a fixed order."""
    if n < 0:
        raise FamilyError("n must be non-negative")
    for p in _enum(n, False):
        yield tuple(p.parts())


@lru_cache(maxsize=64)
def _all_items(n: int, overlines: bool) -> tuple[OverPartition, ...]:
    return tuple(_enum(n, overlines))


# -- families ---------------------------------------------------------------

FAMILIES = ("A", "B", "W", "Wbar", "G", "Abar", "Bbar", "U", "Ubar", "Urefined")
_PARTITION_FAMILIES = frozenset({"A", "B", "W", "Wbar", "G"})


@dataclass(frozen=True)
class FamilySpec:
    """A counting family with its parameters.

    A, B, W, Wbar, G, U, Ubar take (k, a); Abar and Bbar take (k, i);
    Urefined takes (k, a, i) and counts U_{k,a} items where
    (f_1̄ = 1 and f_1 = i) or (f_1̄ = 0 and f_1 = i - 1).
    """

    family: str
    k: int
    a: int | None = None
    i: int | None = None

    def __post_init__(self):
        fam, k, a, i = self.family, self.k, self.a, self.i
        if fam not in FAMILIES:
            raise FamilyError(f"unknown family {fam!r}; valid ids: {', '.join(FAMILIES)}")
        if k is None or k < 1:
            raise FamilyError(f"{fam}: k must be >= 1")
        if fam in ("Abar", "Bbar"):
            if i is None or a is not None:
                raise FamilyError(f"{fam} takes parameters (k, i)")
            if not k >= i >= 1:
                raise FamilyError(f"{fam}: need k >= i >= 1, got k={k}, i={i}")
            return
        if a is None:
            raise FamilyError(f"{fam} needs parameter a")
        if fam in ("U", "Ubar", "Urefined"):
            # a = 0 (empty family) and a = k + 1 appear in the shifted relations
            if not k + 1 >= a >= 0:
                raise FamilyError(f"{fam}: need k + 1 >= a >= 0, got k={k}, a={a}")
        elif not k >= a >= 1:
            raise FamilyError(f"{fam}: need k >= a >= 1, got k={k}, a={a}")
        if fam == "G" and (k - a) % 2:
            raise FamilyError("G_{k,a} is defined only for k ≡ a (mod 2)")
        if fam == "Urefined":
            if i is None or not a >= i >= 1:
                raise FamilyError(f"Urefined: need a >= i >= 1, got a={a}, i={i}")
        elif i is not None:
            raise FamilyError(f"{fam} takes no parameter i")

    @property
    def overlines(self) -> bool:
        return self.family not in _PARTITION_FAMILIES

    @property
    def label(self) -> str:
        idx = [self.k] + [v for v in (self.a, self.i) if v is not None]
        return f"{self.family}_{{{','.join(map(str, idx))}}}"

    # local predicates ----------------------------------------------------

    def size_ok(self, l: int, fr: Freq) -> bool:
        """Clauses that involve size l alone."""
        f, fb = fr
        fam, k = self.family, self.k
        if not (f or fb) and (l != 1 or fam not in ("U", "Ubar", "Urefined")):
            return True
        if fam in _PARTITION_FAMILIES and fb:
            return False
        if fam == "A":
            return l % (2 * k + 1) not in (0, self.a, 2 * k + 1 - self.a)
        if fam in ("B", "Bbar"):
            lim = (self.a if fam == "B" else self.i) - 1
            return l != 1 or f <= lim
        if fam == "W":
            return (l % 2 == 1 or f % 2 == 0) and (l != 1 or f <= self.a - 1)
        if fam == "Wbar":
            return (l % 2 == 0 or f % 2 == 0) and (l != 1 or f <= self.a - 1)
        if fam == "G":
            M, a = 2 * k + 2, self.a
            if k % 2 == 0:
                if l % 2:
                    return f <= 1
                return l % M not in (0, a % M, (M - a) % M)
            return l % 4 != 2 and l % M not in (0, a % M, (M - a) % M)
        if fam == "Abar":
            if self.i == k:
                return l % k != 0
            return f == 0 or l % (2 * k) not in (0, self.i, 2 * k - self.i)
        # U, Ubar, Urefined
        a = self.a
        odd_rule = fam != "Ubar"  # U: odd sizes need f >= f̄, even sizes even total
        if l == 1 and f > a - 1 + fb:
            return False
        if (l % 2 == 1) == odd_rule:
            if f < fb:
                return False
        elif (f + fb) % 2:
            return False
        if fam == "Urefined" and l == 1:
            return f == self.i - (1 - fb)
        return True

    def pair_ok(self, l: int, lower: Freq, upper: Freq) -> bool:
        """Clauses linking size l (``lower``) and size l + 1 (``upper``); l >= 0."""
        fam = self.family
        if fam in ("U", "Ubar", "Urefined"):
            if l == 0:
                return True
            return lower[0] + lower[1] + upper[0] <= self.k - 1 + upper[1]
        if fam in ("B", "W", "Wbar", "Bbar"):
            return _block_gap_ok(self.k, l, lower, upper, fam == "Bbar")
        return True


def _block_gap_ok(k: int, l: int, lower: Freq, upper: Freq, overline_relief: bool) -> bool:
    """Gap clause for windows that start at size l + 1 and end at size l or l + 1."""
    seq = [True] * upper[1] + [False] * upper[0]
    top = len(seq)
    seq_sizes = [l + 1] * top + [l] * (lower[0] + lower[1])
    bars = seq + [True] * lower[1] + [False] * lower[0]
    for j in range(top):
        end = j + k - 1
        if end >= len(seq_sizes):
            break
        need = 1 if (overline_relief and bars[j]) else 2
        if seq_sizes[j] - seq_sizes[end] < need:
            return False
    return True


def _sequence_gap_ok(k: int, seq: list[tuple[int, bool]], overline_relief: bool) -> bool:
    for j in range(len(seq) - k + 1):
        size, bar = seq[j]
        need = 1 if (overline_relief and bar) else 2
        if size - seq[j + k - 1][0] < need:
            return False
    return True


def admits(spec: FamilySpec, item) -> bool:
    """Literal membership test of ``item`` (an OverPartition or a partition tuple)."""
    lam = as_overpartition(item)
    if not spec.overlines and not lam.is_partition:
        return False
    L = lam.largest
    # size 1 is always inspected: clause (i) of U/Ubar constrains even an absent 1
    for l in range(1, max(L, 1) + 1):
        if not spec.size_ok(l, lam.pair(l)):
            return False
    if spec.family in ("B", "W", "Wbar", "Bbar"):
        return _sequence_gap_ok(spec.k, lam.sequence(), spec.family == "Bbar")
    for l in range(0, L + 1):
        if not spec.pair_ok(l, lam.pair(l), lam.pair(l + 1)):
            return False
    return True


def _check_budget(n: int, allow_large: bool) -> None:
    if n > enumeration_budget() and not allow_large:
        raise FamilyError(f"n={n} exceeds the enumeration budget {enumeration_budget()} (pass allow_large)")


def iter_admissible(spec: FamilySpec, n: int, allow_large: bool = False) -> Iterator[OverPartition]:
    _check_budget(n, allow_large)
    for lam in _all_items(n, spec.overlines):
        if admits(spec, lam):
            yield lam


def count(spec: FamilySpec, n: int, allow_large: bool = False) -> int:
    """Number of admissible items of weight n, by filtering the enumeration."""
    return sum(1 for _ in iter_admissible(spec, n, allow_large))


def count_by_parts(spec: FamilySpec, m: int, n: int, allow_large: bool = False) -> int:
    """Number of admissible items of weight n with exactly m parts."""
    return sum(1 for lam in iter_admissible(spec, n, allow_large) if lam.num_parts == m)


def refined_count(k: int, a: int, i: int, n: int) -> int:
    """U^i_{k,a}(n)."""
    return count(FamilySpec("Urefined", k, a, i), n)


@lru_cache(maxsize=None)
def _transfer(spec: FamilySpec, N: int) -> SeriesXQ:
    # state: frequency pair at the current size -> {(m, n): count}
    states: dict[Freq, dict[tuple[int, int], int]] = {_EMPTY: {(0, 0): 1}}
    bar_choices = (0, 1) if spec.overlines else (0,)
    top = max(N, 1)
    for l in range(1, top + 1):
        nxt: dict[Freq, dict[tuple[int, int], int]] = {}
        for prev, table in states.items():
            min_w = min(w for _, w in table)
            for fb in bar_choices:
                f = 0
                while (f + fb) * l + min_w <= N:
                    cur = (f, fb)
                    if spec.size_ok(l, cur) and spec.pair_ok(l - 1, prev, cur):
                        dm, dw = f + fb, (f + fb) * l
                        out = nxt.setdefault(cur, {})
                        for (m, w), c in table.items():
                            if w + dw <= N:
                                key = (m + dm, w + dw)
                                out[key] = out.get(key, 0) + c
                    f += 1
        states = nxt
    total: dict[tuple[int, int], int] = defaultdict(int)
    for prev, table in states.items():
        if not spec.pair_ok(top, prev, _EMPTY):
            continue
        for key, c in table.items():
            total[key] += c
    return SeriesXQ.from_dict(dict(total), N)


def family_series_xq(spec: FamilySpec, N: int) -> SeriesXQ:
    """sum_{m,n <= N} (count with m parts, weight n) x^m q^n."""
    return _transfer(spec, N)


def family_series(spec: FamilySpec, N: int) -> SeriesQ:
    """sum_{n <= N} count(spec, n) q^n."""
    return _transfer(spec, N).at_x_one()
