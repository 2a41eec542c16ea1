"""The overpartition kernel in doubled-index form, its relations, and multisums.

``qbar_doubled(K, I, N)`` returns DQ_{K,I}(x; q) = Qbar_{K/2, I/2}(x^2; q^2),
where Qbar_{k,i}(x; q) is the generating function of B̄_{k,i}(m, n) by
number of parts (x) and weight (q).  Working at (x^2, q^2) keeps every
exponent integral when k or i is a half-integer, so the even-modulus and
odd-modulus cases share one code path.

The relation helpers return ``(lhs, rhs)`` pairs of :class:`SeriesXQ` for the
checker in :mod:`rrgparity.identities`; they do not compare anything
themselves.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .series import (
    Pochhammer,
    ProductSpec,
    SeriesError,
    SeriesQ,
    SeriesXQ,
    expand_product,
    scale_substitute,
)

__all__ = [
    "DoubledIndex",
    "MultisumSpec",
    "MULTISUM_VARIANTS",
    "qbar_doubled",
    "reflect_minus",
    "shift_relation_sides",
    "double_recurrence_sides",
    "multisum",
    "kernel_at_x_one",
]


@dataclass(frozen=True)
class DoubledIndex:
    """(K, I) = (2k, 2i); half-integer k or i show up as odd K or I."""

    K: int
    I: int

    def __post_init__(self):
        if self.K < 1:
            raise SeriesError(f"doubled index K must be >= 1, got {self.K}")
        if self.I < -1:
            raise SeriesError(f"doubled index I must be >= -1, got {self.I}")

    @classmethod
    def from_halves(cls, k2: int, i2: int) -> "DoubledIndex":
        return cls(k2, i2)


def _tail_spec(n: int) -> ProductSpec:
    """(-x^2 q^(2n+2); q^2)_oo (-q^2; q^2)_n / ((q^2; q^2)_n (x^2 q^(2n+2); q^2)_oo)."""
    return ProductSpec(
        (
            Pochhammer(2 * n + 2, 2, sign=-1, x_power=2),
            Pochhammer(2, 2, length=n, sign=-1),
            Pochhammer(2, 2, length=n, inverse=True),
            Pochhammer(2 * n + 2, 2, x_power=2, inverse=True),
        )
    )


def _outer_terms(K: int, I: int, N: int, sx: int, sq: int):
    """Yield (n, [(sign, x-exp, q-exp), ...]) for the prefactor
    (-1)^n x^{Kn} q^{Kn^2+Kn-In} (1 - x^I q^{(2n+1)I}) times x^sx q^sq.
    """
    if I > K + 1:
        raise SeriesError(f"DQ_{{{K},{I}}}: I > K + 1 breaks the outer-sum cutoff")
    n = 0
    while True:
        sgn = -1 if n % 2 else 1
        qe = K * n * n + K * n - I * n
        mons = [
            (sgn, K * n + sx, qe + sq),
            (-sgn, K * n + I + sx, qe + (2 * n + 1) * I + sq),
        ]
        # for -1 <= I <= K + 1 both q-exponents increase with n
        if min(m[2] for m in mons) > N:
            break
        for _, xe, qexp in mons:
            if xe < 0 or qexp < 0:
                raise SeriesError(
                    f"DQ_{{{K},{I}}} term n={n} has a negative exponent; multiply by a larger x^a q^b"
                )
        yield n, mons
        n += 1


@lru_cache(maxsize=None)
def _dq_cached(K: int, I: int, N: int, sx: int, sq: int) -> SeriesXQ:
    if I == 0:
        return SeriesXQ.zero(N)
    total = SeriesXQ.zero(N)
    for n, mons in _outer_terms(K, I, N, sx, sq):
        live = [(s, xe, qe) for s, xe, qe in mons if qe <= N]
        if not live:
            continue
        tail = expand_product(_tail_spec(n), N)
        for s, xe, qe in live:
            total = total + tail.times_monomial(xe, qe, s)
    return total


def qbar_doubled(idx: DoubledIndex | tuple[int, int], N: int, shift: tuple[int, int] = (0, 0)) -> SeriesXQ:
    """DQ_{K,I}(x; q) truncated at q^N, optionally times x^a q^b with ``shift=(a, b)``.

    The shift exists for I = -1, whose n = 0 term carries x^-1 q^-1; any
    other negative exponent is an error.
    """
    if isinstance(idx, tuple):
        idx = DoubledIndex(*idx)
    if N < 0:
        raise SeriesError("truncation order must be non-negative")
    return _dq_cached(idx.K, idx.I, N, shift[0], shift[1])


def kernel_at_x_one(K: int, I: int, N: int) -> SeriesQ:
    """Qbar_{K/2, I/2}(1; q): the doubled kernel at x = 1 with q^2 -> q.

    Needs DQ to order 2N.
    """
    return qbar_doubled((K, I), 2 * N).at_x_one().compress_q(2)


def reflect_minus(K: int, N: int) -> tuple[SeriesXQ, SeriesXQ]:
    """(x q) DQ_{K,-1}(x; q) and -DQ_{K,1}(x; q)."""
    lhs = qbar_doubled((K, -1), N, shift=(1, 1))
    rhs = -qbar_doubled((K, 1), N)
    return lhs, rhs


def _dq_at_shift(K: int, I: int, N: int, e: int) -> SeriesXQ:
    """DQ_{K,I}(x q^e; q) at order N."""
    if I == 0:
        return SeriesXQ.zero(N)
    return scale_substitute(qbar_doubled((K, I), N), e=e)


def shift_relation_sides(idx: DoubledIndex | tuple[int, int], N: int) -> tuple[SeriesXQ, SeriesXQ]:
    """Both sides of the shift relation at (x^2, q^2):

        DQ_{K,I}(x) - DQ_{K,I-2}(x) = (xq)^I DQ_{K,K-I}(xq) + (xq)^(I-2) DQ_{K,K-I+2}(xq)

    for 2 <= I <= K.  For I = 1 the I - 2 = -1 term is removed with the
    reflection, and both sides are multiplied by xq:

        (1 + xq) DQ_{K,1}(x) = (xq)^2 DQ_{K,K-1}(xq) + DQ_{K,K+1}(xq).
    """
    if isinstance(idx, tuple):
        idx = DoubledIndex(*idx)
    K, I = idx.K, idx.I
    if not 1 <= I <= K:
        raise SeriesError(f"shift relation needs 1 <= I <= K, got K={K}, I={I}")
    if I == 1:
        dq1 = qbar_doubled((K, 1), N)
        lhs = dq1 + dq1.times_monomial(1, 1)
        rhs = _dq_at_shift(K, K - 1, N, 1).times_monomial(2, 2) + _dq_at_shift(K, K + 1, N, 1)
        return lhs, rhs
    lhs = qbar_doubled((K, I), N) - qbar_doubled((K, I - 2), N)
    rhs = _dq_at_shift(K, K - I, N, 1).times_monomial(I, I) + _dq_at_shift(K, K - I + 2, N, 1).times_monomial(
        I - 2, I - 2
    )
    return lhs, rhs


def double_recurrence_sides(k: int, a: int, N: int) -> tuple[SeriesXQ, SeriesXQ]:
    """Both sides of the double recurrence for integer k >= a >= 0, doubled.

    lhs = DQ_{2k,2a}(x); rhs expresses it through DQ_{2k,2k-2h}(x q^2):

        sum_{i=1}^{a} (xq)^{2i} B_i + sum_{i=0}^{a-1} (xq)^{2i} B_i,
        B_i = sum_{h=1}^{k-i} (xq^2)^{2h} D_h + sum_{h=0}^{k-i-1} (xq^2)^{2h} D_h,
        D_h = DQ_{2k,2k-2h}(x q^2).
    """
    if not k >= a >= 0 or k < 1:
        raise SeriesError(f"double recurrence needs k >= a >= 0, k >= 1; got k={k}, a={a}")
    K = 2 * k
    D = {h: _dq_at_shift(K, K - 2 * h, N, 2) for h in range(0, k + 1)}

    def bracket(i: int) -> SeriesXQ:
        acc = SeriesXQ.zero(N)
        for h in range(1, k - i + 1):
            acc = acc + D[h].times_monomial(2 * h, 4 * h)
        for h in range(0, k - i):
            acc = acc + D[h].times_monomial(2 * h, 4 * h)
        return acc

    rhs = SeriesXQ.zero(N)
    for i in range(1, a + 1):
        rhs = rhs + bracket(i).times_monomial(2 * i, 2 * i)
    for i in range(0, a):
        rhs = rhs + bracket(i).times_monomial(2 * i, 2 * i)
    return qbar_doubled((K, 2 * a), N), rhs


# -- multisums --------------------------------------------------------------

MULTISUM_VARIANTS = ("andrews_gordon", "W_even_parity", "Wbar_parity")


@dataclass(frozen=True)
class MultisumSpec:
    k: int
    a: int
    variant: str = "andrews_gordon"

    def __post_init__(self):
        if self.variant not in MULTISUM_VARIANTS:
            raise SeriesError(f"unknown multisum variant {self.variant!r}; choose from {MULTISUM_VARIANTS}")
        if not self.k >= self.a >= 1:
            raise SeriesError(f"multisum needs k >= a >= 1, got k={self.k}, a={self.a}")
        if self.variant == "W_even_parity" and (self.k - self.a) % 2:
            raise SeriesError("W_even_parity multisum requires k ≡ a (mod 2)")
        if self.variant == "Wbar_parity" and not (self.k % 2 == 1 and self.a % 2 == 0):
            raise SeriesError("Wbar_parity multisum requires k odd and a even")

    def linear_exponent(self, Ns: tuple[int, ...]) -> int:
        """Linear part of the exponent; Ns[j-1] is N_j, and N_k := 0."""
        k, a = self.k, self.a
        N = lambda j: Ns[j - 1] if 1 <= j <= k - 1 else 0  # noqa: E731
        if self.variant == "andrews_gordon":
            return sum(N(j) for j in range(a, k))
        if self.variant == "W_even_parity":
            return sum(2 * N(j) for j in range(a, k - 1, 2))
        # n_j = N_j - N_{j+1}
        odd_n = sum(N(j) - N(j + 1) for j in range(1, a - 2, 2))
        return odd_n + sum(N(j) for j in range(a - 1, k))

    @property
    def step(self) -> int:
        return 1 if self.variant == "andrews_gordon" else 2


def _chains(length: int, budget: int, upper: int | None):
    """All non-increasing tuples of the given length with sum of squares <= budget."""
    if length == 0:
        yield ()
        return
    top = int(budget**0.5)
    if upper is not None:
        top = min(top, upper)
    for v in range(top, -1, -1):
        for rest in _chains(length - 1, budget - v * v, v):
            yield (v,) + rest


def multisum(spec: MultisumSpec, N: int) -> SeriesQ:
    """Truncated multisum over N_1 >= ... >= N_{k-1} >= 0.

    Summand: q^(sum N_j^2 + linear) / prod_j (q^d; q^d)_{N_j - N_{j+1}}, with
    d = 1 for the Andrews-Gordon sum and d = 2 for the parity variants.
    """
    d = spec.step
    inv_cache: dict[int, SeriesQ] = {}

    def inv_poch(m: int) -> SeriesQ:
        if m not in inv_cache:
            inv_cache[m] = expand_product(ProductSpec((Pochhammer(d, d, length=m, inverse=True),)), N)
        return inv_cache[m]

    total = SeriesQ.zero(N)
    for Ns in _chains(spec.k - 1, N, None):
        e = sum(v * v for v in Ns) + spec.linear_exponent(Ns)
        if e > N:
            continue
        term = SeriesQ.monomial(e, N)
        padded = Ns + (0,)
        for j in range(len(Ns)):
            term = term * inv_poch(padded[j] - padded[j + 1])
        total = total + term
    return total

