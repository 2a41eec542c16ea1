"""Exact truncated formal power series in q and in (x, q).

``SeriesQ`` holds c_0..c_N as Python ints.  ``SeriesXQ`` holds, for each
power q^n with n <= N, a polynomial in x stored as a tuple of ints by
ascending x-power (trailing zeros trimmed).  Both are immutable.

Truncation is never extended silently: binary operations require equal
orders, and substitutions that would need coefficients beyond the operand's
order raise :class:`PrecisionError`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "SeriesError",
    "PrecisionError",
    "SeriesQ",
    "SeriesXQ",
    "Pochhammer",
    "ProductSpec",
    "expand_product",
    "pochhammer",
    "triple",
    "mul",
    "invert",
    "scale_substitute",
    "coeff",
    "coeff_xq",
]


class SeriesError(ValueError):
    """Usage or domain error in series arithmetic."""


class PrecisionError(SeriesError):
    """An operation needs coefficients beyond the operand's truncation order."""


def _trim(poly: Iterable[int]) -> tuple[int, ...]:
    p = list(poly)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def _poly_add(a: Sequence[int], b: Sequence[int], sign: int = 1) -> list[int]:
    if len(a) < len(b):
        out = list(a) + [0] * (len(b) - len(a))
    else:
        out = list(a)
    for i, c in enumerate(b):
        out[i] += sign * c
    return out


def _poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    return out


class SeriesQ:
    """Truncated series c_0 + c_1 q + ... + c_N q^N with exact coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[int], N: int | None = None):
        c = [int(v) for v in coeffs]
        if N is not None:
            if N < 0:
                raise SeriesError("truncation order must be non-negative")
            c = (c + [0] * (N + 1))[: N + 1]
        if not c:
            raise SeriesError("a series needs at least the constant coefficient")
        self._c = tuple(c)

    # construction helpers
    @classmethod
    def zero(cls, N: int) -> "SeriesQ":
        return cls([0] * (N + 1))

    @classmethod
    def one(cls, N: int) -> "SeriesQ":
        return cls([1], N)

    @classmethod
    def monomial(cls, e: int, N: int, c: int = 1) -> "SeriesQ":
        out = [0] * (N + 1)
        if 0 <= e <= N:
            out[e] = c
        return cls(out)

    @property
    def N(self) -> int:
        return len(self._c) - 1

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self._c

    def __getitem__(self, n: int) -> int:
        return coeff(self, n)

    def __iter__(self):
        return iter(self._c)

    def __len__(self):
        return len(self._c)

    def __eq__(self, other):
        if isinstance(other, SeriesQ):
            return self._c == other._c
        return NotImplemented

    def __hash__(self):
        return hash(self._c)

    def __repr__(self):
        return f"SeriesQ(N={self.N}, {list(self._c)})"

    def _check(self, other: "SeriesQ") -> None:
        if not isinstance(other, SeriesQ):
            raise SeriesError(f"cannot combine SeriesQ with {type(other).__name__}")
        if other.N != self.N:
            raise SeriesError(f"mismatched truncation orders {self.N} and {other.N}")

    def __add__(self, other: "SeriesQ") -> "SeriesQ":
        self._check(other)
        return SeriesQ(a + b for a, b in zip(self._c, other._c))

    def __sub__(self, other: "SeriesQ") -> "SeriesQ":
        self._check(other)
        return SeriesQ(a - b for a, b in zip(self._c, other._c))

    def __neg__(self) -> "SeriesQ":
        return SeriesQ(-a for a in self._c)

    def __mul__(self, other):
        if isinstance(other, int):
            return SeriesQ(other * a for a in self._c)
        self._check(other)
        return mul(self, other)

    __rmul__ = __mul__

    def shift(self, e: int) -> "SeriesQ":
        """Multiply by q^e, dropping what falls beyond q^N."""
        if e < 0:
            raise SeriesError("negative q-shift")
        N = self.N
        return SeriesQ([0] * min(e, N + 1) + list(self._c[: max(N + 1 - e, 0)]))

    def truncate(self, N: int) -> "SeriesQ":
        if N > self.N:
            raise PrecisionError(f"cannot raise truncation from {self.N} to {N}")
        return SeriesQ(self._c[: N + 1])

    def substitute_q(self, m: int) -> "SeriesQ":
        """q -> q^m, truncated at the same order."""
        if m < 1:
            raise SeriesError("q-power must be >= 1")
        N = self.N
        out = [0] * (N + 1)
        for n, c in enumerate(self._c):
            if n * m > N:
                break
            out[n * m] = c
        return SeriesQ(out)

    def compress_q(self, m: int) -> "SeriesQ":
        """Inverse of ``substitute_q``: keep every m-th coefficient."""
        if any(c for n, c in enumerate(self._c) if n % m):
            raise SeriesError(f"series is not a series in q^{m}")
        return SeriesQ(self._c[::m])

    def to_json(self) -> dict:
        return {"N": self.N, "coeffs": [str(c) for c in self._c]}

    @classmethod
    def from_json(cls, data: dict) -> "SeriesQ":
        return cls([int(c) for c in data["coeffs"]], int(data["N"]))


class SeriesXQ:
    """Truncated two-variable series sum_n p_n(x) q^n, n <= N.

    ``rows[n]`` is the coefficient polynomial p_n as a tuple by ascending
    x-power.  No x-degree cap is imposed here; family series satisfy
    deg p_n <= n, kernel series need not (see ``max_x_excess``).
    """

    __slots__ = ("_rows",)

    def __init__(self, rows: Iterable[Iterable[int]], N: int | None = None):
        r = [_trim(int(c) for c in p) for p in rows]
        if N is not None:
            if N < 0:
                raise SeriesError("truncation order must be non-negative")
            r = (r + [()] * (N + 1))[: N + 1]
        if not r:
            raise SeriesError("a series needs at least the constant coefficient")
        self._rows = tuple(r)

    @classmethod
    def zero(cls, N: int) -> "SeriesXQ":
        return cls([()] * (N + 1))

    @classmethod
    def one(cls, N: int) -> "SeriesXQ":
        return cls([(1,)], N)

    @classmethod
    def monomial(cls, m: int, e: int, N: int, c: int = 1) -> "SeriesXQ":
        """c * x^m q^e."""
        rows: list[tuple[int, ...]] = [()] * (N + 1)
        if 0 <= e <= N:
            rows[e] = (0,) * m + (c,)
        return cls(rows)

    @classmethod
    def from_q(cls, f: SeriesQ) -> "SeriesXQ":
        return cls([(c,) for c in f.coeffs])

    @classmethod
    def from_dict(cls, terms: dict[tuple[int, int], int], N: int) -> "SeriesXQ":
        """Build from {(m, n): coefficient of x^m q^n}; terms with n > N are dropped."""
        rows: list[list[int]] = [[] for _ in range(N + 1)]
        for (m, n), c in terms.items():
            if n > N or not c:
                continue
            row = rows[n]
            if len(row) <= m:
                row.extend([0] * (m + 1 - len(row)))
            row[m] += c
        return cls(rows)

    @property
    def N(self) -> int:
        return len(self._rows) - 1

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self._rows

    def x_degree(self, n: int) -> int:
        """Degree in x of the q^n coefficient (-1 for the zero polynomial)."""
        return len(self._rows[n]) - 1

    def max_x_excess(self) -> int:
        """max over n of deg_x(p_n) - n; <= 0 for every family series."""
        return max((len(p) - 1 - n for n, p in enumerate(self._rows) if p), default=-1)

    def __eq__(self, other):
        if isinstance(other, SeriesXQ):
            return self._rows == other._rows
        return NotImplemented

    def __hash__(self):
        return hash(self._rows)

    def __repr__(self):
        return f"SeriesXQ(N={self.N}, {[list(p) for p in self._rows]})"

    def items(self):
        """Yield (m, n, c) for every non-zero coefficient, ordered by (n, m)."""
        for n, p in enumerate(self._rows):
            for m, c in enumerate(p):
                if c:
                    yield m, n, c

    def _check(self, other: "SeriesXQ") -> None:
        if not isinstance(other, SeriesXQ):
            raise SeriesError(f"cannot combine SeriesXQ with {type(other).__name__}")
        if other.N != self.N:
            raise SeriesError(f"mismatched truncation orders {self.N} and {other.N}")

    def __add__(self, other: "SeriesXQ") -> "SeriesXQ":
        self._check(other)
        return SeriesXQ(_poly_add(a, b) for a, b in zip(self._rows, other._rows))

    def __sub__(self, other: "SeriesXQ") -> "SeriesXQ":
        self._check(other)
        return SeriesXQ(_poly_add(a, b, -1) for a, b in zip(self._rows, other._rows))

    def __neg__(self) -> "SeriesXQ":
        return SeriesXQ([-c for c in p] for p in self._rows)

    def __mul__(self, other):
        if isinstance(other, int):
            return SeriesXQ([other * c for c in p] for p in self._rows)
        self._check(other)
        return mul(self, other)

    __rmul__ = __mul__

    def times_monomial(self, m: int, e: int, c: int = 1) -> "SeriesXQ":
        """Multiply by c * x^m q^e (m, e >= 0)."""
        if m < 0 or e < 0:
            raise SeriesError("monomial exponents must be non-negative")
        N = self.N
        rows: list[tuple[int, ...]] = [()] * (N + 1)
        for n in range(N + 1 - e):
            p = self._rows[n]
            if p:
                rows[n + e] = (0,) * m + tuple(c * v for v in p)
        return SeriesXQ(rows)

    def truncate(self, N: int) -> "SeriesXQ":
        if N > self.N:
            raise PrecisionError(f"cannot raise truncation from {self.N} to {N}")
        return SeriesXQ(self._rows[: N + 1])

    def at_x_one(self) -> SeriesQ:
        """Specialize x = 1."""
        return SeriesQ(sum(p) for p in self._rows)

    def x_slice(self, m_max: int) -> "SeriesXQ":
        """Drop every x^m with m > m_max (a ring truncation in x)."""
        return SeriesXQ(p[: m_max + 1] for p in self._rows)

    def to_json(self) -> dict:
        return {"N": self.N, "coeffs": [[str(c) for c in p] for p in self._rows]}

    @classmethod
    def from_json(cls, data: dict) -> "SeriesXQ":
        return cls([[int(c) for c in p] for p in data["coeffs"]], int(data["N"]))


def coeff(f: SeriesQ, n: int) -> int:
    """Coefficient of q^n."""
    if not 0 <= n <= f.N:
        raise SeriesError(f"q^{n} is outside truncation order {f.N}")
    return f.coeffs[n]


def coeff_xq(f: SeriesXQ, m: int, n: int) -> int:
    """Coefficient of x^m q^n."""
    if not 0 <= n <= f.N:
        raise SeriesError(f"q^{n} is outside truncation order {f.N}")
    if m < 0:
        raise SeriesError("negative x-power")
    p = f.rows[n]
    return p[m] if m < len(p) else 0


def mul(f, g):
    """Cauchy product truncated at the common order."""
    if type(f) is not type(g):
        raise SeriesError("cannot multiply SeriesQ by SeriesXQ; lift with SeriesXQ.from_q")
    if f.N != g.N:
        raise SeriesError(f"mismatched truncation orders {f.N} and {g.N}")
    N = f.N
    if isinstance(f, SeriesQ):
        a, b = f.coeffs, g.coeffs
        out = [0] * (N + 1)
        for i, ca in enumerate(a):
            if ca:
                for j in range(N + 1 - i):
                    out[i + j] += ca * b[j]
        return SeriesQ(out)
    a, b = f.rows, g.rows
    rows: list[list[int]] = [[] for _ in range(N + 1)]
    for i, pa in enumerate(a):
        if not pa:
            continue
        for j in range(N + 1 - i):
            if b[j]:
                rows[i + j] = _poly_add(rows[i + j], _poly_mul(pa, b[j]))
    return SeriesXQ(rows)


def invert(f):
    """Multiplicative inverse of a series whose constant term is 1 or -1."""
    if isinstance(f, SeriesQ):
        c0 = f.coeffs[0]
        if c0 not in (1, -1):
            raise SeriesError(f"constant term {c0} is not a unit")
        a = f.coeffs
        N = f.N
        g = [0] * (N + 1)
        g[0] = c0
        for n in range(1, N + 1):
            s = sum(a[j] * g[n - j] for j in range(1, n + 1))
            g[n] = -c0 * s
        return SeriesQ(g)
    if isinstance(f, SeriesXQ):
        p0 = f.rows[0]
        if p0 not in ((1,), (-1,)):
            raise SeriesError(f"constant coefficient {list(p0)} is not a unit")
        c0 = p0[0]
        a = f.rows
        N = f.N
        g: list[list[int]] = [[] for _ in range(N + 1)]
        g[0] = [c0]
        for n in range(1, N + 1):
            s: list[int] = []
            for j in range(1, n + 1):
                if a[j] and g[n - j]:
                    s = _poly_add(s, _poly_mul(a[j], g[n - j]))
            g[n] = [-c0 * v for v in s]
        return SeriesXQ(g)
    raise SeriesError(f"cannot invert {type(f).__name__}")


def scale_substitute(f: SeriesXQ, e: int = 0, m: int = 1, d: int = 1, N: int | None = None) -> SeriesXQ:
    """Formal substitution x -> x^d q^e, q -> q^m.

    The result has order ``N`` (default: the operand's order).  A term
    x^j q^n lands at q^(m n + e j), so every target power up to N is fully
    determined as long as m * f.N >= N; otherwise :class:`PrecisionError`.
    """
    if e < 0 or m < 1 or d not in (1, 2):
        raise SeriesError("need e >= 0, m >= 1, d in {1, 2}")
    if N is None:
        N = f.N
    if m * (f.N + 1) <= N:
        raise PrecisionError(
            f"q -> q^{m} on an order-{f.N} operand cannot fill order {N}"
        )
    rows: list[list[int]] = [[] for _ in range(N + 1)]
    for n, p in enumerate(f.rows):
        base = m * n
        if base > N:
            break
        for j, c in enumerate(p):
            if not c:
                continue
            t = base + e * j
            if t > N:
                if e == 0:
                    break
                continue
            row = rows[t]
            xm = d * j
            if len(row) <= xm:
                row.extend([0] * (xm + 1 - len(row)))
            row[xm] += c
    return SeriesXQ(rows)


# -- products ---------------------------------------------------------------


@dataclass(frozen=True)
class Pochhammer:
    """(s x^e q^c; q^d)_n, or the infinite product when ``length`` is None.

    Expands to prod_{j < n} (1 - s x^e q^(c + j d)).  ``inverse`` puts the
    factor in the denominator.  So (-q; q^2)_oo is ``Pochhammer(1, 2, sign=-1)``.
    """

    c: int
    d: int = 1
    length: int | None = None
    sign: int = 1
    x_power: int = 0
    inverse: bool = False

    def __post_init__(self):
        if self.d < 1:
            raise SeriesError(f"Pochhammer step must be >= 1, got {self.d}")
        if self.c < 0:
            raise SeriesError("Pochhammer base exponent must be >= 0")
        if self.sign not in (1, -1):
            raise SeriesError("sign must be +1 or -1")
        if self.length is not None and self.length < 0:
            raise SeriesError("finite Pochhammer length must be >= 0")
        if self.inverse and self.c == 0 and self.x_power == 0 and self.sign == 1 and self.length != 0:
            raise SeriesError("1/(1;q)_n is a division by zero")

    @property
    def uses_x(self) -> bool:
        return self.x_power != 0


@dataclass(frozen=True)
class ProductSpec:
    factors: tuple[Pochhammer, ...] = ()
    scalar: int = 1
    q_shift: int = 0

    @property
    def uses_x(self) -> bool:
        return any(f.uses_x for f in self.factors)

    def __mul__(self, other: "ProductSpec") -> "ProductSpec":
        return ProductSpec(self.factors + other.factors, self.scalar * other.scalar, self.q_shift + other.q_shift)


def pochhammer(*args, **kwargs) -> ProductSpec:
    return ProductSpec((Pochhammer(*args, **kwargs),))


def triple(a: int, M: int, inverse: bool = False) -> ProductSpec:
    """(q^a, q^(M-a), q^M; q^M)_oo."""
    return ProductSpec(tuple(Pochhammer(c, M, inverse=inverse) for c in (a, M - a, M)))


def _binomial_exponents(fac: Pochhammer, N: int):
    j = 0
    while fac.length is None or j < fac.length:
        t = fac.c + j * fac.d
        if t > N:
            break
        yield t
        j += 1


def expand_product(spec: ProductSpec, N: int):
    """Exact expansion of a product of (finite or infinite) Pochhammer symbols.

    Returns a :class:`SeriesQ` unless some factor carries x, in which case a
    :class:`SeriesXQ`.  Each binomial (1 - s x^e q^t) is applied in place:
    multiplication is one pass, division is the geometric-series pass.
    """
    if N < 0:
        raise SeriesError("truncation order must be non-negative")
    if spec.q_shift < 0:
        raise SeriesError("negative q-shift")
    use_x = spec.uses_x
    # dense grid: rows[n][m]
    X = 0
    if use_x:
        for fac in spec.factors:
            if fac.x_power:
                for t in _binomial_exponents(fac, N):
                    X += fac.x_power * (N // t if t else 0) if fac.inverse else fac.x_power
        X = max(X, 0)
    rows = [[0] * (X + 1) for _ in range(N + 1)]
    if spec.q_shift <= N:
        rows[spec.q_shift][0] = spec.scalar
    for fac in spec.factors:
        s, e = fac.sign, fac.x_power
        for t in _binomial_exponents(fac, N):
            if t == 0 and e == 0:
                if fac.inverse:
                    # 1/(1 - s): only s = -1 reaches here, i.e. 1/2
                    raise SeriesError("inverse factor with constant term 2 is not a unit")
                if s == 1:
                    return SeriesXQ.zero(N) if use_x else SeriesQ.zero(N)
                rows = [[2 * v for v in r] for r in rows]
                continue
            if fac.inverse:
                if t == 0:
                    raise SeriesError("inverse factor with x-only constant term is not a unit series")
                for n in range(t, N + 1):
                    src, dst = rows[n - t], rows[n]
                    for m in range(e, X + 1):
                        if src[m - e]:
                            dst[m] += s * src[m - e]
            else:
                for n in range(N, t - 1, -1):
                    src, dst = rows[n - t], rows[n]
                    for m in range(X, e - 1, -1):
                        if src[m - e]:
                            dst[m] -= s * src[m - e]
    if use_x:
        return SeriesXQ(rows)
    return SeriesQ(r[0] for r in rows)
