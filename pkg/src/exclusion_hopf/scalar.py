"""Exact arithmetic in cyclotomic fields Q(zeta_m).

Elements are stored in the power basis 1, z, ..., z^(n-1) with n = phi(m),
as an integer numerator vector over a positive common denominator. Elements
of different orders combine by lifting both into Q(zeta_lcm).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

from .kernels import MulKernel

Rational = Union[int, Fraction]


# -- polynomial helpers over Z (coefficient lists, lowest degree first) ------

def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        if c % lead:
            raise ArithmeticError("inexact polynomial division")
        c //= lead
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise ValueError("cyclotomic order must be positive")
    rad = math.prod(_prime_factors(m))
    if rad != m:
        # Phi_m(x) = Phi_rad(x^(m/rad))
        base = cyclotomic_polynomial(rad)
        step = m // rad
        out = [0] * ((len(base) - 1) * step + 1)
        for i, c in enumerate(base):
            out[i * step] = c
        return tuple(out)
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def _mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


def euler_phi(n: int) -> int:
    out = n
    for p in _prime_factors(n):
        out = out // p * (p - 1)
    return out


DENSE_LIMIT = 512


class _Field:
    """Per-order reduction of z^e, conjugation, traces and embeddings.

    Small fields precompute dense tables and use the multiplication kernel;
    large ones (degree above DENSE_LIMIT) reduce sparsely on demand.
    """

    def __init__(self, m: int) -> None:
        self.m = m
        phi = cyclotomic_polynomial(m)
        n = len(phi) - 1
        self.n = n
        self.phi_tail = tuple((i, -c) for i, c in enumerate(phi[:n]) if c)  # z^n = sum
        self.dense = n <= DENSE_LIMIT
        self._rows: dict[int, tuple[tuple[int, int], ...]] = {}
        self._roots: dict[int, complex] = {}
        if self.dense:
            top = max(2 * n - 1, m + 1)
            rows: list[tuple[int, ...]] = []
            cur = [0] * n
            cur[0] = 1
            for _ in range(top):
                rows.append(tuple(cur))
                carry = cur[-1]
                cur = [0] + cur[:-1]
                if carry:
                    for i, c in self.phi_tail:
                        cur[i] += carry * c
            self.power_rows = rows  # power_rows[e] = z^e reduced, 0 <= e < top
            self.kernel = MulKernel(rows[n : 2 * n - 1], n)

    def row(self, e: int) -> tuple[tuple[int, int], ...]:
        """Sparse (index, value) form of z^e."""
        e %= self.m
        hit = self._rows.get(e)
        if hit is not None:
            return hit
        n = self.n
        if e < n:
            out = ((e, 1),)
        elif self.dense:
            out = tuple((i, v) for i, v in enumerate(self.power_rows[e]) if v)
        else:
            acc: dict[int, int] = {e: 1}
            high = [e]
            while high:
                top = max(high)
                c = acc.pop(top)
                for i, v in self.phi_tail:
                    x = top - n + i
                    acc[x] = acc.get(x, 0) + c * v
                    if not acc[x]:
                        del acc[x]
                high = [x for x in acc if x >= n]
            out = tuple(sorted(acc.items()))
        self._rows[e] = out
        return out

    def reduce_exponents(self, pairs: Iterable[tuple[int, int]]) -> list[int]:
        """Sum of c * z^e over (e, c) pairs, as a basis vector."""
        out = [0] * self.n
        for e, c in pairs:
            if c:
                for i, v in self.row(e):
                    out[i] += c * v
        return out

    def mul(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        if self.dense:
            return self.kernel.mul(a, b)
        sa = [(i, x) for i, x in enumerate(a) if x]
        sb = [(j, y) for j, y in enumerate(b) if y]
        conv: dict[int, int] = {}
        for i, x in sa:
            for j, y in sb:
                conv[i + j] = conv.get(i + j, 0) + x * y
        return tuple(self.reduce_exponents(conv.items()))

    def conj(self, num: tuple[int, ...]) -> list[int]:
        return self.reduce_exponents(((-j) % self.m, c) for j, c in enumerate(num) if c)

    def root(self, j: int) -> complex:
        r = self._roots.get(j)
        if r is None:
            r = self._roots[j] = cmath.exp(2j * math.pi * j / self.m)
        return r

    def norm_trace(self, j: int) -> Fraction:
        d = self.m // math.gcd(j, self.m)
        return Fraction(_mobius(d), euler_phi(d))


@lru_cache(maxsize=None)
def _field(m: int) -> _Field:
    return _Field(m)


def _normalize(num: list[int] | tuple[int, ...], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        num = [-c for c in num]
        den = -den
    g = math.gcd(den, *num)
    if g == 0:
        return tuple(num), 1
    if g != 1:
        num = [c // g for c in num]
        den //= g
    if not any(num):
        den = 1
    return tuple(num), den


class Cyclotomic:
    """An element of Q(zeta_m) in canonical reduced form.

    Two elements of the same order are equal iff their normalized numerator
    vectors and denominators agree. Mixed orders compare in the common field.
    """

    __slots__ = ("m", "num", "den")

    def __init__(self, m: int, num: Iterable[int], den: int = 1) -> None:
        if m < 1:
            raise ValueError("cyclotomic order must be positive")
        num = list(num)
        field = _field(m)
        if len(num) != field.n:
            raise ValueError(f"expected {field.n} coefficients for order {m}")
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        self.m = m
        self.num, self.den = _normalize(num, den)

    # -- construction ------------------------------------------------------

    @classmethod
    def _raw(cls, m: int, num: tuple[int, ...], den: int) -> Cyclotomic:
        obj = object.__new__(cls)
        obj.m = m
        obj.num, obj.den = _normalize(num, den)
        return obj

    @classmethod
    def rational(cls, value: Rational, m: int = 1) -> Cyclotomic:
        value = Fraction(value)
        n = _field(m).n
        return cls._raw(m, (value.numerator,) + (0,) * (n - 1), value.denominator)

    @classmethod
    def from_exponents(cls, m: int, terms: Iterable[tuple[int, Rational]]) -> Cyclotomic:
        """Build sum(c * zeta_m^e) from (e, c) pairs with rational c."""
        terms = [(e, Fraction(c)) for e, c in terms]
        den = math.lcm(1, *(c.denominator for _, c in terms))
        pairs = [(e, c.numerator * (den // c.denominator)) for e, c in terms]
        return cls._raw(m, tuple(_field(m).reduce_exponents(pairs)), den)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        """Length-m rational coefficient vector over the powers of zeta_m."""
        out = [Fraction(c, self.den) for c in self.num]
        return tuple(out) + (Fraction(0),) * (self.m - len(out))

    # -- coercion ------------------------------------------------------------

    def lift(self, m: int) -> Cyclotomic:
        """The same element viewed in Q(zeta_m); ``self.m`` must divide m."""
        if m == self.m:
            return self
        if m % self.m:
            raise ValueError(f"Q(zeta_{self.m}) is not a subfield of Q(zeta_{m})")
        step = m // self.m
        num = _field(m).reduce_exponents((j * step, c) for j, c in enumerate(self.num))
        return Cyclotomic._raw(m, tuple(num), self.den)

    def _coerce(self, other: object) -> tuple[Cyclotomic, Cyclotomic] | None:
        if isinstance(other, Cyclotomic):
            if other.m == self.m:
                return self, other
            m = math.lcm(self.m, other.m)
            return self.lift(m), other.lift(m)
        if isinstance(other, (int, Fraction)):
            return self, Cyclotomic.rational(other, self.m)
        return None

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: object) -> Cyclotomic:
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        if x.den == y.den:
            return Cyclotomic._raw(x.m, tuple(a + b for a, b in zip(x.num, y.num)), x.den)
        den = x.den * y.den // math.gcd(x.den, y.den)
        fx, fy = den // x.den, den // y.den
        return Cyclotomic._raw(x.m, tuple(a * fx + b * fy for a, b in zip(x.num, y.num)), den)

    __radd__ = __add__

    def __neg__(self) -> Cyclotomic:
        return Cyclotomic._raw(self.m, tuple(-c for c in self.num), self.den)

    def __sub__(self, other: object) -> Cyclotomic:
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return x + (-y)

    def __rsub__(self, other: object) -> Cyclotomic:
        return (-self) + other

    def __mul__(self, other: object) -> Cyclotomic:
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return Cyclotomic._raw(
                self.m,
                tuple(c * other.numerator for c in self.num),
                self.den * other.denominator,
            )
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        num = _field(x.m).mul(x.num, y.num)
        return Cyclotomic._raw(x.m, num, x.den * y.den)

    __rmul__ = __mul__

    def conj(self) -> Cyclotomic:
        """Complex conjugate: the automorphism zeta -> zeta^-1."""
        return Cyclotomic._raw(self.m, tuple(_field(self.m).conj(self.num)), self.den)

    def inv(self) -> Cyclotomic:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic element")
        if self.is_rational():
            return Cyclotomic.rational(1 / self.rational_value(), self.m)
        bar = self.conj()
        norm2 = self * bar
        if norm2.is_rational():
            return bar * (1 / norm2.rational_value())
        return self._inv_linear_solve()

    def _inv_linear_solve(self) -> Cyclotomic:
        # columns: self * z^j in the basis; solve M y = e_0
        field = _field(self.m)
        n = field.n
        cols = [field.mul(self.num, tuple(field.reduce_exponents([(j, 1)]))) for j in range(n)]
        mat = [[Fraction(cols[j][i]) for j in range(n)] + [Fraction(int(i == 0))] for i in range(n)]
        for col in range(n):
            piv = next(r for r in range(col, n) if mat[r][col] != 0)
            mat[col], mat[piv] = mat[piv], mat[col]
            p = mat[col][col]
            mat[col] = [v / p for v in mat[col]]
            for r in range(n):
                if r != col and mat[r][col] != 0:
                    f = mat[r][col]
                    mat[r] = [a - f * b for a, b in zip(mat[r], mat[col])]
        sol = [mat[i][n] for i in range(n)]
        den = math.lcm(*(v.denominator for v in sol))
        return Cyclotomic._raw(self.m, tuple(int(v * den) * self.den for v in sol), den)

    def __truediv__(self, other: object) -> Cyclotomic:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        if isinstance(other, Cyclotomic):
            return self * other.inv()
        return NotImplemented

    def __rtruediv__(self, other: object) -> Cyclotomic:
        return self.inv() * other

    def __pow__(self, e: int) -> Cyclotomic:
        if e < 0:
            return self.inv() ** (-e)
        result = Cyclotomic.rational(1, self.m)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- predicates & comparison ---------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(self.num[0], self.den)

    def is_real(self) -> bool:
        return self == self.conj()

    def __eq__(self, other: object) -> bool:
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        x, y = pair
        return x.num == y.num and x.den == y.den

    def __hash__(self) -> int:
        # normalized trace is independent of the ambient field
        field = _field(self.m)
        tr = sum((c * field.norm_trace(j) for j, c in enumerate(self.num) if c), Fraction(0))
        return hash(tr / self.den)

    # -- floating embedding --------------------------------------------------

    def to_complex(self) -> complex:
        field = _field(self.m)
        total = sum(c * field.root(j) for j, c in enumerate(self.num) if c)
        return complex(total) / self.den

    def __complex__(self) -> complex:
        return self.to_complex()

    def __repr__(self) -> str:
        return f"Cyclotomic({self.m}, {list(self.num)}, {self.den})"

    def __str__(self) -> str:
        parts = []
        for j, c in enumerate(self.num):
            if not c:
                continue
            coef = Fraction(c, self.den)
            if j == 0:
                parts.append(str(coef))
                continue
            mono = f"z{self.m}" if j == 1 else f"z{self.m}^{j}"
            if coef == 1:
                parts.append(mono)
            elif coef == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{coef}*{mono}")
        if not parts:
            return "0"
        return " + ".join(parts).replace("+ -", "- ")


def cyc_root(m: int, j: int) -> Cyclotomic:
    """zeta_m ** j in canonical form."""
    if m < 1:
        raise ValueError("cyclotomic order must be positive")
    return Cyclotomic.from_exponents(m, [(j % m, 1)])


def rational(value: Rational, m: int = 1) -> Cyclotomic:
    return Cyclotomic.rational(value, m)


def sqrt2(m: int = 8) -> Cyclotomic:
    """sqrt(2) = zeta_8 + zeta_8^-1, lifted to Q(zeta_m) (8 must divide m)."""
    return (cyc_root(8, 1) + cyc_root(8, 7)).lift(m)


def field_order(k: int) -> int:
    """Working field order for exclusion order k.

    q = zeta_{4k}; the group-like coproduct scale needs a fourth root of
    +-q^2, which lives in Q(zeta_{8k}); sqrt(2) is also there.
    """
    return 8 * k


@dataclass(frozen=True)
class UnitParam:
    """A field element, optionally flagged as having unit modulus."""

    value: Cyclotomic
    claimed_unit_modulus: bool = True

    def __post_init__(self) -> None:
        if self.claimed_unit_modulus and self.value * self.value.conj() != 1:
            raise ValueError(f"{self.value} does not have unit modulus")


__all__ = [
    "Cyclotomic",
    "UnitParam",
    "cyc_root",
    "cyclotomic_polynomial",
    "euler_phi",
    "field_order",
    "rational",
    "sqrt2",
]
