"""Exact arithmetic in cyclotomic fields Q(zeta_L).

Elements are stored in the power basis 1, z, ..., z^(d-1) modulo the L-th
cyclotomic polynomial, d = phi(L).  Internally a value is an integer vector
plus one positive common denominator, which keeps the hot loops on ints.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

Rational = Fraction


class ConductorMismatch(ValueError):
    pass


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # both low -> high, den monic; remainder must vanish
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            out[i - dd] = c
            for j in range(dd + 1):
                num[i - dd + j] -= c * den[j]
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(L: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_L, lowest degree first."""
    if L < 1:
        raise ValueError("conductor must be positive")
    poly = [-1] + [0] * (L - 1) + [1]
    for d in range(1, L):
        if L % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def _power_table(L: int) -> tuple[tuple[int, ...], ...]:
    """x^i mod Phi_L for i in [0, max(L, 2d-1)), as integer vectors."""
    phi = cyclotomic_polynomial(L)
    d = len(phi) - 1
    n = max(L, 2 * d - 1, 1)
    cur = [0] * d
    cur[0] = 1
    rows = []
    for _ in range(n):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for j in range(d):
                cur[j] -= top * phi[j]
    return tuple(rows)


def _normalize(num: list[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        num = [-x for x in num]
        den = -den
    g = den
    for x in num:
        if x:
            g = math.gcd(g, x)
            if g == 1:
                break
    if not any(num):
        return tuple(0 for _ in num), 1
    if g != 1:
        num = [x // g for x in num]
        den //= g
    return tuple(num), den


class CycNum:
    """An element of Q(zeta_L)."""

    __slots__ = ("conductor", "_num", "_den", "_hash")

    def __init__(self, conductor: int, coeffs: Sequence = ()):
        d = len(cyclotomic_polynomial(conductor)) - 1
        fr = [Fraction(c) for c in coeffs]
        if len(fr) > d:
            raise ValueError(f"expected at most {d} coefficients for conductor {conductor}")
        fr += [Fraction(0)] * (d - len(fr))
        den = 1
        for c in fr:
            den = den * c.denominator // math.gcd(den, c.denominator)
        num = [c.numerator * (den // c.denominator) for c in fr]
        self.conductor = conductor
        self._num, self._den = _normalize(num, den)
        self._hash = None

    @classmethod
    def _raw(cls, L: int, num, den: int) -> "CycNum":
        obj = object.__new__(cls)
        obj.conductor = L
        obj._num, obj._den = _normalize(list(num), den)
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, L: int) -> "CycNum":
        d = len(cyclotomic_polynomial(L)) - 1
        return cls._raw(L, [0] * d, 1)

    @classmethod
    def from_rational(cls, L: int, q) -> "CycNum":
        q = Fraction(q)
        d = len(cyclotomic_polynomial(L)) - 1
        num = [0] * d
        num[0] = q.numerator
        return cls._raw(L, num, q.denominator)

    @classmethod
    def from_int_vector(cls, L: int, vec: Sequence[int], den: int = 1) -> "CycNum":
        """Build from coefficients indexed by powers of zeta_L, any length."""
        table = _power_table(L)
        d = len(table[0])
        num = [0] * d
        for e, c in enumerate(vec):
            if c:
                row = table[e % L]
                for t in range(d):
                    if row[t]:
                        num[t] += c * row[t]
        return cls._raw(L, num, den)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self._den) for x in self._num)

    @property
    def degree(self) -> int:
        return len(self._num)

    def is_zero(self) -> bool:
        return not any(self._num)

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational element")
        return Fraction(self._num[0], self._den)

    def residue(self, p: int, w: int) -> int | None:
        """Image in F_p under zeta_L -> w (w of order L mod p); None if p divides the denominator."""
        if self._den % p == 0:
            return None
        acc = 0
        for c in reversed(self._num):
            acc = (acc * w + c) % p
        return acc * pow(self._den, -1, p) % p

    def is_integral_rational(self) -> bool:
        return self.is_rational() and self._den == 1

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "CycNum":
        if isinstance(other, CycNum):
            if other.conductor != self.conductor:
                raise ConductorMismatch(
                    f"conductor {self.conductor} vs {other.conductor}; embed first")
            return other
        if isinstance(other, (int, Fraction)):
            return CycNum.from_rational(self.conductor, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o._den == self._den:
            return CycNum._raw(self.conductor, [a + b for a, b in zip(self._num, o._num)], self._den)
        da, db = self._den, o._den
        return CycNum._raw(self.conductor, [a * db + b * da for a, b in zip(self._num, o._num)], da * db)

    __radd__ = __add__

    def __neg__(self):
        return CycNum._raw(self.conductor, [-a for a in self._num], self._den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CycNum._raw(self.conductor, [a * q.numerator for a in self._num], self._den * q.denominator)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.is_zero() or o.is_zero():
            return CycNum.zero(self.conductor)
        a, b = self._num, o._num
        d = len(a)
        if d == 1:
            return CycNum._raw(self.conductor, [a[0] * b[0]], self._den * o._den)
        prod = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        res = prod[:d]
        table = _power_table(self.conductor)
        for i in range(d, 2 * d - 1):
            c = prod[i]
            if c:
                row = table[i]
                for t in range(d):
                    if row[t]:
                        res[t] += c * row[t]
        return CycNum._raw(self.conductor, res, self._den * o._den)

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        L = self.conductor
        # extended Euclid: find s with s*a = 1 mod Phi_L
        a = _trim([Fraction(x, self._den) for x in self._num])
        m = _trim([Fraction(x) for x in cyclotomic_polynomial(L)])
        r0, r1 = m, a
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1 or r1[0] != 0:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _trim(_psub(s0, _pmul(q, s1)))
        # r0 is a nonzero constant since Phi_L is irreducible
        c = r0[0]
        coeffs = [x / c for x in s0]
        _, rem = _pdivmod(coeffs, m)
        return CycNum(L, rem + [Fraction(0)] * (self.degree - len(rem)))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = CycNum.from_rational(self.conductor, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self._num[0], self._den) == other
        if not isinstance(other, CycNum):
            return NotImplemented
        return (self.conductor == other.conductor and self._den == other._den
                and self._num == other._num)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.conductor, self._num, self._den))
        return self._hash

    def __repr__(self):
        return f"CycNum({self.conductor}, {format_power_basis(self)})"

    # -- conversions ------------------------------------------------------
    def embed(self, L2: int) -> "CycNum":
        L1 = self.conductor
        if L2 % L1:
            raise ValueError(f"conductor {L1} does not divide {L2}")
        if L1 == L2:
            return self
        step = L2 // L1
        vec = [0] * L2
        for i, c in enumerate(self._num):
            if c:
                vec[(i * step) % L2] += c
        return CycNum.from_int_vector(L2, vec, self._den)

    def approx_complex(self, precision_bits: int = 53) -> complex:
        L = self.conductor
        if precision_bits <= 53:
            z = cmath.exp(2j * math.pi / L)
            acc = 0j
            for c in reversed(self._num):
                acc = acc * z + c
            return acc / self._den
        import mpmath
        with mpmath.workprec(precision_bits):
            z = mpmath.expjpi(mpmath.mpf(2) / L)
            acc = mpmath.mpc(0)
            for c in reversed(self._num):
                acc = acc * z + c
            return complex(acc / self._den)

    def to_json(self) -> dict:
        return {"conductor": self.conductor,
                "coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "CycNum":
        return cls(int(obj["conductor"]), [Fraction(s) for s in obj["coeffs"]])


def _trim(p: list[Fraction]) -> list[Fraction]:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p or [Fraction(0)]


def _psub(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]


def _pmul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _pdivmod(a, b):
    a = _trim(a)
    b = _trim(b)
    if len(a) < len(b):
        return [Fraction(0)], a
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    r = list(a)
    lead = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = r[i + len(b) - 1] / lead
        q[i] = c
        if c:
            for j, y in enumerate(b):
                r[i + j] -= c * y
    return _trim(q), _trim(r[:len(b) - 1] or [Fraction(0)])


def zeta_pow(L: int, j: int) -> CycNum:
    return CycNum._raw(L, _power_table(L)[j % L], 1)


def add(a: CycNum, b: CycNum) -> CycNum:
    return a + b


def sub(a: CycNum, b: CycNum) -> CycNum:
    return a - b


def mul(a: CycNum, b: CycNum) -> CycNum:
    return a * b


def neg(a: CycNum) -> CycNum:
    return -a


def inverse(a: CycNum) -> CycNum:
    return a.inverse()


def embed(a: CycNum, L2: int) -> CycNum:
    return a.embed(L2)


def approx_complex(a: CycNum, precision_bits: int = 53) -> complex:
    return a.approx_complex(precision_bits)


def common_conductor(values: Iterable[CycNum]) -> int:
    L = 1
    for v in values:
        L = L * v.conductor // math.gcd(L, v.conductor)
    return L


def format_power_basis(a: CycNum, var: str | None = None) -> str:
    """Human readable rendering such as '1/2 - z12^2'."""
    var = var or f"z{a.conductor}"
    parts = []
    for i, c in enumerate(a.coeffs):
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            term = str(mag)
        elif mag == 1:
            term = var if i == 1 else f"{var}^{i}"
        else:
            term = f"{mag}*{var}" if i == 1 else f"{mag}*{var}^{i}"
        parts.append(("-" if c < 0 else "+", term))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, term in parts[1:]:
        out += f" {sign} {term}"
    return out
