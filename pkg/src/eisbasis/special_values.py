"""Bernoulli polynomials and partial zeta values divided by (2 pi i)^k."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, gcd

from .cyclotomic import CycNum


class DomainError(ValueError):
    """A request outside the mathematical domain of an operation."""


@lru_cache(maxsize=None)
def bernoulli_numbers(n: int) -> tuple[Fraction, ...]:
    """b_0..b_n with b_1 = -1/2."""
    b = [Fraction(1)]
    for m in range(1, n + 1):
        s = sum(comb(m + 1, j) * b[j] for j in range(m))
        b.append(-s / (m + 1))
    return tuple(b)


class BernoulliPoly:
    def __init__(self, k: int, coeffs: tuple[Fraction, ...]):
        self.degree = k
        self.coeffs = coeffs  # coeffs[i] multiplies t^i

    def __call__(self, t) -> Fraction:
        t = Fraction(t)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __eq__(self, other):
        if isinstance(other, BernoulliPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __repr__(self):
        return f"BernoulliPoly({self.degree}, {[str(c) for c in self.coeffs]})"


@lru_cache(maxsize=None)
def bernoulli_polynomial(k: int) -> BernoulliPoly:
    if k < 0:
        raise DomainError("degree must be nonnegative")
    b = bernoulli_numbers(k)
    coeffs = [Fraction(0)] * (k + 1)
    for i in range(k + 1):
        coeffs[k - i] = comb(k, i) * b[i]
    return BernoulliPoly(k, tuple(coeffs))


@lru_cache(maxsize=None)
def _pz(m: int, N: int, k: int) -> CycNum:
    B = bernoulli_polynomial(k)
    vals = [B(Fraction(j, N)) for j in range(N)]
    den = 1
    for v in vals:
        den = den * v.denominator // gcd(den, v.denominator)
    vec = [0] * N
    for j, v in enumerate(vals):
        vec[(-j * m) % N] += v.numerator * (den // v.denominator)
    scale = factorial(k) * N * den
    return CycNum.from_int_vector(N, [-x for x in vec], scale)


def partial_zeta_scaled(m: int, N: int, k: int) -> CycNum:
    """(2 pi i)^(-k) * sum over nonzero n = m mod N of n^(-k), as an element of Q(zeta_N)."""
    if k < 2:
        raise DomainError("partial zeta sum diverges for k < 2")
    if N < 1:
        raise DomainError("modulus must be positive")
    return _pz(m % N, N, k)
