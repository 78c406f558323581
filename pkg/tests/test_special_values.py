import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from eisbasis.cyclotomic import CycNum
from eisbasis.special_values import (DomainError, bernoulli_numbers, bernoulli_polynomial,
                                     partial_zeta_scaled)


def test_bernoulli_polynomials():
    assert bernoulli_polynomial(0).coeffs == (1,)
    assert bernoulli_polynomial(1).coeffs == (Fraction(-1, 2), 1)
    assert bernoulli_polynomial(2).coeffs == (Fraction(1, 6), -1, 1)
    assert bernoulli_polynomial(4).coeffs == (Fraction(-1, 30), 0, 1, -2, 1)


def test_bernoulli_numbers_known():
    b = bernoulli_numbers(12)
    assert b[:3] == (1, Fraction(-1, 2), Fraction(1, 6))
    assert b[12] == Fraction(-691, 2730)
    assert all(b[i] == 0 for i in range(3, 13, 2))


@pytest.mark.parametrize("k", range(2, 14))
def test_bernoulli_endpoint_symmetry(k):
    B = bernoulli_polynomial(k)
    assert B(0) == bernoulli_numbers(k)[k]
    assert B(1) - B(0) == 0


def test_partial_zeta_examples():
    assert partial_zeta_scaled(0, 1, 2) == Fraction(-1, 12)
    assert partial_zeta_scaled(1, 2, 3) == 0
    assert partial_zeta_scaled(0, 1, 4) == Fraction(1, 720)
    with pytest.raises(DomainError):
        partial_zeta_scaled(0, 1, 1)


def test_partial_zeta_values_lie_in_level_field():
    assert partial_zeta_scaled(1, 5, 3).conductor == 5


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 12), st.integers(2, 7), st.integers(-30, 30))
def test_partial_zeta_parity(N, k, m):
    assert partial_zeta_scaled(-m, N, k) == partial_zeta_scaled(m, N, k) * (-1) ** k


@pytest.mark.parametrize("N", range(1, 13))
@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_partial_zeta_aggregation(N, k):
    total = CycNum.zero(N)
    for m in range(N):
        total = total + partial_zeta_scaled(m, N, k)
    assert total == partial_zeta_scaled(0, 1, k).embed(N)


def test_partial_zeta_numeric_sample():
    # direct sum over n = 1 mod 4 and n = -3 mod 4 ... all n = 1 mod 4
    N, k, m = 4, 4, 1
    s = sum(n ** -k for n in range(-400001, 400002) if n % N == m and n)
    exact = partial_zeta_scaled(m, N, k).approx_complex() * (2j * math.pi) ** k
    assert abs(exact - s) < 1e-12
