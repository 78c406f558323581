from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from eisbasis.cyclotomic import CycNum, zeta_pow
from eisbasis.eisenstein import g_series
from eisbasis.qseries import QExpansion, WeightMismatch, add, constant_term, is_holomorphic, scale
from strategies import cycnums


@st.composite
def qexps(draw, L=6, qden=None, J=6, weight=4):
    qden = qden or draw(st.sampled_from([1, 2, 3, 6]))
    coeffs = [draw(cycnums(L=L)) for _ in range(J + 1)]
    return QExpansion(weight, qden, coeffs)


@settings(max_examples=60, deadline=None)
@given(qexps(qden=6), qexps(qden=6), qexps(qden=6), cycnums(L=6), cycnums(L=6))
def test_ring_axioms(f, g, h, a, b):
    assert (f + g) + h == f + (g + h)
    assert f + g == g + f
    assert scale(a, f + g) == scale(a, f) + scale(a, g)
    assert scale(a + b, f) == scale(a, f) + scale(b, f)
    assert scale(-1, f) + f == QExpansion.zero(4, 6, 6, 6)


@settings(max_examples=60, deadline=None)
@given(qexps(), st.sampled_from([1, 2, 3]))
def test_reindex_then_project(f, m):
    g = f.reindex(f.qden * m)
    assert g.project(f.qden).coeffs == f.coeffs


def test_reindex_exponents():
    one = CycNum.from_rational(1, 1)
    f = QExpansion(4, 1, [one, one * 2, one * 3])
    g = f.reindex(4)
    assert [j for j, c in enumerate(g.coeffs) if not c.is_zero()] == [0, 4, 8]
    with pytest.raises(ValueError):
        g.project(3)


def test_mixed_denominators_align():
    f = QExpansion(4, 2, [CycNum.from_rational(2, v) for v in (1, 1, 1)])
    g = QExpansion(4, 3, [CycNum.from_rational(3, v) for v in (1, 1, 1)])
    h = f + g
    assert h.qden == 6 and h.conductor == 6
    assert h.truncation == 4  # min of 2*3 and 2*2 in q_6


def test_weight_mismatch():
    f = g_series((0, 1), 3, 4, 3)
    g = g_series((0, 1), 3, 3, 3)
    with pytest.raises(WeightMismatch):
        add(f, g)
    assert f != g


def test_holomorphy_and_constant_terms():
    assert is_holomorphic(g_series((0, 1), 5, 4, 3))
    f = g_series((0, 1), 5, 2, 3)
    assert not is_holomorphic(f)
    assert f.nonhol == Fraction(1, 100)
    assert constant_term(g_series((0, 0), 1, 4, 2)) == Fraction(1, 720)


def test_json_roundtrip_and_render():
    f = g_series((1, 2), 5, 3, 6)
    assert QExpansion.from_json(f.to_json()) == f
    assert "O(q5^7)" in f.render()
