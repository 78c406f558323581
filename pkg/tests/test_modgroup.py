import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from eisbasis.cyclotomic import euler_phi
from eisbasis.modgroup import (ParameterError, act, admissible_reps, amplitude, amplitude_search,
                               classical_cusp_count_gamma0, closed_form_orbits_gamma0,
                               closed_form_orbits_gammaNt, cusp_to_point, gamma, gamma0, gamma1,
                               gammaNt, generated, lambda_points, larcher, lift_coprime,
                               min_amplitude_cusp, neg, orbit_size_formula_gamma0,
                               orbit_size_in_cusps, parse_group, point_to_cusp, scaling_matrix,
                               sl2_mod, subgroup)


def _sl2_order(N):
    n = N ** 3
    for p in range(2, N + 1):
        if N % p == 0 and all(p % q for q in range(2, p)):
            n = n * (p * p - 1) // (p * p)
    return n


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5, 6, 8, 12])
def test_sl2_order(N):
    assert len(sl2_mod(N)) == _sl2_order(N)


def test_sl2_small_examples():
    assert len(sl2_mod(1)) == 1
    assert len(sl2_mod(2)) == 6
    assert len(sl2_mod(4)) == 48


def test_lambda_points():
    assert set(lambda_points(1)) == {(0, 0)}
    assert set(lambda_points(2)) == {(0, 1), (1, 0), (1, 1)}
    brute = [(a, b) for a in range(4) for b in range(4) if math.gcd(math.gcd(a, b), 4) == 1]
    # 16 * (1 - 1/4) = 12 points of exact order 4
    assert len(lambda_points(4)) == len(brute) == 12


def test_family_examples():
    for N in range(1, 13):
        assert gammaNt(N, N).elements == gamma(N).elements
        assert gammaNt(N, 1).elements == gamma1(N).elements
    assert gamma0(4).contains_minus_id
    assert not gamma1(4).contains_minus_id
    with pytest.raises(ParameterError):
        gammaNt(6, 4)


def test_parse_group_roundtrip():
    for text in ("gamma:5", "gamma1:7", "gamma0:12", "gammaNt:8,2", "larcher:3,3,3,3,1",
                 "gens:5:1,1,0,1"):
        G = parse_group(text)
        assert parse_group(G.spec) == G
        assert G.spec == text
    with pytest.raises(ParameterError):
        parse_group("gamma2:3")
    assert subgroup(("gamma0", 6)) == gamma0(6)


def test_larcher_groups_closed():
    for params in ((3, 3, 3, 3, 1), (4, 4, 4, 2, 1)):
        G = larcher(*params)
        assert G.is_closed()
        assert not G.contains_minus_id
    assert larcher(3, 3, 3, 3, 1).level == 9
    assert larcher(4, 4, 4, 2, 1).level == 8


def test_orbit_examples():
    G = gamma1(4)
    o = G.orbit_of((2, 1))
    assert o.points == {(2, 1), (2, 3)} and not o.regular
    for N in range(2, 13):
        for l2 in range(N):
            if math.gcd(l2, N) == 1:
                assert len(gamma1(N).orbit_of((0, l2))) == 1
    for N in range(3, 13):
        assert len(gamma0(N).orbit_of((0, 1))) == euler_phi(N)


def test_orbit_size_formula_gamma0_examples():
    assert orbit_size_formula_gamma0((2, 1), 12) == 12
    assert len(gamma0(12).orbit_of((2, 1))) == 12
    for N in range(3, 25):
        for o in gamma0(N).orbits:
            assert orbit_size_formula_gamma0(o.rep, N) % euler_phi(N) == 0


def test_closed_form_small():
    orbs = {o.points for o in closed_form_orbits_gammaNt(2, 1)}
    assert orbs == {frozenset({(0, 1)}), frozenset({(1, 0), (1, 1)})}
    # the type I points of Gamma0(N) form one orbit
    for N in range(3, 13):
        first = [o for o in closed_form_orbits_gamma0(N) if (0, 1) in o.points][0]
        assert first.points == {(0, u) for u in range(N) if math.gcd(u, N) == 1}
    # N even > 4, t even: type III points are fixed
    for N, t in ((6, 2), (8, 2), (10, 2), (12, 6)):
        G = gammaNt(N, t)
        assert len(G.orbit_of((N // 2, 1))) == 1


def test_gamma4_2_closed_form_includes_every_orbit():
    # the orbit {(1,0),(1,2)} of Gamma(4,2) has gcd(lambda0, t*lambda1, N) = 2
    orbs = {o.points for o in closed_form_orbits_gammaNt(4, 2)}
    assert frozenset({(1, 0), (1, 2)}) in orbs


def test_admissible_examples():
    assert admissible_reps(gamma1(2)).chosen == set(lambda_points(2))
    A = admissible_reps(gamma1(4))
    assert (2, 1) in A and (2, 3) not in A


def test_cusp_examples():
    assert len(gamma0(12).cusps) == 6 == classical_cusp_count_gamma0(12)
    cs = gamma1(4).cusps
    assert len(cs) == 3 and sum(not c.regular for c in cs) == 1
    assert [c.label for c in gamma(1).cusps] == ["oo"]
    for N in range(1, 9):
        n_pm = len({min(p, neg(p, N)) for p in lambda_points(N)})
        assert len(gamma(N).cusps) == n_pm


def test_amplitude_examples():
    for N in range(1, 10):
        assert all(c.amplitude == N for c in gamma(N).cusps)
        if N >= 2:
            assert amplitude(gamma0(N), (1, 0)) == 1
    # the irregular cusp 1/2 of Gamma1(4): -gamma T gamma^-1 already lies in the group
    h, plus = amplitude_search(gamma1(4), (1, 2))
    assert (h, plus) == (1, False)
    assert amplitude(gamma1(4), Fraction(1, 2)) == 1


def test_orbit_size_examples():
    for N in range(3, 13):
        assert orbit_size_in_cusps(gamma0(N), (1, 0)) == euler_phi(N) // 2
        assert orbit_size_in_cusps(gamma1(N), (1, 0)) == 1
        assert all(c.orbit_size == 1 for c in gamma(N).cusps)


def test_min_amplitude_cusp_examples():
    for N in range(1, 13):
        assert min_amplitude_cusp(gamma1(N)).is_infinity
        assert min_amplitude_cusp(gamma(N)).is_infinity
        if N >= 2:
            assert min_amplitude_cusp(gamma0(N)).is_infinity


@pytest.mark.parametrize("N", range(1, 17))
def test_point_cusp_roundtrip(N):
    for p in lambda_points(N):
        a, b = lift_coprime(p, N)
        assert math.gcd(a, b) == 1 and (a - p[0]) % N == 0 and (b - p[1]) % N == 0
        x = point_to_cusp(p, N)
        q = cusp_to_point(x, N)
        assert q in (p, neg(p, N))
        m = scaling_matrix(x)
        assert m[0] * m[3] - m[1] * m[2] == 1
        assert (m[0], m[2]) == tuple(x)


# -- random generated subgroups ---------------------------------------------------------

def _random_group(rng, N):
    els = sorted(sl2_mod(N))
    gens = [rng.choice(els) for _ in range(rng.randint(1, 2))]
    return generated(N, gens)


def _random_groups(n=50, seed=7, max_level=12):
    rng = random.Random(seed)
    return [_random_group(rng, rng.randint(2, max_level)) for _ in range(n)]


RANDOM_GROUPS = _random_groups()
BUILTIN = ([gamma(N) for N in range(1, 25)] + [gamma1(N) for N in range(1, 25)]
           + [gamma0(N) for N in range(2, 25)]
           + [gammaNt(N, t) for N in range(2, 25) for t in range(2, N) if N % t == 0]
           + [larcher(3, 3, 3, 3, 1), larcher(4, 4, 4, 2, 1)])


@pytest.mark.parametrize("G", RANDOM_GROUPS, ids=lambda G: G.spec)
def test_random_group_invariants(G):
    N = G.level
    assert G.is_closed()
    # orbits partition Lambda_N and regularity is symmetric under negation
    pts = [p for o in G.orbits for p in o.points]
    assert sorted(pts) == sorted(lambda_points(N))
    for o in G.orbits:
        assert o.regular == G.orbit_of(neg(o.rep, N)).regular
        for g in list(G.elements)[:5]:
            assert act(o.rep, g, N) in o.points
    assert admissible_reps(G).is_admissible_for(G)


@pytest.mark.parametrize("G", RANDOM_GROUPS + BUILTIN, ids=lambda G: G.spec)
def test_amplitude_divisibility_and_proportionality(G):
    h0 = min_amplitude_cusp(G).amplitude
    ratios = {Fraction(c.orbit_size, c.amplitude) for c in G.cusps}
    assert all(c.amplitude % h0 == 0 for c in G.cusps)
    assert len(ratios) == 1


@pytest.mark.parametrize("G", [G for G in RANDOM_GROUPS + BUILTIN if not G.contains_minus_id],
                         ids=lambda G: G.spec)
def test_orbit_regularity_matches_cusp_regularity(G):
    # regularity of an orbit vs. the sign found in the independent stabilizer search
    for o in G.orbits:
        c = G.cusp_of_point(o.rep)
        _, plus = amplitude_search(G, point_to_cusp(o.rep, G.level))
        assert o.regular == plus
        assert c.regular == plus


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 10), st.integers(0, 10 ** 6))
def test_cusp_of_is_group_invariant(N, seed):
    G = _random_group(random.Random(seed), N)
    rng = random.Random(seed + 1)
    for c in G.cusps:
        g = rng.choice(sorted(G.elements))
        moved = act(c.point, g, N)
        assert G.cusp_of_point(moved) == c
