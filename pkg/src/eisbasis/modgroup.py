"""Congruence subgroups as finite data, the lattice of primitive residue pairs,
orbits, admissible representatives, cusps and amplitudes."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, NamedTuple, Sequence

from .cyclotomic import euler_phi


class ParameterError(ValueError):
    pass


class ResidueMatrix(NamedTuple):
    a: int
    b: int
    c: int
    d: int


Point = tuple  # (l1, l2) with entries in [0, N)


def mat_mul(x, y, N: int) -> ResidueMatrix:
    a, b, c, d = x
    e, f, g, h = y
    return ResidueMatrix((a * e + b * g) % N, (a * f + b * h) % N,
                         (c * e + d * g) % N, (c * f + d * h) % N)


def mat_inv(x, N: int) -> ResidueMatrix:
    a, b, c, d = x
    return ResidueMatrix(d % N, -b % N, -c % N, a % N)


def mat_reduce(x, N: int) -> ResidueMatrix:
    return ResidueMatrix(*(v % N for v in x))


def act(pt, m, N: int) -> Point:
    """Right action (l1, l2)(a b; c d) = (l1 a + l2 c, l1 b + l2 d)."""
    l1, l2 = pt
    a, b, c, d = m
    return ((l1 * a + l2 * c) % N, (l1 * b + l2 * d) % N)


def neg(pt, N: int) -> Point:
    return (-pt[0] % N, -pt[1] % N)


@lru_cache(maxsize=None)
def sl2_mod(N: int) -> frozenset:
    """SL2(Z/N) by closure from the images of S and T."""
    if N < 1:
        raise ParameterError("level must be positive")
    ident = mat_reduce((1, 0, 0, 1), N)
    gens = [mat_reduce((0, -1, 1, 0), N), mat_reduce((1, 1, 0, 1), N)]
    return frozenset(_closure(N, gens, ident))


def _closure(N, gens, ident):
    seen = {ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = mat_mul(x, g, N)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


@lru_cache(maxsize=None)
def lambda_points(N: int) -> tuple:
    if N < 1:
        raise ParameterError("level must be positive")
    return tuple((a, b) for a in range(N) for b in range(N)
                 if math.gcd(math.gcd(a, b), N) == 1)


def lift_coprime(pt, N: int) -> tuple[int, int]:
    """Integer pair (l1', l2') = pt mod N with gcd(l1', l2') = 1."""
    l1, l2 = pt[0] % N, pt[1] % N
    if N == 1:
        return (0, 1)
    if l1 == 0:
        return (0, 1) if l2 == 1 else (N, l2)
    j = 0
    while math.gcd(l1, l2 + j * N) != 1:
        j += 1
    return (l1, l2 + j * N)


def point_to_cusp(pt, N: int) -> tuple[int, int]:
    """Inverse of alpha/beta -> [(beta, -alpha)]; returns (alpha, beta), oo = (1, 0)."""
    l1, l2 = lift_coprime(pt, N)
    if l1 == 0:
        return (1, 0)
    return (-l2, l1)


def cusp_to_point(x, N: int) -> Point:
    alpha, beta = x
    return (beta % N, -alpha % N)


def scaling_matrix(x) -> tuple[int, int, int, int]:
    """An integer matrix in SL2(Z) sending oo to x = alpha/beta."""
    alpha, beta = x
    if beta == 0:
        return (1, 0, 0, 1) if alpha == 1 else (-1, 0, 0, -1)
    g, s, t = _xgcd(alpha, beta)
    # s*alpha + t*beta = 1, want alpha*d - b*beta = 1
    return (alpha, -t, beta, s)


def _xgcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def cusp_sort_key(x):
    return (0, 0, 0) if x[1] == 0 else (1, x[0], x[1])


def format_cusp(x) -> str:
    if x[1] == 0:
        return "oo"
    if x[1] == 1:
        return str(x[0])
    return f"{x[0]}/{x[1]}"


@dataclass(frozen=True)
class LatticeOrbit:
    points: frozenset
    regular: bool

    @property
    def rep(self) -> Point:
        return min(self.points)

    def __len__(self):
        return len(self.points)

    def to_json(self):
        return {"points": [list(p) for p in sorted(self.points)], "regular": self.regular}


@dataclass(frozen=True)
class Cusp:
    representative: tuple  # (alpha, beta), oo = (1, 0)
    amplitude: int
    regular: bool
    orbit_size: int  # size of the orbit in C(Gamma(N))
    point: Point = field(compare=False)  # least point of the attached class in Lambda_N

    @property
    def is_infinity(self) -> bool:
        return self.representative[1] == 0

    @property
    def label(self) -> str:
        return format_cusp(self.representative)

    def to_json(self):
        return {"representative": self.label, "pair": list(self.representative),
                "amplitude": self.amplitude, "regular": self.regular,
                "orbit_size": self.orbit_size}


class CongruenceSubgroup:
    """A subgroup of SL2(Z) containing Gamma(level), given by its image mod level."""

    def __init__(self, level: int, elements: Iterable, family: tuple | None = None):
        self.level = level
        self.elements = frozenset(mat_reduce(m, level) for m in elements)
        self.family = family or ("generated", level, ())

    def __contains__(self, m) -> bool:
        return mat_reduce(m, self.level) in self.elements

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        return (isinstance(other, CongruenceSubgroup) and self.level == other.level
                and self.elements == other.elements)

    def __hash__(self):
        return hash((self.level, self.elements))

    def __repr__(self):
        return f"CongruenceSubgroup({self.spec})"

    @property
    def family_tag(self) -> str:
        return self.family[0]

    @cached_property
    def contains_minus_id(self) -> bool:
        return mat_reduce((-1, 0, 0, -1), self.level) in self.elements

    @property
    def spec(self) -> str:
        tag = self.family[0]
        if tag in ("gamma", "gamma1", "gamma0"):
            return f"{tag}:{self.family[1]}"
        if tag == "gammaNt":
            return f"gammaNt:{self.family[1]},{self.family[2]}"
        if tag == "larcher":
            return "larcher:" + ",".join(str(v) for v in self.family[1:])
        gens = self.family[2]
        return f"gens:{self.level}:" + ";".join(",".join(str(v) for v in g) for g in gens)

    def gammaNt_params(self):
        """(N, t) if this is a Gamma(N, t) family member, else None."""
        tag = self.family[0]
        N = self.level
        if tag == "gamma":
            return (N, N)
        if tag == "gamma1":
            return (N, 1)
        if tag == "gammaNt":
            return (self.family[1], self.family[2])
        return None

    def is_closed(self) -> bool:
        N = self.level
        ident = mat_reduce((1, 0, 0, 1), N)
        if ident not in self.elements:
            return False
        els = self.elements
        sample = list(els)
        for x in sample:
            if mat_inv(x, N) not in els:
                return False
        for x in sample:
            for y in sample:
                if mat_mul(x, y, N) not in els:
                    return False
        return True

    # -- orbit data --------------------------------------------------------
    @cached_property
    def orbits(self) -> tuple:
        N = self.level
        seen = set()
        out = []
        els = tuple(self.elements)
        for p in lambda_points(N):
            if p in seen:
                continue
            pts = frozenset(act(p, g, N) for g in els)
            seen |= pts
            regular = not any(neg(q, N) in pts for q in pts)
            out.append(LatticeOrbit(pts, regular))
        out.sort(key=lambda o: o.rep)
        return tuple(out)

    @cached_property
    def _orbit_index(self) -> dict:
        return {p: i for i, o in enumerate(self.orbits) for p in o.points}

    def orbit_of(self, pt) -> LatticeOrbit:
        N = self.level
        return self.orbits[self._orbit_index[(pt[0] % N, pt[1] % N)]]

    @cached_property
    def cusps(self) -> tuple:
        N = self.level
        done = set()
        out = []
        for o in self.orbits:
            if o.rep in done:
                continue
            mo = self.orbit_of(neg(o.rep, N))
            cls = o.points | mo.points
            done |= cls
            pt = min(cls)
            x = point_to_cusp(pt, N)
            amp, _ = amplitude_search(self, x)
            size = len(cls) if N <= 2 else len(cls) // 2
            regular = True if self.contains_minus_id else o.regular
            out.append(Cusp(x, amp, regular, size, pt))
        out.sort(key=lambda c: cusp_sort_key(c.representative))
        return tuple(out)

    def cusp_of_point(self, pt) -> Cusp:
        N = self.level
        o = self.orbit_of(pt)
        cls = o.points | self.orbit_of(neg(pt, N)).points
        pt0 = min(cls)
        for c in self.cusps:
            if c.point == pt0:
                return c
        raise AssertionError("point not attached to a cusp")

    def cusp_of(self, x) -> Cusp:
        return self.cusp_of_point(cusp_to_point(_reduce_fraction(x), self.level))


def _reduce_fraction(x):
    """Cusp as a coprime pair (alpha, beta); accepts pairs, ints and Fractions."""
    if isinstance(x, (int, Fraction)):
        x = (Fraction(x).numerator, Fraction(x).denominator)
    a, b = x
    g = math.gcd(a, b)
    a, b = a // g, b // g
    if b < 0 or (b == 0 and a < 0):
        a, b = -a, -b
    return (a, b)


# -- constructors -------------------------------------------------------------

def _filter(N, pred):
    return [m for m in sl2_mod(N) if pred(*m)]


@lru_cache(maxsize=None)
def gamma(N: int) -> CongruenceSubgroup:
    return CongruenceSubgroup(N, _filter(N, lambda a, b, c, d: a == 1 % N and d == 1 % N
                                         and b == 0 and c == 0), ("gamma", N))


@lru_cache(maxsize=None)
def gamma1(N: int) -> CongruenceSubgroup:
    return CongruenceSubgroup(N, _filter(N, lambda a, b, c, d: a == 1 % N and d == 1 % N
                                         and c == 0), ("gamma1", N))


@lru_cache(maxsize=None)
def gamma0(N: int) -> CongruenceSubgroup:
    return CongruenceSubgroup(N, _filter(N, lambda a, b, c, d: c == 0), ("gamma0", N))


@lru_cache(maxsize=None)
def gammaNt(N: int, t: int) -> CongruenceSubgroup:
    if N < 1 or t < 1 or N % t:
        raise ParameterError(f"gammaNt needs t | N, got N={N}, t={t}")
    return CongruenceSubgroup(N, _filter(N, lambda a, b, c, d: a == 1 % N and d == 1 % N
                                         and c == 0 and b % t == 0), ("gammaNt", N, t))


def larcher_level(p, q, r, chi, tau) -> int:
    return math.lcm(p * chi, q, r * chi)


@lru_cache(maxsize=None)
def larcher(p: int, q: int, r: int, chi: int, tau: int) -> CongruenceSubgroup:
    """Matrices (1+ap, bq; cr, 1+dp) with c = tau*a mod chi."""
    if min(p, q, r, chi) < 1:
        raise ParameterError("Larcher parameters must be positive")
    if (q * r) % p or math.gcd(p, q * r // p) % chi:
        raise ParameterError("Larcher parameters need p | qr and chi | gcd(p, qr/p)")
    L = larcher_level(p, q, r, chi, tau)

    def pred(a, b, c, d):
        if (a - 1) % p or (d - 1) % p or b % q or c % r:
            return False
        return (c // r - tau * ((a - 1) // p)) % chi == 0

    G = CongruenceSubgroup(L, _filter(L, pred), ("larcher", p, q, r, chi, tau))
    if not G.is_closed():
        raise ParameterError("these Larcher parameters do not define a group")
    return G


def generated(N: int, matrices: Sequence) -> CongruenceSubgroup:
    gens = []
    for m in matrices:
        m = mat_reduce(m, N)
        if (m.a * m.d - m.b * m.c - 1) % N:
            raise ParameterError(f"{tuple(m)} is not in SL2(Z/{N})")
        gens.append(m)
    ident = mat_reduce((1, 0, 0, 1), N)
    els = _closure(N, gens, ident)
    return CongruenceSubgroup(N, els, ("generated", N, tuple(tuple(g) for g in gens)))


def subgroup(spec) -> CongruenceSubgroup:
    """Build a subgroup from a spec string such as 'gamma0:12' or a tuple."""
    if isinstance(spec, CongruenceSubgroup):
        return spec
    if isinstance(spec, tuple):
        tag, *args = spec
        return _BUILDERS[tag](*args)
    return parse_group(spec)


def parse_group(text: str) -> CongruenceSubgroup:
    try:
        tag, _, rest = text.strip().partition(":")
        if tag in ("gamma", "gamma1", "gamma0"):
            return _BUILDERS[tag](int(rest))
        if tag == "gammaNt":
            N, t = (int(v) for v in rest.split(","))
            return gammaNt(N, t)
        if tag == "larcher":
            vals = [int(v) for v in rest.split(",")]
            if len(vals) != 5:
                raise ValueError
            return larcher(*vals)
        if tag == "gens":
            lvl, _, mats = rest.partition(":")
            N = int(lvl)
            mlist = []
            for chunk in filter(None, mats.split(";")):
                vals = [int(v) for v in chunk.split(",")]
                if len(vals) != 4:
                    raise ValueError
                mlist.append(vals)
            return generated(N, mlist)
    except ParameterError:
        raise
    except (ValueError, KeyError):
        pass
    raise ParameterError(f"cannot parse group spec {text!r}")


_BUILDERS = {"gamma": gamma, "gamma1": gamma1, "gamma0": gamma0, "gammaNt": gammaNt,
             "larcher": larcher, "generated": generated}


# -- orbits, reps, cusps --------------------------------------------------------

def orbits(G: CongruenceSubgroup) -> tuple:
    return G.orbits


def cusps(G: CongruenceSubgroup) -> tuple:
    return G.cusps


def amplitude_search(G: CongruenceSubgroup, x) -> tuple[int, bool]:
    """(least h with +-gamma T^h gamma^-1 in G, whether the + sign occurs at that h)."""
    alpha, beta = x
    N = G.level
    els = G.elements
    for h in range(1, N + 1):
        m = mat_reduce((1 - h * alpha * beta, h * alpha * alpha,
                        -h * beta * beta, 1 + h * alpha * beta), N)
        if m in els:
            return h, True
        if mat_reduce((-m.a, -m.b, -m.c, -m.d), N) in els:
            return h, False
    raise AssertionError("T^N conjugate must lie in every congruence subgroup of level N")


def amplitude(G: CongruenceSubgroup, x) -> int:
    return amplitude_search(G, _reduce_fraction(x))[0]


def orbit_size_in_cusps(G: CongruenceSubgroup, x) -> int:
    return G.cusp_of(x).orbit_size


def min_amplitude_cusp(G: CongruenceSubgroup) -> Cusp:
    return min(G.cusps, key=lambda c: (c.amplitude, cusp_sort_key(c.representative)))


class AdmissibleReps:
    """One point from each {+-l} class of Lambda_N."""

    def __init__(self, N: int, chosen: Iterable):
        self.N = N
        self.chosen = frozenset(chosen)
        self._lift = {}
        for p in self.chosen:
            self._lift[p] = (p, 1)
            q = neg(p, N)
            if q in self._lift and q != p:
                raise ValueError("set contains both a point and its negative")
            self._lift.setdefault(q, (p, -1))
        if len(self._lift) != len(lambda_points(N)):
            raise ValueError("set does not meet every class")

    def __contains__(self, pt):
        return pt in self.chosen

    def lift(self, pt) -> tuple[Point, int]:
        """(representative, sign) with pt = sign * representative."""
        N = self.N
        return self._lift[(pt[0] % N, pt[1] % N)]

    def is_admissible_for(self, G: CongruenceSubgroup) -> bool:
        for o in G.orbits:
            if o.regular:
                inside = [p in self.chosen for p in o.points]
                if any(inside) and not all(inside):
                    return False
        return True


def appendix_reps(N: int) -> frozenset:
    """The explicit set A_N of types I, II and III."""
    if N <= 2:
        return frozenset(lambda_points(N))
    pts = set()
    for l2 in range(1, N):
        if 2 * l2 < N and math.gcd(l2, N) == 1:
            pts.add((0, l2))
    for l1 in range(1, N):
        if 2 * l1 < N:
            for l2 in range(N):
                if math.gcd(math.gcd(l1, l2), N) == 1:
                    pts.add((l1, l2))
    if N % 2 == 0:
        h = N // 2
        if N == 4:
            pts.add((2, 1))
        else:
            for l2 in range(1, N):
                if 4 * l2 < N and math.gcd(l2, h) == 1:
                    pts.add((h, l2))
                    pts.add((h, h + l2))
    return frozenset(pts)


def generic_reps(G: CongruenceSubgroup) -> frozenset:
    """Whole regular orbits where possible, least point of each pair otherwise."""
    N = G.level
    chosen = set()
    decided = set()
    for o in G.orbits:
        if o.regular:
            if o.rep in decided:
                continue
            chosen |= o.points
            decided |= o.points
            decided |= {neg(p, N) for p in o.points}
        else:
            for p in sorted(o.points):
                if p not in decided:
                    chosen.add(p)
                    decided.add(p)
                    decided.add(neg(p, N))
    return frozenset(chosen)


def admissible_reps(G: CongruenceSubgroup) -> AdmissibleReps:
    if G.gammaNt_params() is not None or G.family[0] == "gamma0":
        A = AdmissibleReps(G.level, appendix_reps(G.level))
    else:
        A = AdmissibleReps(G.level, generic_reps(G))
    if not A.is_admissible_for(G):
        raise AssertionError(f"representatives are not admissible for {G.spec}")
    return A


# -- closed forms ---------------------------------------------------------------

def closed_form_orbits_gammaNt(N: int, t: int) -> list:
    """Orbits of Gamma(N, t) on Lambda_N from the explicit lists of types I, II, III.

    The lists describe the orbits meeting A_N; orbits of the negated points are
    added so the result partitions all of Lambda_N.
    """
    if N < 1 or t < 1 or N % t:
        raise ParameterError("need t | N")
    if N == 1:
        return [LatticeOrbit(frozenset({(0, 0)}), False)]
    if N == 2:
        if t == 1:
            return [LatticeOrbit(frozenset({(0, 1)}), False),
                    LatticeOrbit(frozenset({(1, 0), (1, 1)}), False)]
        return [LatticeOrbit(frozenset({p}), False) for p in lambda_points(2)]
    found = []
    for l2 in range(1, N):
        if 2 * l2 < N and math.gcd(l2, N) == 1:
            found.append(frozenset({(0, l2)}))
    for l1 in range(1, N):
        if 2 * l1 >= N:
            continue
        g = math.gcd(t * l1, N)
        for l0 in range(g):
            if math.gcd(math.gcd(l0, l1), N) == 1:
                found.append(frozenset((l1, (l0 + j * g) % N) for j in range(N // g)))
    irregular = []
    if N % 2 == 0:
        h = N // 2
        if N == 4:
            if t == 1:
                irregular.append(frozenset({(2, 1), (2, 3)}))
            else:
                found.append(frozenset({(2, 1)}))
        else:
            for l2 in range(1, N):
                if 4 * l2 < N and math.gcd(l2, h) == 1:
                    if t % 2:
                        found.append(frozenset({(h, l2), (h, h + l2)}))
                    else:
                        found.append(frozenset({(h, l2)}))
                        found.append(frozenset({(h, h + l2)}))
    out = [LatticeOrbit(o, True) for o in found]
    out += [LatticeOrbit(frozenset(neg(p, N) for p in o), True) for o in found]
    out += [LatticeOrbit(o, False) for o in irregular]
    return sorted(out, key=lambda o: o.rep)


def closed_form_orbits_gamma0(N: int) -> list:
    """Orbits of Gamma0(N), N >= 3, from the (delta, lambda0) parametrization."""
    if N < 3:
        raise ParameterError("closed form needs N >= 3")
    out = [frozenset((0, u) for u in range(N) if math.gcd(u, N) == 1)]
    for delta in range(1, N):
        if N % delta or 2 * delta >= N:
            continue
        g = math.gcd(delta, N // delta)
        for l0 in range(g):
            if math.gcd(l0, g) != 1:
                continue
            X = set()
            M = N // delta
            for a in range(1, M):
                if 2 * a >= M or math.gcd(a, M) != 1:
                    continue
                for l2 in range(delta):
                    if math.gcd(l2, delta) != 1 or (a * l2 - l0) % g:
                        continue
                    X |= {(a * delta % N, (l2 + j * delta) % N) for j in range(M)}
            out.append(frozenset(X | {neg(p, N) for p in X}))
    if N % 2 == 0:
        h = N // 2
        out.append(frozenset((h, l2) for l2 in range(N) if math.gcd(l2, h) == 1))
    return sorted((LatticeOrbit(o, False) for o in out), key=lambda o: o.rep)


def orbit_size_formula_gamma0(pt, N: int) -> int:
    d1 = math.gcd(pt[0], N)
    return (N // d1) * euler_phi(math.lcm(d1, N // d1))


def classical_cusp_count_gamma0(N: int) -> int:
    return sum(euler_phi(math.gcd(d, N // d)) for d in range(1, N + 1) if N % d == 0)


def classical_cusp_count_gamma1(N: int) -> tuple[int, int]:
    """(number of cusps, number of regular cusps) of Gamma1(N)."""
    if N <= 2:
        return (1, 1) if N == 1 else (2, 2)
    if N == 3:
        return (2, 2)
    if N == 4:
        return (3, 2)
    n = sum(euler_phi(d) * euler_phi(N // d) for d in range(1, N + 1) if N % d == 0) // 2
    return (n, n)
