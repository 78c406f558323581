"""Eisenstein series at s = 0 as exact label combinations and q-expansions.

Two families are indexed by points of Lambda_N: the normalized series E (sum
over coprime pairs in a residue class) and the unnormalized G (all pairs).
G is always stored divided by (2 pi i)^k, written G~ below, so that every
coefficient is cyclotomic.  E is recovered from G~ by inverting a small matrix
of partial zeta values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .cyclotomic import CycNum, euler_phi
from .linalg import SingularMatrix, inverse, matmul, solve
from .modgroup import (AdmissibleReps, CongruenceSubgroup, Cusp, LatticeOrbit, act,
                       admissible_reps, cusp_sort_key, lambda_points, min_amplitude_cusp,
                       neg, scaling_matrix, sl2_mod, CongruenceSubgroup as _CS)
from .qseries import QExpansion
from .special_values import DomainError, partial_zeta_scaled


class EmptySpace(DomainError):
    pass


def eps(N: int) -> Fraction:
    return Fraction(1) if N >= 3 else Fraction(1, 2)


def unit_reps(N: int) -> list[int]:
    """Representatives of U_N / {+-1}: 1 <= d < N/2 coprime to N (just [1] for N <= 2)."""
    if N <= 2:
        return [1]
    return [d for d in range(1, N) if 2 * d < N and math.gcd(d, N) == 1]


def default_truncation(N: int) -> int:
    return 30 * N


# -- the partial zeta matrix and its inverse --------------------------------------

@lru_cache(maxsize=None)
def zeta_matrix(N: int, k: int) -> tuple:
    """M[u][v] = S~(u v^-1) with S~ the two-sided scaled partial zeta value.

    Over a free orbit {u l : u in U_N/+-}, G~(u l) = sum_v M[u][v] E(v l).
    """
    R = unit_reps(N)
    rows = []
    for u in R:
        rows.append(tuple(partial_zeta_scaled(u * pow(v, -1, N) if N > 1 else 0, N, k)
                          for v in R))
    return tuple(rows)


@lru_cache(maxsize=None)
def zeta_matrix_inverse(N: int, k: int) -> tuple:
    M = [list(r) for r in zeta_matrix(N, k)]
    try:
        return tuple(tuple(r) for r in inverse(M))
    except SingularMatrix:
        raise AssertionError(f"partial zeta matrix singular at N={N}, k={k}") from None


def zeta_roundtrip_is_identity(N: int, k: int) -> bool:
    M = [list(r) for r in zeta_matrix(N, k)]
    P = matmul(M, [list(r) for r in zeta_matrix_inverse(N, k)])
    n = len(P)
    return all(P[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n))


@lru_cache(maxsize=None)
def e_from_g_weights(N: int, k: int) -> tuple:
    """Pairs (u, w_u) with E(l) = sum_u w_u G~(u l).  Empty when E vanishes identically."""
    if k % 2 and N <= 2:
        return ()
    R = unit_reps(N)
    row = zeta_matrix_inverse(N, k)[0]
    return tuple((u, w) for u, w in zip(R, row) if not w.is_zero())


# -- q-expansion of a single scaled G-series -----------------------------------------

@lru_cache(maxsize=8192)
def _g_coeffs(l1: int, l2: int, N: int, k: int, J: int) -> tuple:
    acc: dict[int, list[int]] = {}
    sk = -1 if k % 2 else 1
    s_plus = l1 % N or N
    s_minus = (-l1) % N or N
    for r in range(1, J + 1):
        top = J // r
        if top < min(s_plus, s_minus):
            continue
        rk = r ** (k - 1)
        e_plus = (r * l2) % N
        e_minus = (-r * l2) % N
        for s in range(s_plus, top + 1, N):
            vec = acc.setdefault(r * s, [0] * N)
            vec[e_plus] += rk
        for s in range(s_minus, top + 1, N):
            vec = acc.setdefault(r * s, [0] * N)
            vec[e_minus] += sk * rk
    den = factorial(k - 1) * N ** k
    zero = CycNum.zero(N)
    out = [zero] * (J + 1)
    for j, vec in acc.items():
        out[j] = CycNum.from_int_vector(N, [sk * v for v in vec], den)
    out[0] = partial_zeta_scaled(l2, N, k) if l1 % N == 0 else zero
    return tuple(out)


def g_series(lam, N: int, k: int, J: int | None = None) -> QExpansion:
    """(2 pi i)^-k G_k(tau, lam, N) to order J in q_N."""
    if k < 2:
        raise DomainError("weight must be at least 2")
    J = default_truncation(N) if J is None else J
    l1, l2 = lam[0] % N, lam[1] % N
    nonhol = CycNum.from_rational(N, Fraction(1, 4 * N * N) if k == 2 else 0)
    return QExpansion(k, N, _g_coeffs(l1, l2, N, k, J), nonhol)


def e_series(lam, N: int, k: int, J: int | None = None) -> QExpansion:
    """The normalized series E_k(tau, lam, N), unscaled."""
    if k < 2:
        raise DomainError("weight must be at least 2")
    return SeriesCombination("E", N, k, {tuple(lam): 1}).qexp(J)


def e_constant_term(lam, N: int, k: int) -> Fraction:
    """Constant term of E(lam): eps_N * 1(l1=0) * (1(l2=1) + (-1)^k 1(l2=-1))."""
    l1, l2 = lam[0] % N, lam[1] % N
    if l1:
        return Fraction(0)
    val = (1 if l2 == 1 % N else 0) + (-1) ** k * (1 if l2 == (-1) % N else 0)
    return eps(N) * val


def e2_nonhol(N: int) -> Fraction:
    """Coefficient of 1/(pi Im tau) in E_2(tau, lam, N)."""
    prod = Fraction(1)
    for p in range(2, N + 1):
        if N % p == 0 and all(p % q for q in range(2, int(p ** 0.5) + 1)):
            prod *= 1 - Fraction(1, p * p)
    return -6 * eps(N) / (N * N * prod)


# -- label combinations ------------------------------------------------------------

class SeriesCombination:
    """A finite combination sum c_l X(l) with X = E or G~ at level N and weight k.

    Points are folded with X(-l) = (-1)^k X(l) so that equal functions have
    equal term dictionaries.
    """

    __slots__ = ("kind", "N", "k", "L", "terms")

    def __init__(self, kind: str, N: int, k: int, terms=None, L: int | None = None):
        if kind not in ("E", "G"):
            raise ValueError("kind must be 'E' or 'G'")
        self.kind, self.N, self.k = kind, N, k
        self.L = L or N
        if self.L % N:
            raise ValueError("coefficient conductor must be a multiple of the level")
        self.terms: dict = {}
        for pt, c in (terms or {}).items():
            self._add_term(pt, c)

    def _coerce(self, c) -> CycNum:
        if isinstance(c, CycNum):
            return c.embed(self.L) if c.conductor != self.L else c
        return CycNum.from_rational(self.L, c)

    def _add_term(self, pt, c):
        N = self.N
        p = (pt[0] % N, pt[1] % N)
        q = neg(p, N)
        if q < p:
            p = q
            if self.k % 2:
                c = -c if not isinstance(c, CycNum) else -c
        elif q == p and self.k % 2:
            return
        c = self._coerce(c)
        if c.is_zero():
            return
        new = self.terms[p] + c if p in self.terms else c
        if new.is_zero():
            self.terms.pop(p, None)
        else:
            self.terms[p] = new

    def _new(self, terms=None, L=None):
        return SeriesCombination(self.kind, self.N, self.k, terms, L or self.L)

    def copy(self):
        out = self._new()
        out.terms = dict(self.terms)
        return out

    def embed(self, L: int) -> "SeriesCombination":
        if L == self.L:
            return self
        return self._new({p: c.embed(L) for p, c in self.terms.items()}, L)

    def _check(self, other):
        if (self.kind, self.N, self.k) != (other.kind, other.N, other.k):
            raise ValueError("incompatible combinations")

    def __add__(self, other: "SeriesCombination") -> "SeriesCombination":
        self._check(other)
        L = math.lcm(self.L, other.L)
        a, b = self.embed(L), other.embed(L)
        out = a.copy()
        for p, c in b.terms.items():
            new = out.terms[p] + c if p in out.terms else c
            if new.is_zero():
                out.terms.pop(p, None)
            else:
                out.terms[p] = new
        return out

    def scale(self, c) -> "SeriesCombination":
        if isinstance(c, CycNum) and c.conductor != self.L:
            L = math.lcm(c.conductor, self.L)
            return self.embed(L).scale(c.embed(L))
        out = self._new()
        for p, v in self.terms.items():
            w = v * c
            if not w.is_zero():
                out.terms[p] = w
        return out

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, SeriesCombination):
            return NotImplemented
        try:
            return (self - other).is_zero()
        except ValueError:
            return False

    __hash__ = None

    def __repr__(self):
        return f"SeriesCombination({self.kind}, N={self.N}, k={self.k}, {len(self.terms)} terms)"

    def slash(self, m) -> "SeriesCombination":
        """f|_k gamma: every label l becomes l gamma."""
        N = self.N
        out = self._new()
        for p, c in self.terms.items():
            out._add_term(act(p, m, N), c)
        return out

    def constant_term(self) -> CycNum:
        N, k = self.N, self.k
        acc = CycNum.zero(self.L)
        for (l1, l2), c in self.terms.items():
            if self.kind == "E":
                v = e_constant_term((l1, l2), N, k)
                if v:
                    acc = acc + c * v
            elif l1 == 0:
                acc = acc + c * partial_zeta_scaled(l2, N, k).embed(self.L)
        return acc

    def constant_term_at(self, m) -> CycNum:
        return self.slash(m).constant_term()

    def to_g(self) -> "SeriesCombination":
        if self.kind == "G":
            return self
        out = SeriesCombination("G", self.N, self.k, None, self.L)
        weights = [(u, w.embed(self.L)) for u, w in e_from_g_weights(self.N, self.k)]
        for (l1, l2), c in self.terms.items():
            for u, w in weights:
                out._add_term((u * l1, u * l2), c * w)
        return out

    def nonhol(self) -> CycNum:
        if self.k != 2:
            return CycNum.zero(self.L)
        g = self.to_g()
        total = CycNum.zero(self.L)
        for c in g.terms.values():
            total = total + c
        return total * Fraction(1, 4 * self.N * self.N)

    def qexp(self, J: int | None = None, qden: int | None = None) -> QExpansion:
        """Expansion to order J in q_qden (default q_N).

        With qden a proper divisor of N only the exponents on that coarser
        lattice are evaluated; the caller vouches that the others vanish
        (true for Gamma1(N)-invariant combinations with qden = 1).
        """
        N, k, L = self.N, self.k, self.L
        qden = N if qden is None else qden
        if N % qden:
            raise ValueError("qden must divide the level")
        s = N // qden
        J = default_truncation(N) if J is None else J
        g = self.to_g()
        acc = [CycNum.zero(L)] * (J + 1)
        for (l1, l2), c in g.terms.items():
            coeffs = _g_coeffs(l1, l2, N, k, J * s)
            for j in range(J + 1):
                a = coeffs[j * s]
                if not a.is_zero():
                    acc[j] = acc[j] + c * (a if L == N else a.embed(L))
        return QExpansion(k, qden, acc, self.nonhol())

    def to_json(self) -> list:
        return [{"kind": self.kind, "point": list(p), "coeff": c.to_json()}
                for p, c in sorted(self.terms.items())]


def orbital_combination(kind: str, O, N: int, k: int) -> SeriesCombination:
    pts = O.points if isinstance(O, LatticeOrbit) else O
    return SeriesCombination(kind, N, k, {p: 1 for p in pts})


def orbital_sum(kind: str, O, N: int, k: int, J: int | None = None) -> QExpansion:
    return orbital_combination(kind, O, N, k).qexp(J)


def constant_term_at_cusp(f: SeriesCombination, gamma) -> CycNum:
    return f.constant_term_at(gamma)


# -- spectral and unnormalized bases --------------------------------------------------

def _class_points(G: CongruenceSubgroup, x: Cusp) -> frozenset:
    N = G.level
    return G.orbit_of(x.point).points | G.orbit_of(neg(x.point, N)).points


def attached_orbit(G: CongruenceSubgroup, x: Cusp, A: AdmissibleReps) -> LatticeOrbit:
    """The orbit inside A attached to the cusp x."""
    pt = next(p for p in sorted(_class_points(G, x)) if p in A)
    return G.orbit_of(pt)


def cusp_combination(G: CongruenceSubgroup, x: Cusp, A: AdmissibleReps, k: int,
                     kind: str = "E") -> SeriesCombination:
    """E_{k,x} (kind 'E') or G~_{k,x} (kind 'G'): the sum over the class of x inside A."""
    if k < 2:
        raise DomainError("weight must be at least 2")
    if k % 2:
        if G.contains_minus_id:
            raise EmptySpace("odd weight with -Id in the group: the space is zero")
        if not x.regular:
            raise DomainError(f"odd weight at the irregular cusp {x.label}")
    pts = [p for p in _class_points(G, x) if p in A]
    return SeriesCombination(kind, G.level, k, {p: 1 for p in pts})


def cusp_combination_by_case_table(G, x, A, k, kind="E") -> SeriesCombination:
    """Same function computed from the plain orbital sum and the halving rule."""
    O = attached_orbit(G, x, A)
    comb = orbital_combination(kind, O, G.level, k)
    if not O.regular and k % 2 == 0 and G.level >= 3:
        comb = comb.scale(Fraction(1, 2))
    return comb


def spectral_series(G, x, A, k, J=None) -> QExpansion:
    return cusp_combination(G, x, A, k, "E").qexp(J)


def unnormalized_series(G, x, A, k, J=None) -> QExpansion:
    return cusp_combination(G, x, A, k, "G").qexp(J)


@dataclass
class BasisElement:
    cusp: Cusp
    orbit: LatticeOrbit
    combination: SeriesCombination
    qexp: QExpansion | None = None
    partner: Cusp | None = None  # weight 2: the min-amplitude cusp subtracted
    ratio: Fraction | None = None

    def to_json(self) -> dict:
        out = {"cusp": self.cusp.to_json(), "orbit": self.orbit.to_json(),
               "labels": self.combination.to_json()}
        if self.partner is not None:
            out["minus"] = {"cusp": self.partner.label, "ratio": str(self.ratio)}
        if self.qexp is not None:
            out["holomorphic"] = self.qexp.is_holomorphic()
            out["qexp"] = self.qexp.to_json()
        return out


@dataclass
class EisensteinBasis:
    group: CongruenceSubgroup
    weight: int
    kind: str
    scaling_choice: AdmissibleReps
    elements: list = field(default_factory=list)

    def __len__(self):
        return len(self.elements)

    def to_json(self) -> dict:
        return {"group": self.group.spec, "weight": self.weight, "kind": self.kind,
                "dimension": len(self.elements),
                "elements": [e.to_json() for e in self.elements]}


def dimension_formula(G: CongruenceSubgroup, k: int) -> int:
    cs = G.cusps
    if k % 2 == 0:
        return len(cs) if k >= 4 else len(cs) - 1
    if G.contains_minus_id:
        return 0
    return sum(1 for c in cs if c.regular)


def _build_basis(G, k, J, kind, A=None) -> EisensteinBasis:
    if k < 2:
        raise DomainError("weight must be at least 2")
    A = A or admissible_reps(G)
    label = "spectral" if kind == "E" else "unnormalized"
    basis = EisensteinBasis(G, k, label, A)
    if k % 2 and G.contains_minus_id:
        return basis
    cusps = [c for c in G.cusps if k % 2 == 0 or c.regular]
    N = G.level
    if k == 2:
        x0 = min_amplitude_cusp(G)
        c0 = cusp_combination(G, x0, A, k, kind)
        for x in cusps:
            if x == x0:
                continue
            r = Fraction(x.orbit_size, x0.orbit_size)
            comb = cusp_combination(G, x, A, k, kind) - c0.scale(r)
            basis.elements.append(BasisElement(x, attached_orbit(G, x, A), comb,
                                               partner=x0, ratio=r))
    else:
        for x in cusps:
            basis.elements.append(BasisElement(x, attached_orbit(G, x, A),
                                               cusp_combination(G, x, A, k, kind)))
    if J is not False:
        JJ = default_truncation(N) if J is None else J
        for e in basis.elements:
            e.qexp = e.combination.qexp(JJ)
    return basis


def spectral_basis(G, k: int, J=None, A=None) -> EisensteinBasis:
    """Pass J=False to skip q-expansions and keep only label combinations."""
    return _build_basis(G, k, J, "E", A)


def unnormalized_basis(G, k: int, J=None, A=None) -> EisensteinBasis:
    return _build_basis(G, k, J, "G", A)


def indicator_matrix(G: CongruenceSubgroup, k: int, A=None) -> tuple[list, list, list]:
    """Rows: cusps x carrying E_{k,x}; columns: all cusps y; entries pi_oo(E_{k,x}|gamma_y)."""
    A = A or admissible_reps(G)
    N = G.level
    rows = [c for c in G.cusps if k % 2 == 0 or c.regular]
    if k % 2 and G.contains_minus_id:
        rows = []
    cols = list(G.cusps)
    mats = [scaling_matrix(y.representative) for y in cols]
    table = []
    for x in rows:
        f = cusp_combination(G, x, A, k)
        table.append([f.constant_term_at(m) for m in mats])
    return rows, cols, table


def indicator_ok(G: CongruenceSubgroup, k: int, A=None) -> bool:
    rows, cols, table = indicator_matrix(G, k, A)
    for x, row in zip(rows, table):
        for y, v in zip(cols, row):
            if x == y:
                if not (v == 1 or (k % 2 and v == -1)):
                    return False
            elif not v.is_zero():
                return False
    return True


# -- the identity expressing G~_{k,x} through the E_{k,y} -----------------------------

def unnormalized_via_spectral(G, x, A, k) -> tuple[SeriesCombination, list]:
    """sum over d in U_N/+- of S~(d) eps_A(d)^k E_{k, d^-1 x}, with the signs eps_A(d)."""
    N = G.level
    O = attached_orbit(G, x, A)
    total = SeriesCombination("E", N, k)
    signs = []
    for d in unit_reps(N):
        dinv = pow(d, -1, N) if N > 1 else 0
        moved = frozenset(((dinv * a) % N, (dinv * b) % N) for a, b in O.points)
        y = G.cusp_of_point(next(iter(moved)))
        Oy = attached_orbit(G, y, A)
        if moved == Oy.points:
            s = 1
        elif moved == frozenset(neg(p, N) for p in Oy.points):
            s = -1
        else:
            raise AssertionError("scaled orbit is not an orbit")
        signs.append((d, s, y))
        total = total + cusp_combination(G, y, A, k).scale(partial_zeta_scaled(d, N, k) * (s ** k))
    return total, signs


# -- closed forms --------------------------------------------------------------------

def closed_form_series_gammaNt(lam, N: int, t: int, k: int, J: int | None = None) -> QExpansion:
    """The unnormalized Gamma(N,t)-orbital sum of lam from its closed Fourier formula."""
    if t < 1 or N % t:
        raise DomainError("need t | N")
    J = default_truncation(N) if J is None else J
    l1, l2 = lam[0] % N, lam[1] % N
    d1 = math.gcd(l1, N)
    dt = math.gcd(t * l1, N)
    step = d1 * N // dt  # exponent of e(j d1 tau / dt) in q_N
    zero = CycNum.zero(N)
    out = [zero] * (J + 1)
    M = N // d1
    target = (l1 // d1) % M
    sk = -1 if k % 2 else 1
    den = factorial(k - 1) * dt ** k
    # roots e(r l2 / dt) live in Q(zeta_dt), placed in Q(zeta_N) via zeta_N^(N/dt)
    scale_exp = N // dt
    for j in range(1, J // step + 1):
        vec = [0] * N
        any_term = False
        for r in range(1, j + 1):
            if j % r:
                continue
            s = j // r
            rk = r ** (k - 1)
            if (s - target) % M == 0:
                vec[(r * l2 * scale_exp) % N] += rk
                any_term = True
            if (-s - target) % M == 0:
                vec[(-r * l2 * scale_exp) % N] += sk * rk
                any_term = True
        if any_term:
            out[j * step] = CycNum.from_int_vector(N, [sk * v for v in vec], den)
    if l1 == 0:
        out[0] = partial_zeta_scaled(l2, dt, k).embed(N)
    nonhol = CycNum.from_rational(N, Fraction(1, 4 * dt * N) if k == 2 else 0)
    return QExpansion(k, N, out, nonhol)


# -- level raising ---------------------------------------------------------------------

def principal_at_level(delta: int, N: int) -> _CS:
    """Gamma(delta) seen through its image in SL2(Z/N)."""
    els = [m for m in sl2_mod(N)
           if (m[0] - 1) % delta == 0 and m[1] % delta == 0
           and m[2] % delta == 0 and (m[3] - 1) % delta == 0]
    return _CS(N, els, ("generated", N, ()))


def level_inclusion(mu, delta: int, N: int, k: int, J: int | None = None):
    """Coefficients expressing the level-delta G~(mu) through level-N G~ orbital sums.

    Unknowns are the Gamma(delta)-orbits in Lambda_N lying over the U_delta-multiples
    of mu.  Returns (orbits, coefficients) or None if the exact system has no solution.
    """
    if N % delta:
        raise DomainError("delta must divide N")
    H = principal_at_level(delta, N)
    units = [u for u in range(max(delta, 1)) if math.gcd(u, delta) == 1] if delta > 1 else [0]
    over = {((u * mu[0]) % delta, (u * mu[1]) % delta) for u in units} if delta > 1 else {(0, 0)}
    cand = [o for o in H.orbits if (o.rep[0] % delta, o.rep[1] % delta) in over]
    n = len(cand)
    J = N * (n + 4) if J is None else J
    target = g_series(mu, delta, k, J * delta // N).reindex(N).embed(N)
    cols = [orbital_sum("G", o, N, k, J) for o in cand]
    rows = [[c.nonhol for c in cols]] + [[c.coeffs[j] for c in cols] for j in range(J + 1)]
    rhs = [target.nonhol] + list(target.coeffs[:J + 1])
    x = solve(rows, rhs)
    if x is None:
        return None
    return cand, x
