"""Dirichlet characters and the nebentypus Eisenstein bases for Gamma0(N).

A character is stored through its angles: chi(d) = e(angle(d)) with angle a
Fraction in [0, 1).  Values are materialized in Q(zeta_e), e the exponent of U_N.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

from .cyclotomic import CycNum, euler_phi, zeta_pow
from .eisenstein import DomainError, SeriesCombination
from .hecke import (LabelCombination, gamma0_index_set, gamma0_labels, gamma1_label)
from .modgroup import ParameterError, act, sl2_mod
from .qseries import QExpansion


def _factor(n: int) -> list[tuple[int, int]]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def units(N: int) -> list[int]:
    return [d for d in range(N) if math.gcd(d, N) == 1] if N > 1 else [0]


def _order(g: int, N: int) -> int:
    x, n = g % N, 1
    while x != 1 % N:
        x = x * g % N
        n += 1
    return n


@lru_cache(maxsize=None)
def unit_group_generators(N: int) -> tuple:
    """Fixed generators (g, order) of U_N, one cyclic factor per entry (CRT)."""
    gens = []
    for p, e in _factor(N):
        q = p ** e
        rest = N // q

        def crt(x):
            # x mod q, 1 mod rest
            return (x * rest * pow(rest, -1, q) + q * pow(q, -1, rest)) % N if rest > 1 else x % N

        if p == 2:
            if e == 2:
                gens.append((crt(-1), 2))
            elif e >= 3:
                gens.append((crt(-1), 2))
                gens.append((crt(5), 2 ** (e - 2)))
        else:
            phi = q - q // p
            g = next(g for g in range(2, q) if math.gcd(g, p) == 1 and _order(g, q) == phi)
            gens.append((crt(g), phi))
    return tuple(gens)


@lru_cache(maxsize=None)
def discrete_logs(N: int) -> dict:
    """d -> exponent vector with respect to unit_group_generators(N)."""
    gens = unit_group_generators(N)
    table = {}
    for exps in itertools.product(*(range(o) for _, o in gens)):
        x = 1 % N
        for (g, _), e in zip(gens, exps):
            x = x * pow(g, e, N) % N
        table[x] = exps
    if len(table) != euler_phi(N):
        raise AssertionError("unit group decomposition failed")
    return table


def unit_exponent(N: int) -> int:
    return math.lcm(1, *(o for _, o in unit_group_generators(N)))


@dataclass(frozen=True)
class DirichletCharacter:
    modulus: int
    exps: tuple
    index: int = field(default=0, compare=False)

    def angle(self, d: int) -> Fraction:
        N = self.modulus
        if N == 1:
            return Fraction(0)
        d %= N
        if math.gcd(d, N) != 1:
            raise ValueError(f"{d} is not a unit mod {N}")
        v = discrete_logs(N)[d]
        a = sum((Fraction(e * x, o) for e, x, (_, o) in zip(self.exps, v, unit_group_generators(N))),
                Fraction(0))
        return a - math.floor(a)

    @property
    def conductor_field(self) -> int:
        return unit_exponent(self.modulus)

    def value(self, d: int, L: int | None = None) -> CycNum:
        L = L or self.conductor_field
        a = self.angle(d)
        if (a * L).denominator != 1:
            raise ValueError("value does not live in the requested field")
        return zeta_pow(L, int(a * L))

    def value_at_lift(self, x: int, M: int, L: int | None = None) -> CycNum:
        """Value at any unit mod N congruent to x mod M; chi must factor through U_M."""
        N = self.modulus
        for j in range(N // M if M else 1):
            y = x + j * M
            if math.gcd(y, N) == 1:
                return self.value(y, L)
        raise ValueError(f"{x} has no unit lift mod {N}")

    @cached_property
    def values(self) -> dict:
        return {d: self.value(d) for d in units(self.modulus)}

    @property
    def parity(self) -> int:
        return 1 if self.angle(-1 % self.modulus if self.modulus > 1 else 0) == 0 else -1

    @property
    def order(self) -> int:
        return math.lcm(1, *(self.angle(d).denominator for d in units(self.modulus)))

    def is_trivial(self) -> bool:
        return all(e == 0 for e in self.exps)

    def to_json(self) -> dict:
        return {"modulus": self.modulus, "index": self.index,
                "generators": [g for g, _ in unit_group_generators(self.modulus)],
                "generator_angles": [str(Fraction(e, o)) for e, (_, o)
                                     in zip(self.exps, unit_group_generators(self.modulus))],
                "parity": self.parity,
                "values": {str(d): str(self.angle(d)) for d in units(self.modulus)}}


@lru_cache(maxsize=None)
def enumerate_characters(N: int) -> tuple:
    gens = unit_group_generators(N)
    out = []
    for i, exps in enumerate(itertools.product(*(range(o) for _, o in gens))):
        out.append(DirichletCharacter(N, tuple(exps), i))
    return tuple(out)


def character_from_spec(N: int, text: str) -> DirichletCharacter:
    """'3' picks by index; '1/2,1/4' gives the angles at the fixed generators."""
    chars = enumerate_characters(N)
    text = text.strip()
    if "/" not in text and "," not in text:
        i = int(text)
        if not 0 <= i < len(chars):
            raise ParameterError(f"character index {i} out of range 0..{len(chars) - 1}")
        return chars[i]
    gens = unit_group_generators(N)
    angles = [Fraction(v) for v in text.split(",")]
    if len(angles) != len(gens):
        raise ParameterError(f"need {len(gens)} generator angles")
    exps = []
    for a, (_, o) in zip(angles, gens):
        e = a * o
        if e.denominator != 1:
            raise ParameterError(f"angle {a} incompatible with generator order {o}")
        exps.append(int(e) % o)
    return next(c for c in chars if c.exps == tuple(exps))


def pulled_back_angle(chi: DirichletCharacter, d: int) -> Fraction:
    """Angle at a unit d mod a multiple of chi's modulus."""
    M = chi.modulus
    return chi.angle(d % M) if M > 1 else Fraction(0)


def is_delta_good(chi: DirichletCharacter, delta: int) -> bool:
    N = chi.modulus
    if N % delta:
        raise ParameterError("delta must divide N")
    M = math.lcm(delta, N // delta)
    return all(chi.angle(d) == 0 for d in units(N) if (d - 1) % M == 0)


def factorize(chi: DirichletCharacter, delta: int):
    """(chi1 mod N/delta, chi2 mod delta) with chi = chi1 chi2 on U_N."""
    N = chi.modulus
    if N % delta:
        raise ParameterError("delta must divide N")
    U = units(N)
    target = [chi.angle(d) for d in U]
    for c1 in enumerate_characters(N // delta):
        a1 = [pulled_back_angle(c1, d) for d in U]
        for c2 in enumerate_characters(delta):
            if all((x + pulled_back_angle(c2, d) - t) % 1 == 0 for x, d, t in zip(a1, U, target)):
                return c1, c2
    raise DomainError(f"character is not {delta}-good")


def label_delta(label, N: int) -> int:
    x = label[0]
    return N if x == 0 else x


def nebentypus_labels(N: int, chi: DirichletCharacter) -> list:
    if N < 3:
        raise ParameterError("nebentypus labels need N >= 3")
    return [lab for lab in gamma0_labels(N) if is_delta_good(chi, label_delta(lab, N))]


def field_conductor(N: int) -> int:
    return math.lcm(N, unit_exponent(N))


def nebentypus_combination(N: int, chi: DirichletCharacter, label, k: int,
                           factorization=None) -> LabelCombination:
    """The character-twisted sum of Gamma1 orbital labels attached to a Gamma0 label."""
    if chi.parity != (-1) ** k:
        raise EmptySpaceError("character parity does not match the weight")
    if k == 2 and chi.is_trivial():
        raise DomainError("weight 2 with trivial character: use spectral_basis(gamma0(N), 2)")
    L = field_conductor(N)
    half = Fraction(1, 2)
    out = LabelCombination(N, k)
    x, _ = label
    if x == 0:
        for a, u in gamma0_index_set(label, N):
            out.add_term(("E1", 0, u), chi.value(u, L).inverse() * half)
        return out
    if 2 * x == N:
        if not is_delta_good(chi, N // 2):
            raise DomainError("character does not factor through U_{N/2}")
        for a, l2 in gamma0_index_set(label, N):
            out.add_term(("E1", x, l2), chi.value_at_lift(l2, N // 2, L).inverse() * half)
        return out
    delta = x
    chi1, chi2 = factorization or factorize(chi, delta)
    for a, l2 in gamma0_index_set(label, N):
        v1 = _eval(chi1, a, L)
        v2 = _eval(chi2, l2, L)
        out.add_term(("E1",) + gamma1_label((a * delta, l2), N), v1 * v2.inverse() * half)
    return out


def _eval(chi: DirichletCharacter, x: int, L: int) -> CycNum:
    if chi.modulus == 1:
        return CycNum.from_rational(L, 1)
    return zeta_pow(L, int(chi.angle(x) * L))


class EmptySpaceError(DomainError):
    pass


def nebentypus_series(N, chi, label, k, J=None) -> QExpansion:
    comb = nebentypus_combination(N, chi, label, k)
    return comb.qexp(30 * N if J is None else J)


@dataclass
class NebentypusBasis:
    level: int
    character: DirichletCharacter
    weight: int
    labels: list
    combinations: list
    qexps: list | None = None

    def __len__(self):
        return len(self.labels)

    def to_json(self) -> dict:
        out = {"level": self.level, "weight": self.weight,
               "character": self.character.to_json(), "dimension": len(self.labels),
               "elements": []}
        for i, (lab, comb) in enumerate(zip(self.labels, self.combinations)):
            el = {"label": f"E0:{lab[0]},{lab[1]}", "labels": comb.to_json()}
            if self.qexps is not None:
                el["qexp"] = self.qexps[i].to_json()
            out["elements"].append(el)
        return out


def nebentypus_basis(N: int, chi: DirichletCharacter, k: int, J=None, qden=None) -> NebentypusBasis:
    """Pass J=False to skip q-expansions."""
    if chi.parity != (-1) ** k:
        return NebentypusBasis(N, chi, k, [], [], [] if J is not False else None)
    labels = nebentypus_labels(N, chi)
    combs = [nebentypus_combination(N, chi, lab, k) for lab in labels]
    qexps = None
    if J is not False:
        JJ = 30 * N if J is None else J
        qexps = [c.qexp(JJ, qden) for c in combs]
    return NebentypusBasis(N, chi, k, labels, combs, qexps)


def label_point(label, N: int):
    x, _ = label
    if x == 0 or 2 * x == N:
        return (x, 1)
    a, l2 = gamma0_index_set(label, N)[0]
    return ((a * x) % N, l2)


@lru_cache(maxsize=None)
def _to_zero_one(N: int) -> dict:
    """For each point l of Lambda_N some gamma in SL2(Z/N) with l gamma = (0, 1)."""
    out = {}
    for m in sorted(sl2_mod(N)):
        # l gamma = (0,1)  <=>  l = (0,1) gamma^-1 = (c', d') row of the inverse
        a, b, c, d = m
        inv = (d % N, -b % N, -c % N, a % N)
        pt = (inv[2], inv[3])
        out.setdefault(pt, m)
    return out


def constant_term_matrix(N: int, chi: DirichletCharacter, k: int) -> tuple[list, list]:
    """T[i][j] = pi_oo(f_i | gamma_j) for the basis functions f_i and gamma_j sending
    the j-th label's point to (0, 1)."""
    B = nebentypus_basis(N, chi, k, J=False)
    mats = [_to_zero_one(N)[label_point(lab, N)] for lab in B.labels]
    series = [c.series(field_conductor(N)) for c in B.combinations]
    return B.labels, [[f.constant_term_at(m) for m in mats] for f in series]


def slash_scales_by_character(N: int, chi: DirichletCharacter, comb: LabelCombination,
                              gamma) -> bool:
    L = field_conductor(N)
    f = comb.series(L)
    d = gamma[3] % N
    return f.slash(gamma) == f.scale(chi.value(d, L))


def count_identity_rhs(N: int, k: int) -> int:
    if N == 4:
        return 3 if k % 2 == 0 else 2
    tot = sum(euler_phi(d) * euler_phi(N // d) for d in range(1, N + 1) if N % d == 0)
    return tot // 2
