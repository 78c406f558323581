"""Executable invariant checks shared by the `selfcheck` command and the test-suite."""
from __future__ import annotations

import cmath
import math
import random
import time
import traceback
from dataclasses import dataclass, field
from fractions import Fraction

from . import characters as ch
from . import hecke
from .cyclotomic import CycNum
from .eisenstein import (dimension_formula, e2_nonhol, e_constant_term, e_series,
                         indicator_ok, level_inclusion, spectral_basis, unnormalized_basis,
                         zeta_roundtrip_is_identity, closed_form_series_gammaNt,
                         orbital_sum, unnormalized_via_spectral, cusp_combination)
from .linalg import rank
from .modgroup import (admissible_reps, amplitude, classical_cusp_count_gamma0,
                       classical_cusp_count_gamma1, closed_form_orbits_gamma0,
                       closed_form_orbits_gammaNt, gamma, gamma0, gamma1, gammaNt,
                       lambda_points, larcher, min_amplitude_cusp, orbit_size_formula_gamma0)
from .special_values import partial_zeta_scaled


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    cases: int = 0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"{tag} {self.name}: {self.cases} cases in {self.seconds:.1f}s{extra}"

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail,
                "seconds": round(self.seconds, 3), "cases": self.cases}


class Failure(AssertionError):
    pass


def _require(cond, msg):
    if not cond:
        raise Failure(msg)


def run(name: str, fn, *args, **kw) -> CheckResult:
    t0 = time.perf_counter()
    try:
        n = fn(*args, **kw)
        res = CheckResult(name, True, cases=n or 0)
    except Failure as exc:
        res = CheckResult(name, False, str(exc))
    except Exception as exc:  # an unexpected crash is a failed check, not a crashed suite
        tb = traceback.format_exception_only(type(exc), exc)[-1].strip()
        res = CheckResult(name, False, f"error: {tb}")
    res.seconds = time.perf_counter() - t0
    return res


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def sigma(n: int, r: int) -> int:
    return sum(d ** r for d in divisors(n))


# -- 1. level one ----------------------------------------------------------------------

def check_level_one(J: int = 30) -> int:
    for k, c in ((4, 240), (6, -504)):
        f = e_series((0, 0), 1, k, J)
        want = [1] + [c * sigma(n, k - 1) for n in range(1, J + 1)]
        _require([x.rational() for x in f.coeffs] == want, f"E{k} mismatch")
        _require(f.is_holomorphic(), f"E{k} not holomorphic")
    f = e_series((0, 0), 1, 2, J)
    a0 = f.coeffs[0].rational()
    for n in range(1, J + 1):
        _require(f.coeffs[n].rational() == -24 * sigma(n, 1) * a0, f"E2 ratio at n={n}")
    _require(f.nonhol.rational() == -3 * a0, "E2 nonhol ratio")
    _require(f.nonhol.rational() == e2_nonhol(1), "E2 nonhol vs closed form")
    return 2 * J + 3


# -- 2. orbits ---------------------------------------------------------------------------

def check_orbits(levels=range(1, 25)) -> int:
    n = 0
    for N in levels:
        for t in divisors(N):
            gen = {(o.points, o.regular) for o in gammaNt(N, t).orbits}
            closed = {(o.points, o.regular) for o in closed_form_orbits_gammaNt(N, t)}
            _require(gen == closed, f"Gamma({N},{t}) orbits differ from closed form")
            n += 1
        if N >= 3:
            gen = {o.points for o in gamma0(N).orbits}
            closed = {o.points for o in closed_form_orbits_gamma0(N)}
            _require(gen == closed, f"Gamma0({N}) orbits differ from closed form")
            for o in gamma0(N).orbits:
                _require(len(o) == orbit_size_formula_gamma0(o.rep, N), f"orbit size N={N}")
            n += 1
    if 4 in levels:
        _require(not gamma1(4).orbit_of((2, 1)).regular, "Gamma1(4) orbit of (2,1) must be irregular")
    return n


# -- groups used by 3, 5, 6 ------------------------------------------------------------

LARCHER_PARAMS = ((3, 3, 3, 3, 1), (4, 4, 4, 2, 1))


def criterion_groups(levels=range(1, 17)) -> list:
    seen, out = set(), []

    def add(G):
        key = (G.level, G.elements)
        if key not in seen:
            seen.add(key)
            out.append(G)

    for N in levels:
        add(gamma(N))
        add(gamma1(N))
        if N >= 2:
            add(gamma0(N))
        for t in divisors(N):
            if 1 < t < N:
                add(gammaNt(N, t))
    for params in LARCHER_PARAMS:
        G = larcher(*params)
        if G.level in levels:
            add(G)
    return out


def check_dimensions(levels=range(1, 17), weights=range(2, 8)) -> int:
    n = 0
    for G in criterion_groups(levels):
        for k in weights:
            B = spectral_basis(G, k, J=False)
            _require(len(B) == dimension_formula(G, k), f"{G.spec} k={k}: dimension")
            n += 1
    for N in levels:
        if N >= 2:
            _require(len(gamma0(N).cusps) == classical_cusp_count_gamma0(N), f"Gamma0({N}) cusps")
        cs = gamma1(N).cusps
        _require((len(cs), sum(c.regular for c in cs)) == classical_cusp_count_gamma1(N),
                 f"Gamma1({N}) cusp counts")
        n += 1
    return n


# -- 4. E <-> G ----------------------------------------------------------------------------

def check_e_g_exactness(levels=range(1, 17), weights=range(2, 7)) -> int:
    n = 0
    for N in levels:
        for k in weights:
            if k % 2 and N <= 2:
                # E vanishes identically here; the 1x1 matrix is [0]
                continue
            _require(zeta_roundtrip_is_identity(N, k), f"roundtrip N={N} k={k}")
            n += 1
        for k in weights:
            for lam in lambda_points(N):
                f = e_series(lam, N, k, 0)
                _require(f.coeffs[0] == e_constant_term(lam, N, k), f"constant term {lam} N={N} k={k}")
                n += 1
    return n


# -- 5. indicator ----------------------------------------------------------------------------

def check_indicator(levels=range(1, 17), weights=range(2, 8)) -> int:
    n = 0
    for G in criterion_groups(levels):
        A = admissible_reps(G)
        for k in weights:
            _require(indicator_ok(G, k, A), f"{G.spec} k={k}: indicator matrix")
            n += 1
    return n


# -- 6. holomorphy and rationality --------------------------------------------------------------

def check_holomorphy_rationality(levels=range(1, 17), weights=range(2, 8), J: int = 2) -> int:
    n = 0
    for G in criterion_groups(levels):
        N = G.level
        for k in weights:
            for B in (spectral_basis(G, k, J=J * N), unnormalized_basis(G, k, J=J * N)):
                for el in B.elements:
                    comb = el.combination
                    _require(comb.L % N == 0 and N % comb.L == 0, f"{G.spec}: conductor {comb.L}")
                    _require(el.qexp.conductor == N, f"{G.spec}: q-expansion conductor")
                    if k == 2:
                        _require(comb.nonhol().is_zero(), f"{G.spec}: weight-2 nonhol")
                    _require(el.qexp.is_holomorphic(), f"{G.spec} k={k}: not holomorphic")
                    n += 1
    return n


def check_independence(levels=range(1, 9), weights=range(2, 8)) -> int:
    """Full rank of the first dim+5 coefficients (in q) of every basis."""
    n = 0
    for G in criterion_groups(levels):
        N = G.level
        for k in weights:
            d = dimension_formula(G, k)
            if not d:
                continue
            B = spectral_basis(G, k, J=N * (d + 5))
            rows = [list(e.qexp.coeffs) for e in B.elements]
            _require(rank(rows) == d, f"{G.spec} k={k}: rank deficient")
            n += 1
    return n


# -- 7. Hecke ------------------------------------------------------------------------------------

HECKE_PRIMES = (2, 3, 5, 7)


def _label_expansions(N: int, k: int, J: int) -> dict:
    """q-expansion (integral exponents) of every Gamma1(N) label."""
    out = {}
    for lab in hecke.gamma1_labels(N):
        comb = hecke.LabelCombination(N, k, {("E1",) + lab: 1})
        out[lab] = comb.qexp(J, qden=1)
    return out


def _expand(comb: hecke.LabelCombination, table: dict, J: int):
    N, k = comb.N, comb.k
    acc = None
    for (kind, x, y), c in comb.terms.items():
        labs = [(x, y)] if kind == "E1" else hecke.gamma0_to_gamma1((x, y), N)
        for lab in labs:
            f = table[hecke.gamma1_label(lab, N)].truncate(J).scale(c)
            acc = f if acc is None else acc + f
    return acc


def check_hecke(levels=range(1, 13), weights=(2, 3, 4), primes=HECKE_PRIMES) -> int:
    n = 0
    J = 6 * max(primes)
    for N in levels:
        for k in weights:
            table = _label_expansions(N, k, J)
            gamma0_labs = hecke.gamma0_labels(N) if N >= 3 else []
            combos = [hecke.LabelCombination(N, k, {("E1",) + lab: 1}) for lab in table]
            combos0 = [hecke.LabelCombination(N, k, {("E0",) + lab: 1}) for lab in gamma0_labs]
            for p in primes:
                if N % p == 0:
                    continue
                for c in combos:
                    img = hecke.tp_label(p, c)
                    _require(img.is_integral(), f"N={N} k={k} p={p}: non-integral image")
                    f = _expand(c, table, J)
                    g = _expand(hecke.diamond(p, c), table, J)
                    want = hecke.tp_qexp(f, p, k, diamond_image=g)
                    got = _expand(img, table, J // p)
                    _require(got == want, f"N={N} k={k} p={p} {c}: label/q-expansion square")
                    n += 1
                for c in combos0:
                    img = hecke.tp_label(p, c)
                    _require(img.is_integral(), f"N={N} k={k} p={p}: non-integral image")
                    want = hecke.tp_qexp(_expand(c, table, J), p, k)
                    got = _expand(img, table, J // p)
                    _require(got == want, f"N={N} k={k} p={p} {c}: Gamma0 square")
                    _, x, _ = next(iter(c.terms))
                    if x == 0 or 2 * x == N:
                        _require(img == c.scale(p ** (k - 1) + 1), f"N={N} p={p}: eigen-relation")
                    n += 1
            # commutativity on every label
            good = [p for p in primes if N % p]
            units = [d for d in range(1, max(N, 2)) if math.gcd(d, N) == 1]
            for c in combos + combos0:
                for i, p in enumerate(good):
                    for q in good[i + 1:]:
                        _require(hecke.tp_label(p, hecke.tp_label(q, c)) ==
                                 hecke.tp_label(q, hecke.tp_label(p, c)), f"T{p}T{q} commute N={N}")
                    for d in units:
                        _require(hecke.diamond(d, hecke.tp_label(p, c)) ==
                                 hecke.tp_label(p, hecke.diamond(d, c)), f"<{d}>T{p} commute N={N}")
                n += 1
    return n


# -- 8. nebentypus -------------------------------------------------------------------------------

def check_nebentypus(levels=range(3, 13), weights=range(2, 8), samples: int = 5, seed: int = 0) -> int:
    rng = random.Random(seed)
    n = 0
    for N in levels:
        if N < 3:
            continue
        G0 = sorted(gamma0(N).elements)
        G1 = gamma1(N)
        for k in weights:
            total, count = 0, 0
            rows, L = [], ch.field_conductor(N)
            target = dimension_formula(G1, k)
            J = 2 * target + 10
            for chi in ch.enumerate_characters(N):
                if chi.parity != (-1) ** k:
                    continue
                count += len(ch.nebentypus_labels(N, chi))
                if k == 2 and chi.is_trivial():
                    B0 = spectral_basis(gamma0(N), 2, J=J * N)
                    total += len(B0)
                    rows += [list(e.qexp.project(1).embed(L).coeffs) for e in B0.elements]
                    continue
                labs, T = ch.constant_term_matrix(N, chi, k)
                _require(rank(T) == len(labs), f"N={N} k={k} chi#{chi.index}: constant terms singular")
                B = ch.nebentypus_basis(N, chi, k, J=J, qden=1)
                fs = [c.series(L) for c in B.combinations]
                for _ in range(samples):
                    m = rng.choice(G0)
                    val = chi.value(m[3], L)
                    for f in fs:
                        _require(f.slash(m) == f.scale(val), f"N={N} chi#{chi.index}: slash by {tuple(m)}")
                rows += [list(q.embed(L).coeffs) for q in B.qexps]
                total += len(B)
                n += 1
            _require(total == target, f"N={N} k={k}: sum of dims {total} != {target}")
            _require(count == ch.count_identity_rhs(N, k), f"N={N} k={k}: label count {count}")
            _require(rank(rows) == target, f"N={N} k={k}: union of nebentypus bases dependent")
    return n


# -- 9. numeric partial zeta ----------------------------------------------------------------------

def _numeric_partial_zeta(m: int, N: int, k: int, X: int):
    """(raw partial sum over 0 < |n| <= X, tail-corrected sum, rigorous raw-tail bound)."""
    import numpy as np

    m %= N
    total = 0.0
    corrected = 0.0
    bound = 0.0
    for sign, r in ((1, m), (-1, (-m) % N)):
        # n = sign * (r + jN), j >= 0, n != 0
        start = r if r else N
        ns = np.arange(start, X + 1, N, dtype=np.float64)
        s = float(np.sum(ns ** (-k)))
        n0 = float(ns[-1] + N) if len(ns) else float(start)
        # Euler-Maclaurin tail for f(j) = (n0 + jN)^-k, j >= 0
        tail = (n0 ** (1 - k) / (N * (k - 1)) + 0.5 * n0 ** (-k)
                + k * N * n0 ** (-k - 1) / 12
                - k * (k + 1) * (k + 2) * N ** 3 * n0 ** (-k - 3) / 720)
        w = sign ** k
        total += w * s
        corrected += w * (s + tail)
        bound += n0 ** (1 - k) / (N * (k - 1)) + n0 ** (-k)
    return total, corrected, bound


def check_partial_zeta_numeric(levels=range(1, 13), weights=(2, 3, 4, 6), X: int = 10 ** 6,
                               tol: float = 1e-9) -> int:
    n = 0
    for N in levels:
        for k in weights:
            scale = (2j * math.pi) ** k
            for m in range(N):
                exact = partial_zeta_scaled(m, N, k).approx_complex() * scale
                raw, corr, bound = _numeric_partial_zeta(m, N, k, X)
                _require(abs(exact - corr) < tol, f"N={N} k={k} m={m}: |diff|={abs(exact - corr):.3g}")
                _require(abs(exact - raw) <= bound + tol, f"N={N} k={k} m={m}: raw sum outside tail bound")
                n += 1
    return n


# -- 10. level inclusion ----------------------------------------------------------------------------

def check_level_inclusion(levels=range(1, 13), weights=(2, 3, 4)) -> int:
    n = 0
    for N in levels:
        for delta in divisors(N):
            if delta == N:
                continue
            for k in weights:
                for mu in lambda_points(delta):
                    res = level_inclusion(mu, delta, N, k)
                    _require(res is not None, f"G({mu}, level {delta}) not in level-{N} span, k={k}")
                    n += 1
    return n


# -- extra invariants for selfcheck ------------------------------------------------------------------

def check_larcher_divisibility(levels=range(1, 25)) -> int:
    n = 0
    groups = [G for N in levels for G in (gamma(N), gamma1(N))]
    groups += [gamma0(N) for N in levels if N >= 2]
    groups += [gammaNt(N, t) for N in levels for t in divisors(N) if 1 < t < N]
    groups += [G for G in (larcher(*p) for p in LARCHER_PARAMS) if G.level in levels]
    for G in groups:
        h0 = min_amplitude_cusp(G).amplitude
        for c in G.cusps:
            _require(c.amplitude % h0 == 0, f"{G.spec}: amplitude {c.amplitude} not divisible by {h0}")
            _require(amplitude(G, c.representative) == c.amplitude, f"{G.spec}: amplitude recompute")
        n += 1
    return n


def check_closed_form_series(levels=range(1, 13), weights=(2, 3, 4), J_mult: int = 3) -> int:
    n = 0
    for N in levels:
        for t in divisors(N):
            G = gammaNt(N, t)
            for o in G.orbits:
                for k in weights:
                    a = closed_form_series_gammaNt(o.rep, N, t, k, J_mult * N)
                    b = orbital_sum("G", o.points, N, k, J_mult * N)
                    _require(a == b, f"Gamma({N},{t}) orbit {o.rep} k={k}")
                    n += 1
    return n


def check_unnormalized_identity(levels=range(1, 13), weights=range(2, 8)) -> int:
    """G~_{k,x} equals the partial-zeta combination of the E_{k,y}."""
    n = 0
    for G in criterion_groups(levels):
        A = admissible_reps(G)
        for k in weights:
            if k % 2 and G.contains_minus_id:
                continue
            for x in G.cusps:
                if k % 2 and not x.regular:
                    continue
                lhs = cusp_combination(G, x, A, k, "G")
                rhs, _ = unnormalized_via_spectral(G, x, A, k)
                _require(lhs.to_g() == rhs.to_g(), f"{G.spec} k={k} cusp {x.label}")
                n += 1
    return n


def check_factorization_independence(levels=range(3, 13), weights=(3, 4)) -> int:
    """Two factorizations of chi give proportional series (ratio psi(lambda0)^-1)."""
    n = 0
    for N in levels:
        L = ch.field_conductor(N)
        for k in weights:
            for chi in ch.enumerate_characters(N):
                if chi.parity != (-1) ** k or (k == 2 and chi.is_trivial()):
                    continue
                for lab in ch.nebentypus_labels(N, chi):
                    x, l0 = lab
                    if x == 0 or 2 * x == N:
                        continue
                    facts = _all_factorizations(chi, x)
                    base = ch.nebentypus_combination(N, chi, lab, k, facts[0]).series(L)
                    for f1, f2 in facts[1:]:
                        other = ch.nebentypus_combination(N, chi, lab, k, (f1, f2)).series(L)
                        g = math.gcd(x, N // x)
                        # psi = chi1' chi1^-1 lives on U_g
                        a = Fraction(0)
                        if g > 1:
                            u = next(v for v in range(l0, N * g, g) if math.gcd(v, N) == 1)
                            a = ch.pulled_back_angle(f1, u) - ch.pulled_back_angle(facts[0][0], u)
                        from .cyclotomic import zeta_pow
                        alpha = zeta_pow(L, int(-a * L) % L)
                        _require(base == other.scale(alpha), f"N={N} {lab}: factorizations disagree")
                        n += 1
    return n


def _all_factorizations(chi, delta):
    N = chi.modulus
    U = ch.units(N)
    out = []
    for c1 in ch.enumerate_characters(N // delta):
        for c2 in ch.enumerate_characters(delta):
            if all((ch.pulled_back_angle(c1, d) + ch.pulled_back_angle(c2, d) - chi.angle(d)) % 1 == 0
                   for d in U):
                out.append((c1, c2))
    return out


# -- suites ----------------------------------------------------------------------------------------

ACCEPTANCE = (
    (1, "level-one classical oracle", check_level_one, {}),
    (2, "orbit closed forms", check_orbits, {}),
    (3, "dimension table", check_dimensions, {}),
    (4, "E/G exactness", check_e_g_exactness, {}),
    (5, "constant-term indicator", check_indicator, {}),
    (6, "weight-2 holomorphy and rationality", check_holomorphy_rationality, {}),
    (7, "Hecke verification", check_hecke, {}),
    (8, "nebentypus bases", check_nebentypus, {}),
    (9, "partial zeta numerics", check_partial_zeta_numeric, {}),
    (10, "level inclusion", check_level_inclusion, {}),
)


def acceptance(only=None) -> list[CheckResult]:
    out = []
    for num, name, fn, kw in ACCEPTANCE:
        if only and num not in only:
            continue
        out.append(run(f"criterion {num}: {name}", fn, **kw))
    return out


def selfcheck(lo: int = 1, hi: int = 12) -> list[CheckResult]:
    """All invariants over levels lo..hi (each check also keeps its own natural cap)."""
    def rng(cap_lo, cap_hi):
        return range(max(lo, cap_lo), min(hi, cap_hi) + 1)

    plan = [
        ("level-one classical oracle", check_level_one, {}),
        ("orbit closed forms", check_orbits, {"levels": rng(1, 10 ** 9)}),
        ("dimension table", check_dimensions, {"levels": rng(1, 10 ** 9)}),
        ("E/G exactness", check_e_g_exactness, {"levels": rng(1, 10 ** 9)}),
        ("constant-term indicator", check_indicator, {"levels": rng(1, 10 ** 9)}),
        ("holomorphy and rationality", check_holomorphy_rationality, {"levels": rng(1, 10 ** 9)}),
        ("linear independence", check_independence, {"levels": rng(1, 8)}),
        ("Hecke verification", check_hecke, {"levels": rng(1, 10 ** 9)}),
        ("nebentypus bases", check_nebentypus, {"levels": rng(3, 10 ** 9)}),
        ("partial zeta numerics", check_partial_zeta_numeric, {"levels": rng(1, 10 ** 9)}),
        ("level inclusion", check_level_inclusion, {"levels": rng(1, 10 ** 9)}),
        ("amplitude divisibility", check_larcher_divisibility, {"levels": rng(1, 10 ** 9)}),
        ("closed-form orbital sums", check_closed_form_series, {"levels": rng(1, 10 ** 9)}),
        ("unnormalized via spectral", check_unnormalized_identity, {"levels": rng(1, 10 ** 9)}),
        ("factorization independence", check_factorization_independence, {"levels": rng(3, 10 ** 9)}),
    ]
    return [run(name, fn, **kw) for name, fn, kw in plan]
