"""Diamond and Hecke operators on orbital-sum labels for Gamma1(N) and Gamma0(N).

Labels:
  ("E1", l1, l2)  the Gamma1(N)-orbital sum of E through (l1, l2),
                  canonical form (l1 mod N, l2 mod gcd(l1, N));
  ("E0", a, b)    the Gamma0(N)-orbital sum: (0,1), (N/2,1) or (delta, lambda0)
                  with 1 <= delta < N/2, lambda0 mod gcd(delta, N/delta).
"G1"/"G0" are the same sums of scaled unnormalized series.
"""
from __future__ import annotations

import math
from fractions import Fraction

from .cyclotomic import CycNum
from .eisenstein import SeriesCombination
from .modgroup import ParameterError, lambda_points
from .qseries import QExpansion


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p ** 0.5) + 1))


def gamma1_label(pt, N: int) -> tuple:
    l1 = pt[0] % N
    d1 = math.gcd(l1, N)
    return (l1, pt[1] % d1)


def gamma1_points(label, N: int) -> list:
    l1, l2 = label
    d1 = math.gcd(l1, N)
    return [(l1, (l2 + j * d1) % N) for j in range(N // d1)]


def gamma0_label(pt, N: int) -> tuple:
    if N < 3:
        raise ParameterError("Gamma0 labels need N >= 3")
    l1, l2 = pt[0] % N, pt[1] % N
    d1 = math.gcd(l1, N)
    if d1 == N:
        return (0, 1)
    if 2 * d1 == N:
        return (N // 2, 1)
    a = l1 // d1
    g = math.gcd(d1, N // d1)
    return (d1, (a * l2) % g)


def gamma0_labels(N: int) -> list:
    """All labels (0,1), (N/2,1) (N even) and (delta, lambda0)."""
    out = [(0, 1)]
    for delta in range(1, N):
        if N % delta or 2 * delta >= N:
            continue
        g = math.gcd(delta, N // delta)
        out += [(delta, l0) for l0 in range(g) if math.gcd(l0, g) == 1]
    if N % 2 == 0:
        out.append((N // 2, 1))
    return sorted(out)


def gamma0_index_set(label, N: int) -> list:
    """The (a, l2) pairs whose Gamma1 sums E1((a delta, l2)) make up the label."""
    x, y = label
    if x == 0:
        return [(None, u) for u in range(N) if math.gcd(u, N) == 1]
    if 2 * x == N:
        h = N // 2
        return [(None, l2) for l2 in range(h) if math.gcd(l2, h) == 1]
    delta, l0 = label
    M = N // delta
    g = math.gcd(delta, M)
    return [(a, l2) for a in range(M) if math.gcd(a, M) == 1
            for l2 in range(delta) if math.gcd(l2, delta) == 1 and (a * l2 - l0) % g == 0]


def gamma0_to_gamma1(label, N: int) -> list:
    """Gamma1 labels whose sum is the Gamma0 label."""
    x, _ = label
    out = []
    for a, l2 in gamma0_index_set(label, N):
        if x == 0:
            out.append((0, l2))
        elif 2 * x == N:
            out.append((x, l2))
        else:
            out.append(gamma1_label((a * x, l2), N))
    return out


def _iszero(c) -> bool:
    return c.is_zero() if isinstance(c, CycNum) else c == 0


class LabelCombination:
    """Integer (or cyclotomic) combination of Gamma1/Gamma0 orbital-sum labels."""

    def __init__(self, N: int, k: int, terms=None, family: str = "E"):
        self.N, self.k, self.family = N, k, family
        self.terms: dict = {}
        for lab, c in (terms or {}).items():
            self.add_term(lab, c)

    def canonical(self, lab) -> tuple:
        kind, x, y = lab
        if kind[1] == "1":
            return (kind, *gamma1_label((x, y), self.N))
        x %= self.N
        if x == 0 or 2 * x == self.N:
            return (kind, x, 1)
        if self.N % x or 2 * x > self.N:
            raise ParameterError(f"{x} is not a divisor below N/2")
        g = math.gcd(x, self.N // x)
        return (kind, x, y % g)

    def add_term(self, lab, c):
        if isinstance(c, int):
            c = Fraction(c)
        lab = self.canonical(lab)
        new = self.terms[lab] + c if lab in self.terms else c
        if _iszero(new):
            self.terms.pop(lab, None)
        else:
            self.terms[lab] = new

    def __add__(self, other):
        out = LabelCombination(self.N, self.k, self.terms, self.family)
        for lab, c in other.terms.items():
            out.add_term(lab, c)
        return out

    def scale(self, c):
        return LabelCombination(self.N, self.k, {l: v * c for l, v in self.terms.items()}, self.family)

    def __eq__(self, other):
        if not isinstance(other, LabelCombination):
            return NotImplemented
        diff = self + other.scale(-1)
        return not diff.terms

    __hash__ = None

    def __repr__(self):
        body = " + ".join(f"{c}*{l[0]}({l[1]},{l[2]})" for l, c in sorted(self.terms.items()))
        return f"LabelCombination(N={self.N}, k={self.k}: {body or '0'})"

    def is_integral(self) -> bool:
        for c in self.terms.values():
            if isinstance(c, CycNum):
                if not c.is_integral_rational():
                    return False
            elif Fraction(c).denominator != 1:
                return False
        return True

    def series(self, L: int | None = None) -> SeriesCombination:
        """The function as a point-level combination of E (or scaled G) series."""
        N = self.N
        kind = "G" if self.family == "G" else "E"
        res = SeriesCombination(kind, N, self.k, None, L or _conductor(self, N))
        for (lk, x, y), c in self.terms.items():
            if lk[1] == "1":
                pts = gamma1_points((x, y), N)
            else:
                pts = [p for lab in gamma0_to_gamma1((x, y), N) for p in gamma1_points(lab, N)]
            part = SeriesCombination(kind, N, self.k, {p: 1 for p in pts}, res.L)
            res = res + part.scale(c)
        return res

    def qexp(self, J: int, qden: int | None = None) -> QExpansion:
        return self.series().qexp(J, qden)

    def to_json(self):
        out = []
        for (kind, x, y), c in sorted(self.terms.items()):
            val = c.to_json() if isinstance(c, CycNum) else str(Fraction(c))
            out.append({"label": f"{kind}:{x},{y}", "coeff": val})
        return out


def _conductor(comb, N):
    L = N
    for c in comb.terms.values():
        if isinstance(c, CycNum):
            L = math.lcm(L, c.conductor)
    return L


def single(label: str, N: int, k: int) -> LabelCombination:
    """Parse 'E1:l1,l2' or 'E0:a,b' (also G1/G0) into a one-term combination."""
    kind, _, rest = label.partition(":")
    if kind not in ("E1", "E0", "G1", "G0"):
        raise ParameterError(f"unknown label kind {kind!r}")
    x, y = (int(v) for v in rest.split(","))
    if kind[1] == "0":
        if N < 3:
            raise ParameterError("Gamma0 labels need N >= 3")
        lab = LabelCombination(N, k, family=kind[0]).canonical((kind, x % N, y))
        if lab[1:] not in gamma0_labels(N):
            raise ParameterError(f"{label} is not a Gamma0({N}) label")
    elif math.gcd(math.gcd(x, y), N) != 1:
        raise ParameterError(f"({x},{y}) is not a point of order {N}")
    return LabelCombination(N, k, {(kind, x, y): 1}, kind[0])


def diamond(d: int, comb: LabelCombination) -> LabelCombination:
    N = comb.N
    if math.gcd(d, N) != 1:
        raise ParameterError(f"d={d} is not a unit mod {N}")
    dinv = pow(d, -1, N) if N > 1 else 0
    out = LabelCombination(N, comb.k, family=comb.family)
    for (kind, x, y), c in comb.terms.items():
        if kind[1] == "1":
            out.add_term((kind, dinv * x, d * y), c)
        else:
            out.add_term((kind, x, y), c)  # Gamma0 sums are fixed by every diamond
    return out


def tp_label(p: int, comb: LabelCombination) -> LabelCombination:
    N, k = comb.N, comb.k
    if not is_prime(p):
        raise ParameterError(f"{p} is not prime")
    if N % p == 0:
        raise ParameterError(f"p={p} divides the level {N}")
    pk = p ** (k - 1)
    pinv = pow(p, -1, N) if N > 1 else 0
    out = LabelCombination(N, k, family=comb.family)
    for (kind, x, y), c in comb.terms.items():
        if kind[1] == "1":
            out.add_term((kind, x, p * y), c * pk)
            out.add_term((kind, pinv * x, y), c)
        elif x == 0 or 2 * x == N:
            out.add_term((kind, x, y), c * (pk + 1))
        else:
            g = math.gcd(x, N // x)
            if g == 1:
                out.add_term((kind, x, y), c * (pk + 1))
            else:
                out.add_term((kind, x, (p * y) % g), c * pk)
                out.add_term((kind, x, (pow(p, -1, g) * y) % g), c)
    return out


def tp_qexp(f: QExpansion, p: int, k: int, diamond_image: QExpansion | None = None) -> QExpansion:
    """T_p on a q-expansion with integral exponents.

    b_j = a_{jp}(f) + p^(k-1) a_{j/p}(g) where g = <p> f; g defaults to f, which is
    right for diamond-invariant forms.
    """
    if not is_prime(p):
        raise ParameterError(f"{p} is not prime")
    try:
        f1 = f.project(1)
        g1 = diamond_image.project(1) if diamond_image is not None else f1
    except ValueError as exc:
        raise ParameterError("T_p needs integral q-exponents") from exc
    J = min(f1.truncation, g1.truncation * p) // p
    L = math.lcm(f1.conductor, g1.conductor)
    f1, g1 = f1.embed(L), g1.embed(L)
    pk = p ** (k - 1)
    out = []
    for j in range(J + 1):
        b = f1.coeffs[j * p]
        if j % p == 0:
            b = b + g1.coeffs[j // p] * pk
        out.append(b)
    if k == 2:
        nonhol = f1.nonhol * p + g1.nonhol
    else:
        nonhol = f1.nonhol * (pk + 1)
    return QExpansion(k, 1, out, nonhol)


def gamma1_labels(N: int) -> list:
    return sorted({gamma1_label(pt, N) for pt in lambda_points(N)})
