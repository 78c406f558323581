"""Truncated q-expansions in q_N = e(tau/N) with cyclotomic coefficients.

The extra coefficient ``nonhol`` multiplies 1/(pi Im tau); it is only ever
nonzero in weight 2.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .cyclotomic import CycNum, format_power_basis


class WeightMismatch(ValueError):
    pass


class QExpansion:
    __slots__ = ("weight", "qden", "coeffs", "nonhol")

    def __init__(self, weight: int, qden: int, coeffs: Sequence[CycNum], nonhol: CycNum | None = None):
        if not coeffs:
            raise ValueError("need at least the constant coefficient")
        L = coeffs[0].conductor
        if any(c.conductor != L for c in coeffs):
            raise ValueError("coefficients must share one conductor")
        self.weight = weight
        self.qden = qden
        self.coeffs = tuple(coeffs)
        self.nonhol = nonhol if nonhol is not None else CycNum.zero(L)
        if self.nonhol.conductor != L:
            raise ValueError("nonhol must share the coefficient conductor")

    @classmethod
    def zero(cls, weight: int, qden: int, J: int, L: int) -> "QExpansion":
        z = CycNum.zero(L)
        return cls(weight, qden, [z] * (J + 1), z)

    @property
    def truncation(self) -> int:
        return len(self.coeffs) - 1

    @property
    def conductor(self) -> int:
        return self.coeffs[0].conductor

    def __repr__(self):
        return f"QExpansion(k={self.weight}, qden={self.qden}, J={self.truncation})"

    def embed(self, L: int) -> "QExpansion":
        if L == self.conductor:
            return self
        return QExpansion(self.weight, self.qden, [c.embed(L) for c in self.coeffs],
                          self.nonhol.embed(L))

    def reindex(self, qden: int) -> "QExpansion":
        """Same series in the variable q_qden (qden a multiple of the current one)."""
        if qden % self.qden:
            raise ValueError(f"cannot re-index q_{self.qden} to q_{qden}")
        s = qden // self.qden
        if s == 1:
            return self
        z = CycNum.zero(self.conductor)
        out = [z] * (self.truncation * s + 1)
        for j, c in enumerate(self.coeffs):
            out[j * s] = c
        return QExpansion(self.weight, qden, out, self.nonhol)

    def project(self, qden: int) -> "QExpansion":
        """Inverse of reindex; requires the coefficients off the sublattice to vanish."""
        if self.qden % qden:
            raise ValueError("target denominator must divide the current one")
        s = self.qden // qden
        if any(not c.is_zero() for j, c in enumerate(self.coeffs) if j % s):
            raise ValueError("series has exponents outside the coarser lattice")
        return QExpansion(self.weight, qden, self.coeffs[::s], self.nonhol)

    def _align(self, other: "QExpansion"):
        if self.weight != other.weight:
            raise WeightMismatch(f"weights {self.weight} and {other.weight}")
        q = math.lcm(self.qden, other.qden)
        L = math.lcm(self.conductor, other.conductor)
        return self.reindex(q).embed(L), other.reindex(q).embed(L)

    def __add__(self, other: "QExpansion") -> "QExpansion":
        a, b = self._align(other)
        n = min(len(a.coeffs), len(b.coeffs))
        return QExpansion(a.weight, a.qden, [x + y for x, y in zip(a.coeffs[:n], b.coeffs[:n])],
                          a.nonhol + b.nonhol)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "QExpansion":
        if isinstance(c, CycNum):
            f = self.embed(math.lcm(self.conductor, c.conductor))
            c = c.embed(f.conductor)
        else:
            f, c = self, Fraction(c)
        return QExpansion(f.weight, f.qden, [c * x for x in f.coeffs], c * f.nonhol)

    def truncate(self, J: int) -> "QExpansion":
        return QExpansion(self.weight, self.qden, self.coeffs[:J + 1], self.nonhol)

    def is_holomorphic(self) -> bool:
        return self.nonhol.is_zero()

    def constant_term(self) -> CycNum:
        return self.coeffs[0]

    def is_zero(self) -> bool:
        return self.nonhol.is_zero() and all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        try:
            return (self - other).is_zero()
        except WeightMismatch:
            return False

    __hash__ = None

    def to_json(self) -> dict:
        return {"weight": self.weight, "qden": self.qden,
                "coeffs": [c.to_json() for c in self.coeffs],
                "nonhol": self.nonhol.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "QExpansion":
        return cls(int(obj["weight"]), int(obj["qden"]),
                   [CycNum.from_json(c) for c in obj["coeffs"]],
                   CycNum.from_json(obj["nonhol"]))

    def render(self, var: str | None = None) -> str:
        q = var or ("q" if self.qden == 1 else f"q{self.qden}")
        terms = []
        for j, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            s = format_power_basis(c)
            if j == 0:
                terms.append(f"({s})")
            else:
                terms.append(f"({s})*{q}^{j}" if j > 1 else f"({s})*{q}")
        if not self.nonhol.is_zero():
            terms.append(f"({format_power_basis(self.nonhol)})/(pi*Im(tau))")
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O({q}^{self.truncation + 1})"


def add(f: QExpansion, g: QExpansion) -> QExpansion:
    return f + g


def scale(c, f: QExpansion) -> QExpansion:
    return f.scale(c)


def is_holomorphic(f: QExpansion) -> bool:
    return f.is_holomorphic()


def constant_term(f: QExpansion) -> CycNum:
    return f.constant_term()
