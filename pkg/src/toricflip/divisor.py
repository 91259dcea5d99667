"""Torus-invariant divisors: classes, Cartier data, ampleness."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from . import linalg
from .cone import Position
from .fan import Fan, IndexSet, InvalidFanError, label


class NotQCartierError(ValueError):
    pass


def fmt(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class TDivisor:
    """``sum_rho a_rho D_rho`` with one rational coefficient per ray."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs):
        object.__setattr__(self, "coeffs", tuple(Fraction(a) for a in coeffs))

    def __len__(self):
        return len(self.coeffs)

    def __add__(self, other: "TDivisor") -> "TDivisor":
        return TDivisor([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def scale(self, t) -> "TDivisor":
        return TDivisor([t * a for a in self.coeffs])

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.coeffs)

    def to_json(self) -> dict:
        return {"coeffs": [fmt(a) for a in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "TDivisor":
        return cls([Fraction(str(a)) for a in data["coeffs"]])

    def __str__(self) -> str:
        terms = [f"{fmt(a)}*D{i + 1}" for i, a in enumerate(self.coeffs) if a]
        return " + ".join(terms) or "0"


def _weights(Q):
    from .gkz import as_weights
    return as_weights(Q)


def divisor_class(Q, d: TDivisor) -> tuple[Fraction, ...]:
    Q = _weights(Q)
    if len(d) != Q.m:
        raise ValueError(f"divisor has {len(d)} coefficients, Q has {Q.m} columns")
    return tuple(Fraction(x) for x in linalg.matvec(Q.Q, d.coeffs))


def anticanonical_class(Q) -> tuple[Fraction, ...]:
    Q = _weights(Q)
    return tuple(Fraction(sum(row)) for row in Q.Q)


@dataclass
class CartierData:
    is_cartier: bool
    per_cone: list[tuple[IndexSet, tuple[Fraction, ...], bool]]

    def __bool__(self):
        return self.is_cartier


def _local_data(f: Fan, d: TDivisor):
    f.require_valid()
    if len(d) != f.nrays:
        raise ValueError("divisor length does not match ray count")
    out = []
    for c in f.max_cones:
        A = [list(f.rays[i]) for i in c]
        b = [-d.coeffs[i] for i in c]
        m = linalg.solve(A, b)
        if m is None:
            raise NotQCartierError(f"divisor is not Q-Cartier on {label(c)}")
        out.append((c, tuple(m), all(x.denominator == 1 for x in m)))
    return out


def is_cartier(f: Fan, d: TDivisor) -> CartierData:
    """Cartier test: an integral ``m_sigma`` with ``<m, v_i> = -a_i`` on every cone."""
    if not d.is_integral():
        raise ValueError("is_cartier needs integral coefficients; see cartier_multiple")
    data = _local_data(f, d)
    return CartierData(all(ok for _, _, ok in data), data)


def cartier_multiple(f: Fan, d: TDivisor) -> int:
    """Least positive ``t`` with ``t * d`` integral and Cartier."""
    if not f.simplicial:
        raise InvalidFanError("cartier_multiple needs a simplicial fan")
    t = 1
    for a in d.coeffs:
        t = lcm(t, a.denominator)
    for _, m, _ in _local_data(f, d):
        for x in m:
            t = lcm(t, x.denominator)
    return t


def is_ample(f: Fan, Q, d: TDivisor) -> bool:
    from .gkz import nef_cone

    Q = _weights(Q)
    if not (f.complete and f.simplicial):
        raise InvalidFanError("is_ample needs a complete simplicial fan")
    nef = nef_cone(f, Q)
    if nef.dim != Q.r:
        return False
    return nef.contains(divisor_class(Q, d)) is Position.INTERIOR


def principal_divisor(f: Fan, u: Sequence[int]) -> TDivisor:
    """``div(chi^u) = sum <u, v_rho> D_rho``."""
    return TDivisor([linalg.dot(u, r) for r in f.rays])
