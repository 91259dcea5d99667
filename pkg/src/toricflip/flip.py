"""Certified D-flips and the projectivization pipeline.

A non-projective complete simplicial fan has a nef cone that is a proper
face of some full-dimensional chamber of the secondary fan. The fan of
that chamber is the flip target, and any integral Cartier divisor whose
class sits in the chamber's relative interior certifies the flip.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from ._parallel import pmap
from .cone import Cone, Position
from .divisor import TDivisor, cartier_multiple, divisor_class, fmt, is_ample, is_cartier
from .fan import Fan, InvalidFanError, SubdivisionReport, added_walls, label, simplicial_subdivisions
from .gkz import (WeightMatrix, as_weights, chamber_to_fan, gale_dual, is_projective,
                  nef_cone, secondary_fan)

log = logging.getLogger(__name__)


class PreconditionError(ValueError):
    pass


class NoChamberError(RuntimeError):
    """No full-dimensional chamber has the nef cone as a proper face.

    This cannot happen for consistent input; it signals corrupted data.
    """


CHECKS = (
    "same_rays_nontrivial",
    "target_projective",
    "source_nef_proper_face",
    "divisor_cartier_on_source",
    "class_separates",
    "ample_on_target",
)


@dataclass
class VerificationReport:
    checks: dict[str, bool]
    notes: dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def failed(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v]


@dataclass
class FlipCertificate:
    source: Fan
    target: Fan
    divisor: TDivisor
    divisor_class: tuple[Fraction, ...]
    source_nef: Cone
    target_chamber: Cone
    checks: dict[str, bool] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "divisor": [fmt(a) for a in self.divisor.coeffs],
            "class": [fmt(a) for a in self.divisor_class],
            "source_nef": self.source_nef.to_json(),
            "target_chamber": self.target_chamber.to_json(),
            "checks": dict(self.checks),
        }

    @classmethod
    def from_json(cls, data: dict) -> "FlipCertificate":
        source = Fan.from_json(data["source"])
        return cls(
            source=source,
            target=Fan.from_json(data["target"]),
            divisor=TDivisor([Fraction(str(a)) for a in data["divisor"]]),
            divisor_class=tuple(Fraction(str(a)) for a in data["class"]),
            source_nef=Cone.from_json(data["source_nef"]),
            target_chamber=Cone.from_json(data["target_chamber"]),
            checks=dict(data.get("checks", {})),
        )


def _require_weights(f: Fan, Q) -> WeightMatrix:
    if Q is None:
        return gale_dual(f.fan_matrix)
    Q = as_weights(Q)
    if any(any(row) for row in linalg.matmul(Q.Q, f.rays)):
        raise PreconditionError("weight matrix does not annihilate the rays")
    return Q


def first_basis(Q: WeightMatrix) -> tuple[int, ...]:
    """Lexicographically first set of ``r`` linearly independent columns."""
    for B in itertools.combinations(range(Q.m), Q.r):
        if linalg.rank([Q.column(j) for j in B]) == Q.r:
            return B
    raise PreconditionError("weight matrix has deficient rank")


def class_preimage(Q: WeightMatrix, w: Sequence) -> TDivisor:
    """A divisor of class ``w`` supported on the first column basis."""
    B = first_basis(Q)
    a_B = linalg.solve([[Q.Q[i][j] for j in B] for i in range(Q.r)], list(w))
    coeffs = [Fraction(0)] * Q.m
    for j, a in zip(B, a_B):
        coeffs[j] = a
    return TDivisor(coeffs)


def find_flip(f: Fan, Q=None) -> FlipCertificate:
    """Build a certified D-flip from a non-projective fan to a projective one.

    Among the chambers having ``Nef(f)`` as a proper face, the one with the
    smallest canonical form is chosen. The divisor is a preimage of the
    chamber's relative-interior point, scaled to be integral and Cartier
    on ``f``.
    """
    f.require_valid()
    if not (f.complete and f.simplicial):
        raise PreconditionError("find_flip needs a complete simplicial fan")
    Q = _require_weights(f, Q)
    if is_projective(f, Q):
        raise PreconditionError("fan is already projective; nothing to flip")
    nef = nef_cone(f, Q)
    sf = secondary_fan(Q, f.dim)
    hits = pmap(lambda ch: nef != ch.cone and nef.is_face_of(ch.cone), sf.chambers)
    candidates = [ch for ch, ok in zip(sf.chambers, hits) if ok]
    if not candidates:
        raise NoChamberError("no full-dimensional chamber has the nef cone as a face")
    gamma = min(candidates, key=lambda ch: ch.cone.sort_key())
    target = chamber_to_fan(Q, gamma, f.fan_matrix)
    w = gamma.cone.relint_point()
    d = class_preimage(Q, w)
    d = d.scale(cartier_multiple(f, d))
    cert = FlipCertificate(f, target, d, divisor_class(Q, d), nef, gamma.cone)
    report = verify_flip(cert, Q)
    cert.checks = report.checks
    if not report.ok:
        raise NoChamberError(f"constructed flip failed its own checks: {report.failed()}")
    log.info("flip %s -> %s with D = %s", [label(c) for c in f.max_cones],
             [label(c) for c in target.max_cones], d)
    return cert


def verify_flip(c: FlipCertificate, Q) -> VerificationReport:
    """Recheck every condition of a flip certificate from scratch.

    Never raises; a check that errors out counts as failed and the reason
    lands in ``notes``.
    """
    Q = as_weights(Q)
    checks = {}
    notes = {}

    def run(name, fn):
        try:
            checks[name] = bool(fn())
        except Exception as exc:  # verification is total
            checks[name] = False
            notes[name] = f"{type(exc).__name__}: {exc}"

    src, tgt = c.source, c.target

    run("same_rays_nontrivial", lambda: src.rays == tgt.rays and set(src.max_cones) != set(tgt.max_cones))
    run("target_projective", lambda: tgt.valid and tgt.complete and tgt.simplicial and is_projective(tgt, Q))

    def proper_face():
        s_nef, t_nef = nef_cone(src, Q), nef_cone(tgt, Q)
        return s_nef != t_nef and s_nef.is_face_of(t_nef)

    run("source_nef_proper_face", proper_face)
    run("divisor_cartier_on_source", lambda: c.divisor.is_integral() and is_cartier(src, c.divisor).is_cartier)

    def separates():
        cls = divisor_class(Q, c.divisor)
        if cls != tuple(c.divisor_class):
            notes["class_separates"] = "stored class differs from Q * divisor"
            return False
        s_nef, t_nef = nef_cone(src, Q), nef_cone(tgt, Q)
        if t_nef.contains(cls) is not Position.INTERIOR:
            return False
        pos = s_nef.contains(cls)
        if pos is Position.INTERIOR:
            return False
        if s_nef != t_nef and s_nef.is_face_of(t_nef) and pos is not Position.OUTSIDE:
            return False
        return True

    run("class_separates", separates)
    run("ample_on_target", lambda: is_ample(tgt, Q, c.divisor))
    return VerificationReport(checks, notes)


@dataclass
class PipelineResult:
    input: Fan
    resolution: SubdivisionReport | None
    flip: FlipCertificate | None
    final: Fan
    weights: WeightMatrix

    def to_json(self) -> dict:
        return {
            "input": self.input.to_json(),
            "resolution": self.resolution.to_json() if self.resolution else None,
            "flip": self.flip.to_json() if self.flip else None,
            "final": self.final.to_json(),
            "weights": self.weights.to_json(),
        }


def projectivize(f: Fan, Q=None, prefer_projective_subdivision: bool = False) -> PipelineResult:
    """Small resolution followed by at most one flip.

    The first simplicial subdivision is used as the resolution unless
    ``prefer_projective_subdivision`` asks to look for a projective one
    first.
    """
    f.require_valid()
    if not f.complete:
        raise InvalidFanError("projectivize needs a complete fan")
    Q = _require_weights(f, Q)
    resolution = None
    resolved = f
    if not f.simplicial:
        subs = simplicial_subdivisions(f)
        if not subs:
            raise InvalidFanError("no simplicial subdivision on the existing rays")
        resolved = subs[0]
        if prefer_projective_subdivision:
            resolved = next((s for s in subs if is_projective(s, Q)), subs[0])
        resolution = added_walls(f, resolved)
        log.info("resolved with %d new walls", len(resolution.added_walls))
    if is_projective(resolved, Q):
        return PipelineResult(f, resolution, None, resolved, Q)
    cert = find_flip(resolved, Q)
    return PipelineResult(f, resolution, cert, cert.target, Q)
