"""Command-line front end.

Every verb reads a fan file, runs one stage of the pipeline and prints
canonical JSON (sorted keys) on stdout. Exit codes: 0 success, 1 domain
error, 2 I/O or schema error.
"""
from __future__ import annotations

import argparse
import functools
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

import jsonschema

from . import __version__
from .cone import Cone
from .divisor import anticanonical_class, fmt
from .fan import Fan, InvalidFanError, added_walls, is_complete, is_simplicial, label, simplicial_subdivisions, validate
from .flip import NoChamberError, PreconditionError, find_flip, projectivize, verify_flip
from .gkz import (GaleDualityError, InconsistentInputError, SecondaryFan, WeightMatrix, bunch,
                  effective_cone, gale_dual, is_projective, nef_cone, secondary_fan,
                  supplied_weights)

log = logging.getLogger("toricflip")

VERBS = ("check", "subdivide", "gale", "chambers", "nef", "projective", "flip", "projectivize", "section")

FAN_SCHEMA = {
    "type": "object",
    "required": ["rays", "max_cones"],
    "properties": {
        "dim": {"type": "integer", "minimum": 1},
        "rays": {"type": "array", "minItems": 1,
                 "items": {"type": "array", "minItems": 1, "items": {"type": "integer"}}},
        "max_cones": {"type": "array",
                      "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
    },
}

WEIGHTS_SCHEMA = {
    "type": "object",
    "required": ["Q"],
    "properties": {
        "Q": {"type": "array", "minItems": 1,
              "items": {"type": "array", "minItems": 1, "items": {"type": "integer"}}},
        "source": {"enum": ["computed", "supplied"]},
    },
}


class CLIError(Exception):
    def __init__(self, code: str, message: str, status: int):
        super().__init__(message)
        self.code = code
        self.status = status


class UnsupportedError(ValueError):
    pass


def _load(path: str, schema: dict) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise CLIError("io", f"cannot read {path}: {exc}", 2) from exc
    except json.JSONDecodeError as exc:
        raise CLIError("schema", f"{path} is not valid JSON: {exc}", 2) from exc
    try:
        jsonschema.validate(data, schema)
    except jsonschema.ValidationError as exc:
        raise CLIError("schema", f"{path}: {exc.message}", 2) from exc
    return data


def load_fan(path: str) -> Fan:
    data = _load(path, FAN_SCHEMA)
    try:
        return Fan.from_json(data)
    except ValueError as exc:
        raise CLIError("schema", f"{path}: {exc}", 2) from exc


def weights_for(fan: Fan, weights_path: str | None) -> WeightMatrix:
    if weights_path is None:
        return gale_dual(fan.fan_matrix)
    data = _load(weights_path, WEIGHTS_SCHEMA)
    return supplied_weights(fan.fan_matrix, data["Q"])


# section data ------------------------------------------------------------------


def _slice(v) -> tuple[Fraction, Fraction]:
    s = sum(v)
    if s <= 0:
        raise UnsupportedError(f"ray {v} does not meet the plane x1+x2+x3 = 1")
    return Fraction(v[0], s), Fraction(v[1], s)


def _ccw(points):
    cx = sum(p[0] for p in points) / len(points)
    cy = sum(p[1] for p in points) / len(points)

    def half(d):
        return 0 if d[1] > 0 or (d[1] == 0 and d[0] > 0) else 1

    def cmp(p, q):
        a = (p[0] - cx, p[1] - cy)
        b = (q[0] - cx, q[1] - cy)
        if half(a) != half(b):
            return half(a) - half(b)
        cross = a[0] * b[1] - a[1] * b[0]
        return -1 if cross > 0 else (1 if cross < 0 else 0)

    return sorted(points, key=functools.cmp_to_key(cmp))


def _polygon(name: str, cone: Cone) -> dict:
    if not cone.is_pointed():
        raise UnsupportedError(f"{name} is not pointed")
    pts = _ccw([_slice(r) for r in cone.rays])
    return {"label": name, "vertices": [[fmt(x), fmt(y)] for x, y in pts]}


def emit_section(Q, sf: SecondaryFan) -> dict:
    """Slice every chamber, Mov and Eff with the plane ``x1 + x2 + x3 = 1``.

    Vertices are the slices of the extremal rays, given in ``(x1, x2)``
    coordinates and ordered counterclockwise.
    """
    if sf.Q.r != 3:
        raise UnsupportedError(f"sections need rank 3, got rank {sf.Q.r}")
    polygons = [_polygon(f"chamber-{i + 1}", ch.cone) for i, ch in enumerate(sf.chambers)]
    polygons.append(_polygon("Mov", sf.mov))
    polygons.append(_polygon("Eff", effective_cone(sf.Q)))
    x, y = _slice(anticanonical_class(sf.Q))
    return {
        "plane": "sum=1",
        "polygons": polygons,
        "points": [{"label": "anticanonical", "coords": [fmt(x), fmt(y)]}],
    }


# verbs ---------------------------------------------------------------------------


def _check(fan, args):
    rep = validate(fan)
    out = {"validation": rep.to_json(), "complete": None, "simplicial": None}
    if rep.valid:
        out["complete"] = is_complete(fan)
        out["simplicial"] = is_simplicial(fan)
    return out


def _subdivide(fan, args):
    subs = simplicial_subdivisions(fan)
    for s in subs:
        log.info("subdivision: %s", " ".join(label(c) for c in s.max_cones))
    return {
        "count": len(subs),
        "fans": [s.to_json() for s in subs],
        "added_walls": [[list(w) for w in added_walls(fan, s).added_walls] for s in subs],
    }


def _gale(fan, args):
    Q = weights_for(fan, args.weights)
    return {"Q": [list(r) for r in Q.Q], "source": Q.source, "torsion_free": Q.torsion_free}


def _chambers(fan, args):
    Q = weights_for(fan, args.weights)
    sf = secondary_fan(Q, fan.dim)
    for i, ch in enumerate(sf.chambers):
        log.info("chamber %d: rays %s, fan %s", i + 1, ch.cone.rays,
                 " ".join(label(I) for I in ch.compatible_bases))
    out = sf.to_json()
    out["eff"] = effective_cone(Q).to_json()
    out["count"] = len(sf.chambers)
    return out


def _nef(fan, args):
    Q = weights_for(fan, args.weights)
    nef = nef_cone(fan, Q)
    return {"nef": nef.to_json(), "bunch": [c.to_json() for c in bunch(fan, Q)], "full_dimensional": nef.dim == Q.r}


def _projective(fan, args):
    Q = weights_for(fan, args.weights)
    nef = nef_cone(fan, Q)
    return {"projective": is_projective(fan, Q), "nef_dim": nef.dim, "rank": Q.r}


def _flip(fan, args):
    Q = weights_for(fan, args.weights)
    cert = find_flip(fan, Q)
    report = verify_flip(cert, Q)
    out = cert.to_json()
    out["verification"] = {"ok": report.ok, "checks": report.checks, "notes": report.notes}
    return out


def _projectivize(fan, args):
    Q = weights_for(fan, args.weights)
    res = projectivize(fan, Q, prefer_projective_subdivision=args.prefer_projective_subdivision)
    return res.to_json()


def _section(fan, args):
    Q = weights_for(fan, args.weights)
    sf = secondary_fan(Q, fan.dim)
    try:
        return emit_section(Q, sf)
    except UnsupportedError as exc:
        print(f"warning: {exc}; emitting raw chamber cones", file=sys.stderr)
        return {"plane": None, "warning": str(exc), "chambers": [c.cone.to_json() for c in sf.chambers],
                "mov": sf.mov.to_json(), "eff": effective_cone(Q).to_json()}


HANDLERS = {
    "check": _check,
    "subdivide": _subdivide,
    "gale": _gale,
    "chambers": _chambers,
    "nef": _nef,
    "projective": _projective,
    "flip": _flip,
    "projectivize": _projectivize,
    "section": _section,
}

DOMAIN_ERRORS = (InvalidFanError, PreconditionError, NoChamberError, GaleDualityError,
                 InconsistentInputError, ValueError)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toricflip", description=__doc__.splitlines()[0])
    p.add_argument("verb", choices=VERBS)
    p.add_argument("fan", help="fan JSON file")
    p.add_argument("--weights", help="weight matrix JSON to use instead of the computed Gale dual")
    p.add_argument("--prefer-projective-subdivision", action="store_true",
                   help="projectivize: pick a projective subdivision when one exists")
    p.add_argument("-o", "--output-dir", help="also write the result to DIR/<fan>.<verb>.json")
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("--version", action="version", version=__version__)
    return p


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        fan = load_fan(args.fan)
        result = HANDLERS[args.verb](fan, args)
        status = 0
    except CLIError as exc:
        result = {"error": {"code": exc.code, "message": str(exc)}}
        status = exc.status
    except DOMAIN_ERRORS as exc:
        result = {"error": {"code": _code(exc), "message": str(exc)}}
        status = 1
    if status:
        print(f"error: {result['error']['message']}", file=sys.stderr)
    text = dumps(result)
    stdout.write(text)
    if args.output_dir and status == 0:
        out = Path(args.output_dir)
        try:
            out.mkdir(parents=True, exist_ok=True)
            (out / f"{Path(args.fan).stem}.{args.verb}.json").write_text(text, encoding="utf-8")
        except OSError as exc:
            print(f"error: cannot write output: {exc}", file=sys.stderr)
            return 2
    return status


def _code(exc: Exception) -> str:
    return {
        InvalidFanError: "invalid-fan",
        PreconditionError: "precondition",
        NoChamberError: "no-chamber",
        GaleDualityError: "gale-duality",
        InconsistentInputError: "inconsistent-input",
    }.get(type(exc), "domain")


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
