"""Complete fans over a fixed fan matrix, and their simplicial subdivisions.

A fan is stored as its rays (the columns of the fan matrix ``V``) plus the
maximal cones as sorted tuples of 0-based column indices. Only pure fans
with full-dimensional maximal cones are supported.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from . import linalg
from ._parallel import pmap
from .cone import Cone, Position

log = logging.getLogger(__name__)

IndexSet = tuple[int, ...]


class InvalidFanError(ValueError):
    pass


def label(idx: Iterable[int]) -> str:
    """Human-readable 1-based cone label, e.g. ``<1,2,4>``."""
    return "<" + ",".join(str(i + 1) for i in sorted(idx)) + ">"


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    indices: tuple = ()

    def to_json(self) -> dict:
        return {"code": self.code, "message": self.message, "indices": [list(i) if isinstance(i, tuple) else i for i in self.indices]}


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def add(self, code, message, *indices):
        self.violations.append(Violation(code, message, tuple(indices)))

    def to_json(self) -> dict:
        return {"valid": self.valid, "violations": [v.to_json() for v in self.violations]}


class Fan:
    """A fan given by ray generators and maximal cones.

    Args:
        rays: primitive integer ray generators (the columns of the fan matrix).
        max_cones: maximal cones as collections of 0-based ray indices.
    """

    def __init__(self, rays: Sequence[Sequence[int]], max_cones: Iterable[Iterable[int]]):
        self.rays: tuple[tuple[int, ...], ...] = tuple(tuple(int(x) for x in r) for r in rays)
        self.max_cones: tuple[IndexSet, ...] = tuple(sorted(tuple(sorted(set(c))) for c in max_cones))
        self.dim = len(self.rays[0]) if self.rays else 0

    @classmethod
    def from_matrix(cls, V: Sequence[Sequence[int]], max_cones) -> "Fan":
        """Build from an ``n x m`` fan matrix whose columns are the rays."""
        return cls(linalg.transpose(V), max_cones)

    @property
    def fan_matrix(self) -> list[list[int]]:
        return linalg.transpose(self.rays)

    @property
    def nrays(self) -> int:
        return len(self.rays)

    def with_cones(self, max_cones) -> "Fan":
        return Fan(self.rays, max_cones)

    def cone(self, idx: Sequence[int]) -> Cone:
        return _cone_cache(self.rays, tuple(idx))

    def __eq__(self, other) -> bool:
        return isinstance(other, Fan) and self.rays == other.rays and self.max_cones == other.max_cones

    def __hash__(self) -> int:
        return hash((self.rays, self.max_cones))

    def __repr__(self) -> str:
        return f"Fan(dim={self.dim}, rays={len(self.rays)}, cones=[{', '.join(label(c) for c in self.max_cones)}])"

    # checks -----------------------------------------------------------------

    @cached_property
    def report(self) -> ValidationReport:
        return validate(self)

    @property
    def valid(self) -> bool:
        return self.report.valid

    def require_valid(self) -> None:
        if not self.valid:
            msgs = "; ".join(v.message for v in self.report.violations)
            raise InvalidFanError(f"invalid fan: {msgs}")

    @cached_property
    def complete(self) -> bool:
        return is_complete(self)

    @cached_property
    def simplicial(self) -> bool:
        return is_simplicial(self)

    def cone_facets(self, idx: IndexSet) -> list[IndexSet]:
        """Facets of a maximal cone as index sets of the rays they contain."""
        c = self.cone(idx)
        out = []
        for h in c.facets:
            out.append(tuple(i for i in idx if linalg.dot(h, self.rays[i]) == 0))
        return sorted(out)

    def locate(self, x: Sequence) -> list[IndexSet]:
        """Maximal cones containing ``x``."""
        return [c for c in self.max_cones if x in self.cone(c)]

    # serialization ----------------------------------------------------------

    def to_json(self) -> dict:
        return {"dim": self.dim, "rays": [list(r) for r in self.rays], "max_cones": [list(c) for c in self.max_cones]}

    @classmethod
    def from_json(cls, data: dict) -> "Fan":
        rays = data["rays"]
        fan = cls(rays, data["max_cones"])
        if "dim" in data and rays and int(data["dim"]) != fan.dim:
            raise ValueError(f"declared dim {data['dim']} does not match ray length {fan.dim}")
        if "dim" in data and not rays:
            fan.dim = int(data["dim"])
        return fan


_CONES: dict = {}


def _cone_cache(rays, idx) -> Cone:
    key = (rays, idx)
    c = _CONES.get(key)
    if c is None:
        c = Cone.from_generators(len(rays[0]), [rays[i] for i in idx])
        if len(_CONES) > 50000:
            _CONES.clear()
        _CONES[key] = c
    return c


def validate(f: Fan) -> ValidationReport:
    """Check every fan axiom the rest of the library relies on.

    Violations are collected, never raised.
    """
    rep = ValidationReport()
    n, m = f.dim, f.nrays
    if m == 0:
        rep.add("empty", "fan has no rays")
        return rep
    for i, r in enumerate(f.rays):
        if len(r) != n:
            rep.add("ray-length", f"ray {i + 1} has length {len(r)}, expected {n}", i)
        elif not any(r):
            rep.add("zero-ray", f"ray {i + 1} is zero", i)
        elif linalg.content(r) != 1:
            rep.add("non-primitive", f"ray {i + 1} is not primitive", i)
    if rep.violations:
        return rep
    for i, j in itertools.combinations(range(m), 2):
        if f.rays[i] == f.rays[j]:
            rep.add("duplicate-ray", f"rays {i + 1} and {j + 1} coincide", i, j)
    if not f.max_cones:
        rep.add("empty", "fan has no maximal cones")
        return rep
    used = set()
    good = []
    for c in f.max_cones:
        if any(i < 0 or i >= m for i in c):
            rep.add("bad-index", f"cone {c} refers to a missing ray", c)
            continue
        used.update(c)
        cone = f.cone(c)
        ok = True
        if not cone.is_pointed():
            rep.add("not-pointed", f"cone {label(c)} is not pointed", c)
            ok = False
        if not cone.is_full_dimensional():
            rep.add("not-full-dimensional", f"cone {label(c)} has dimension {cone.dim} < {n}", c)
            ok = False
        extremal = set(cone.rays)
        for i in c:
            if f.rays[i] not in extremal:
                rep.add("non-extremal", f"ray {i + 1} is not an extremal ray of {label(c)}", c, i)
                ok = False
        if ok:
            good.append(c)
    for i in range(m):
        if i not in used:
            rep.add("unused-ray", f"ray {i + 1} lies in no maximal cone", i)
    if len(set(f.max_cones)) != len(f.max_cones):
        rep.add("redundant", "duplicated maximal cone")

    def pair_check(pair):
        a, b = pair
        A, B = f.cone(a), f.cone(b)
        found = []
        meet = A.intersect(B)
        if not (meet.is_face_of(A) and meet.is_face_of(B)):
            found.append(("improper-intersection", f"cones {label(a)} and {label(b)} meet outside a common face", a, b))
        if a != b and (B.contains_cone(A) or A.contains_cone(B)):
            found.append(("redundant", f"cones {label(a)} and {label(b)} are nested", a, b))
        return found

    for res in pmap(pair_check, itertools.combinations(good, 2)):
        for v in res:
            rep.add(*v)
    return rep


def is_complete(f: Fan) -> bool:
    """Support equals the whole space, via facet pairing and connectivity."""
    f.require_valid()
    owners: dict[IndexSet, list[IndexSet]] = {}
    for c in f.max_cones:
        for F in f.cone_facets(c):
            owners.setdefault(F, []).append(c)
    if any(len(v) != 2 for v in owners.values()):
        return False
    adj: dict[IndexSet, set] = {c: set() for c in f.max_cones}
    for a, b in owners.values():
        adj[a].add(b)
        adj[b].add(a)
    start = f.max_cones[0]
    seen = {start}
    stack = [start]
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(f.max_cones)


def is_simplicial(f: Fan) -> bool:
    f.require_valid()
    return all(len(c) == f.dim for c in f.max_cones)


# triangulations -------------------------------------------------------------


def _hyperplane_normal(rays, idx) -> tuple[int, ...] | None:
    basis = linalg.rational_kernel([list(rays[i]) for i in idx], len(rays[0]))
    return basis[0] if len(basis) == 1 else None


def _generic_point(rays, idx, n):
    hyps = []
    for F in itertools.combinations(idx, n - 1):
        h = _hyperplane_normal(rays, F)
        if h is not None:
            hyps.append(h)
    k = 2
    while True:
        p = [0] * n
        for w, i in enumerate(idx):
            p = [a + k ** w * b for a, b in zip(p, rays[i])]
        if all(linalg.dot(h, p) != 0 for h in hyps):
            return p
        k += 1


def triangulations_of_cone(f: Fan, cone_index: int) -> list[list[IndexSet]]:
    """All triangulations of a maximal cone that use only its own rays.

    Every triangulation contains exactly one simplex around a fixed generic
    interior point; starting from each such seed, the open interior facet
    that sorts first is always closed next, branching over every simplex
    that fits on its far side.
    """
    if not 0 <= cone_index < len(f.max_cones):
        raise IndexError(f"cone index {cone_index} out of range")
    idx = f.max_cones[cone_index]
    n = f.dim
    rays = f.rays
    sigma = f.cone(idx)
    if not sigma.is_full_dimensional():
        raise InvalidFanError(f"cone {label(idx)} is not full-dimensional")
    if len(idx) == n:
        return [[idx]]

    simplices = [T for T in itertools.combinations(idx, n)
                 if linalg.rank([rays[i] for i in T]) == n]
    boundary = {}

    def on_boundary(F):
        if F not in boundary:
            boundary[F] = any(all(linalg.dot(h, rays[i]) == 0 for i in F) for h in sigma.facets)
        return boundary[F]

    compat: dict = {}

    def compatible(S, T):
        key = (S, T) if S < T else (T, S)
        if key not in compat:
            A, B = f.cone(S), f.cone(T)
            meet = A.intersect(B)
            compat[key] = meet.is_face_of(A) and meet.is_face_of(B)
        return compat[key]

    p = _generic_point(rays, idx, n)
    seeds = [T for T in simplices if f.cone(T).contains(p) is Position.INTERIOR]
    found = set()

    def extend(chosen: list[IndexSet], open_facets: dict[IndexSet, IndexSet]):
        if not open_facets:
            found.add(tuple(sorted(chosen)))
            return
        F = min(open_facets)
        S = open_facets[F]
        h = _hyperplane_normal(rays, F)
        apex = next(i for i in S if i not in F)
        side = linalg.dot(h, rays[apex])
        for j in idx:
            if j in F or linalg.dot(h, rays[j]) * side >= 0:
                continue
            T = tuple(sorted(F + (j,)))
            if T in chosen or not all(compatible(T, U) for U in chosen):
                continue
            nxt = dict(open_facets)
            bad = False
            for G in itertools.combinations(T, n - 1):
                if on_boundary(G):
                    continue
                if G in nxt:
                    del nxt[G]
                elif any(set(G) <= set(U) for U in chosen):
                    bad = True
                    break
                else:
                    nxt[G] = T
            if not bad:
                extend(chosen + [T], nxt)

    for T in seeds:
        open_facets = {G: T for G in itertools.combinations(T, n - 1) if not on_boundary(G)}
        extend([T], open_facets)
    return [list(t) for t in sorted(found)]


def simplicial_subdivisions(f: Fan) -> list[Fan]:
    """Every simplicial fan obtained by triangulating each non-simplicial cone.

    Per-cone triangulations are combined in odometer order (last cone varies
    fastest). Combinations whose pieces do not glue into a fan are dropped;
    that can only happen when two non-simplicial cones share a
    non-simplicial face.
    """
    f.require_valid()
    if f.simplicial:
        return [f]
    fixed = [c for c in f.max_cones if len(c) == f.dim]
    todo = [k for k, c in enumerate(f.max_cones) if len(c) != f.dim]
    options = pmap(lambda k: triangulations_of_cone(f, k), todo)
    out = []
    for combo in itertools.product(*options):
        cones = list(fixed)
        for tri in combo:
            cones.extend(tri)
        child = f.with_cones(cones)
        if not child.valid:
            log.warning("dropping incompatible subdivision %s", child)
            continue
        out.append(child)
    return out


@dataclass
class SubdivisionReport:
    parent: Fan
    child: Fan
    added_walls: list[IndexSet]

    def to_json(self) -> dict:
        return {
            "parent": self.parent.to_json(),
            "child": self.child.to_json(),
            "added_walls": [list(w) for w in self.added_walls],
        }


def refines(child: Fan, parent: Fan) -> bool:
    return all(any(parent.cone(p).contains_cone(child.cone(c)) for p in parent.max_cones)
               for c in child.max_cones)


def added_walls(parent: Fan, child: Fan) -> SubdivisionReport:
    """Codimension-one cones of ``child`` that are not faces of ``parent``.

    Each one is the fan-side picture of an exceptional curve of the small
    morphism ``X(child) -> X(parent)``.
    """
    if parent.rays != child.rays:
        raise ValueError("parent and child use different rays")
    if not refines(child, parent):
        raise ValueError("child does not refine parent")
    old = {F for c in parent.max_cones for F in parent.cone_facets(c)}
    new = {F for c in child.max_cones for F in child.cone_facets(c)}
    return SubdivisionReport(parent, child, sorted(new - old))
