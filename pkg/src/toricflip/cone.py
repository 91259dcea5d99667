"""Exact rational polyhedral cones.

A :class:`Cone` keeps two descriptions of the same set::

    V-side:  span(lineality) + cone(rays)
    H-side:  {x : <e, x> = 0 for e in equations, <h, x> >= 0 for h in facets}

Whichever side was not supplied is computed on first use with an
incremental double description conversion and cached. Both sides are
stored in canonical form (primitive integer vectors, rays projected onto
the orthogonal complement of the lineality space, facet normals projected
onto the linear span, lexicographically sorted), so equal cones compare
and serialize identically.
"""
from __future__ import annotations

import enum
from functools import cached_property
from typing import Iterable, Sequence

from . import linalg
from .linalg import dot, primitive

Vector = tuple[int, ...]


class Position(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


class ZeroConeError(ValueError):
    pass


def _canonical_space(vectors: Iterable[Sequence], dim: int) -> list[Vector]:
    return linalg.row_space_basis([list(v) for v in vectors], dim)


def _canonical_rays(vectors: Iterable[Sequence], modulo: Sequence[Vector]) -> list[Vector]:
    out = set()
    for v in vectors:
        p = primitive(linalg.project_out(v, modulo))
        if any(p):
            out.add(p)
    return sorted(out)


def double_description(dim: int, constraints: Sequence[Sequence[int]]) -> tuple[list[Vector], list[Vector]]:
    """Convert ``{x : A x >= 0}`` to ``(lineality_basis, extremal_rays)``.

    Constraints are added one at a time, starting from the whole space.
    While the current lineality space is not orthogonal to the new
    constraint, one lineality direction is turned into a ray; otherwise the
    classical double description step runs and candidate rays are kept only
    if they pass the algebraic extremality test (the constraints tight at
    the ray have rank ``dim - dim(lineality) - 1``).
    """
    lin: list[list[int]] = linalg.identity(dim)
    rays: list[Vector] = []
    seen: list[Vector] = []
    for a in constraints:
        a = tuple(int(x) for x in a)
        if not any(a):
            continue
        seen.append(a)
        k = next((i for i, l in enumerate(lin) if dot(a, l) != 0), None)
        if k is not None:
            hit = lin[k]
            al0 = dot(a, hit)
            if al0 < 0:
                hit = [-x for x in hit]
                al0 = -al0
            new_lin = []
            for i, l in enumerate(lin):
                if i == k:
                    continue
                al = dot(a, l)
                v = primitive([al0 * x - al * y for x, y in zip(l, hit)])
                if any(v):
                    new_lin.append(list(v))
            new_rays = []
            for r in rays:
                ar = dot(a, r)
                new_rays.append(primitive([al0 * x - ar * y for x, y in zip(r, hit)]))
            new_rays.append(primitive(hit))
            lin = new_lin
            rays = new_rays
            continue

        pos = [r for r in rays if dot(a, r) > 0]
        zero = [r for r in rays if dot(a, r) == 0]
        neg = [r for r in rays if dot(a, r) < 0]
        if not neg:
            continue
        target = dim - len(lin) - 1
        cands = []
        for p in pos:
            ap = dot(a, p)
            zp = {i for i, c in enumerate(seen) if dot(c, p) == 0}
            for n in neg:
                zn = {i for i, c in enumerate(seen) if dot(c, n) == 0}
                common = zp & zn
                # adjacent pairs share a face of dimension one less than
                # the ray's tight set allows
                if len(common) < target - 1:
                    continue
                if linalg.rank([seen[i] for i in common]) != target - 1:
                    continue
                an = dot(a, n)
                cands.append(primitive([ap * y - an * x for x, y in zip(p, n)]))
        rays = pos + zero + _dedupe(cands)
    return [tuple(l) for l in lin], _dedupe(rays)


def _dedupe(vs: Iterable[Vector]) -> list[Vector]:
    out = []
    got = set()
    for v in vs:
        if v not in got and any(v):
            got.add(v)
            out.append(v)
    return out


class Cone:
    """Rational polyhedral cone in ``Q^dim``.

    Build one with :meth:`from_generators` or :meth:`from_halfspaces`;
    the constructor itself is internal.
    """

    def __init__(self, dim: int, *, generators=None, halfspaces=None):
        self.ambient_dim = dim
        self._in_gens = generators
        self._in_hs = halfspaces

    # construction ---------------------------------------------------------

    @classmethod
    def from_generators(cls, dim: int, gens: Iterable[Sequence]) -> "Cone":
        gens = [tuple(g) for g in gens]
        for g in gens:
            if len(g) != dim:
                raise ValueError(f"generator {g} does not have length {dim}")
        return cls(dim, generators=[primitive(g) for g in gens if any(g)])

    @classmethod
    def from_halfspaces(cls, dim: int, normals: Iterable[Sequence], equations: Iterable[Sequence] = ()) -> "Cone":
        hs = [tuple(n) for n in normals]
        for e in equations:
            hs.append(tuple(e))
            hs.append(tuple(-x for x in e))
        for n in hs:
            if len(n) != dim:
                raise ValueError(f"normal {n} does not have length {dim}")
        return cls(dim, halfspaces=[primitive(n) for n in hs if any(n)])

    @classmethod
    def zero(cls, dim: int) -> "Cone":
        return cls.from_generators(dim, [])

    @classmethod
    def ray(cls, v: Sequence) -> "Cone":
        return cls.from_generators(len(v), [v])

    # representations --------------------------------------------------------

    @cached_property
    def _vrep(self) -> tuple[list[Vector], list[Vector]]:
        if self._in_hs is not None:
            lin, rays = double_description(self.ambient_dim, self._in_hs)
        else:
            eqs, facets = self._hrep
            cons = list(facets) + list(eqs) + [tuple(-x for x in e) for e in eqs]
            lin, rays = double_description(self.ambient_dim, cons)
        lin = _canonical_space(lin, self.ambient_dim)
        return lin, _canonical_rays(rays, lin)

    @cached_property
    def _hrep(self) -> tuple[list[Vector], list[Vector]]:
        if self._in_gens is not None:
            gens = self._in_gens
        else:
            lin, rays = self._vrep
            gens = list(rays) + list(lin) + [tuple(-x for x in l) for l in lin]
        # the dual cone's lineality is the orthogonal complement of the span,
        # its extremal rays are the facet normals
        eqs, facets = double_description(self.ambient_dim, gens)
        eqs = _canonical_space(eqs, self.ambient_dim)
        return eqs, _canonical_rays(facets, eqs)

    @property
    def lineality(self) -> list[Vector]:
        return self._vrep[0]

    @property
    def rays(self) -> list[Vector]:
        """Extremal rays modulo the lineality space."""
        return self._vrep[1]

    @property
    def equations(self) -> list[Vector]:
        return self._hrep[0]

    @property
    def facets(self) -> list[Vector]:
        return self._hrep[1]

    @property
    def generators(self) -> list[Vector]:
        """Canonical generating set: rays plus both signs of the lineality basis."""
        lin = self.lineality
        return sorted(set(self.rays) | set(lin) | {tuple(-x for x in l) for l in lin})

    @property
    def halfspaces(self) -> list[Vector]:
        eqs = self.equations
        return sorted(set(self.facets) | set(eqs) | {tuple(-x for x in e) for e in eqs})

    def to_halfspaces(self) -> list[Vector]:
        return self.halfspaces

    # queries ----------------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.ambient_dim - len(self.equations)

    def is_pointed(self) -> bool:
        return not self.lineality

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_dim

    def contains(self, x: Sequence) -> Position:
        """Classify ``x`` against the relative interior, boundary and outside."""
        if len(x) != self.ambient_dim:
            raise ValueError("point has wrong length")
        if any(dot(e, x) != 0 for e in self.equations):
            return Position.OUTSIDE
        vals = [dot(h, x) for h in self.facets]
        if any(v < 0 for v in vals):
            return Position.OUTSIDE
        if any(v == 0 for v in vals):
            return Position.BOUNDARY
        return Position.INTERIOR

    def __contains__(self, x) -> bool:
        return self.contains(x) is not Position.OUTSIDE

    def contains_cone(self, other: "Cone") -> bool:
        return all(g in self for g in other.generators)

    def relint_point(self) -> tuple[int, ...]:
        """Sum of the canonical extremal rays (the origin for a linear space)."""
        if self.is_zero():
            raise ZeroConeError("the zero cone has no relative interior point besides 0")
        out = [0] * self.ambient_dim
        for r in self.rays:
            out = [a + b for a, b in zip(out, r)]
        return tuple(out)

    def intersect(self, other: "Cone") -> "Cone":
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimensions differ")
        return Cone.from_halfspaces(self.ambient_dim, self.halfspaces + other.halfspaces)

    def face_containing(self, x: Sequence) -> "Cone":
        """The smallest face of the cone containing the point ``x``."""
        tight = [h for h in self.facets if dot(h, x) == 0]
        return Cone.from_halfspaces(self.ambient_dim, self.halfspaces, equations=tight)

    def is_face_of(self, other: "Cone") -> bool:
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimensions differ")
        if not other.contains_cone(self):
            return False
        p = [sum(col) for col in zip(*self.generators)] if self.generators else [0] * self.ambient_dim
        return other.face_containing(p) == self

    def faces_of_dim(self, k: int) -> list["Cone"]:
        """Faces of dimension ``k`` (pointed cones; via facet-subset intersections)."""
        if k == self.dim:
            return [self]
        seen = {}
        frontier = {self.key(): self}
        while frontier:
            nxt = {}
            for c in frontier.values():
                if c.dim == k:
                    seen[c.key()] = c
                    continue
                for h in c.facets:
                    f = Cone.from_halfspaces(c.ambient_dim, c.halfspaces, equations=[h])
                    if f.dim == c.dim - 1:
                        nxt.setdefault(f.key(), f)
            frontier = nxt
        return [seen[k_] for k_ in sorted(seen)]

    # identity ---------------------------------------------------------------

    def key(self) -> tuple:
        return (self.ambient_dim, tuple(self.lineality), tuple(self.rays))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cone):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def sort_key(self) -> tuple:
        return (tuple(self.generators), tuple(self.halfspaces))

    def __repr__(self) -> str:
        if self.lineality:
            return f"Cone(dim={self.ambient_dim}, rays={self.rays}, lineality={self.lineality})"
        return f"Cone(dim={self.ambient_dim}, rays={self.rays})"

    def to_json(self) -> dict:
        out = {
            "dim": self.ambient_dim,
            "generators": [list(g) for g in self.generators],
            "halfspaces": [list(h) for h in self.halfspaces],
        }
        if self.is_zero():
            # the zero cone's halfspaces are every coordinate equation; flag it instead
            out["halfspaces"] = []
            out["trivial"] = True
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Cone":
        dim = int(data["dim"])
        if data.get("trivial"):
            return cls.zero(dim)
        if "generators" in data:
            return cls.from_generators(dim, data["generators"])
        if "halfspaces" in data:
            return cls.from_halfspaces(dim, data["halfspaces"])
        raise ValueError("cone JSON needs generators or halfspaces")


def from_generators(dim: int, gens) -> Cone:
    return Cone.from_generators(dim, gens)


def to_halfspaces(c: Cone) -> list[Vector]:
    return c.halfspaces


def intersect(a: Cone, b: Cone) -> Cone:
    return a.intersect(b)


def intersect_all(dim: int, cones: Iterable[Cone]) -> Cone:
    hs: list[Vector] = []
    for c in cones:
        if c.ambient_dim != dim:
            raise ValueError("ambient dimensions differ")
        hs.extend(c.halfspaces)
    return Cone.from_halfspaces(dim, hs)


def contains(c: Cone, x: Sequence) -> Position:
    return c.contains(x)


def is_face(f: Cone, c: Cone) -> bool:
    return f.is_face_of(c)


def relint_point(c: Cone) -> tuple[int, ...]:
    return c.relint_point()


def equals(a: Cone, b: Cone) -> bool:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimensions differ")
    return a == b
