"""Gale duality and the secondary fan restricted to the moving cone."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from . import linalg
from ._parallel import pmap
from .cone import Cone, Position, intersect_all
from .fan import Fan, IndexSet, InvalidFanError, label


class GaleDualityError(ValueError):
    pass


class InconsistentInputError(RuntimeError):
    """Raised when inputs that should correspond (chamber, fan, weights) do not."""


@dataclass(frozen=True)
class WeightMatrix:
    """Integer ``r x m`` matrix whose rows span the relations among the rays.

    Its columns are the degrees of the torus-invariant prime divisors in
    the free part of the class group.
    """

    Q: tuple[tuple[int, ...], ...]
    source: str = "computed"
    torsion_free: bool = True

    @property
    def r(self) -> int:
        return len(self.Q)

    @property
    def m(self) -> int:
        return len(self.Q[0]) if self.Q else 0

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.Q)

    @property
    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.m)]

    def cols_cone(self, idx: Sequence[int]) -> Cone:
        return Cone.from_generators(self.r, [self.column(j) for j in idx])

    def to_json(self) -> dict:
        return {"Q": [list(row) for row in self.Q], "source": self.source}

    @classmethod
    def from_json(cls, data: dict) -> "WeightMatrix":
        return cls(tuple(tuple(int(x) for x in row) for row in data["Q"]), data.get("source", "supplied"))


def as_weights(Q) -> WeightMatrix:
    if isinstance(Q, WeightMatrix):
        return Q
    return WeightMatrix(tuple(tuple(int(x) for x in row) for row in Q), "supplied")


def _torsion_free(V) -> bool:
    # Cl is torsion free iff the row lattice of V is saturated in Z^m
    m = len(V[0])
    sat = linalg.kernel_lattice(linalg.kernel_lattice(V), m)
    return linalg.same_row_lattice(linalg.hnf_basis(V), sat)


def gale_dual(V: Sequence[Sequence[int]]) -> WeightMatrix:
    """HNF basis of the integer relations among the columns of ``V``."""
    n, m = len(V), len(V[0])
    if linalg.rank(V) != n:
        raise GaleDualityError(f"fan matrix has rank {linalg.rank(V)} < {n}")
    if m <= n:
        raise GaleDualityError("need more rays than the lattice rank")
    K = linalg.kernel_lattice(V)
    return WeightMatrix(tuple(tuple(row) for row in K), "computed", _torsion_free(V))


def supplied_weights(V: Sequence[Sequence[int]], Q: Sequence[Sequence[int]]) -> WeightMatrix:
    """Accept a user-given weight matrix after checking it against ``V``.

    ``Q V^T`` must vanish and the rows of ``Q`` must span the same lattice as
    the computed Gale dual.
    """
    Q = [list(map(int, row)) for row in Q]
    if any(len(row) != len(V[0]) for row in Q):
        raise GaleDualityError("weight matrix has the wrong number of columns")
    if any(any(row) for row in linalg.matmul(Q, linalg.transpose(V))):
        raise GaleDualityError("Q V^T != 0")
    ref = gale_dual(V)
    if not linalg.same_row_lattice(Q, ref.Q):
        raise GaleDualityError("rows of Q do not span the full relation lattice")
    return WeightMatrix(tuple(tuple(row) for row in Q), "supplied", ref.torsion_free)


def effective_cone(Q) -> Cone:
    Q = as_weights(Q)
    return Q.cols_cone(range(Q.m))


def moving_cone(Q) -> Cone:
    """Intersection over ``j`` of the cones spanned by all columns but ``j``."""
    Q = as_weights(Q)
    if Q.m <= Q.r:
        raise ValueError("moving cone needs more columns than rows")
    return intersect_all(Q.r, [Q.cols_cone([k for k in range(Q.m) if k != j]) for j in range(Q.m)])


def _check_fan(f: Fan, Q: WeightMatrix) -> None:
    f.require_valid()
    if f.nrays != Q.m:
        raise ValueError(f"fan has {f.nrays} rays but Q has {Q.m} columns")
    if not f.simplicial:
        raise InvalidFanError("fan is not simplicial")
    if not f.complete:
        raise InvalidFanError("fan is not complete")


def bunch_indices(f: Fan, Q) -> list[IndexSet]:
    Q = as_weights(Q)
    _check_fan(f, Q)
    return sorted({tuple(j for j in range(Q.m) if j not in c) for c in f.max_cones})


def bunch(f: Fan, Q) -> list[Cone]:
    """Cones of ``Q``-columns complementary to the maximal cones, deduplicated."""
    Q = as_weights(Q)
    cones = {Q.cols_cone(I) for I in bunch_indices(f, Q)}
    return sorted(cones, key=Cone.sort_key)


def nef_cone(f: Fan, Q) -> Cone:
    Q = as_weights(Q)
    return intersect_all(Q.r, bunch(f, Q))


def is_projective(f: Fan, Q) -> bool:
    Q = as_weights(Q)
    return nef_cone(f, Q).dim == Q.r


@dataclass(eq=False)
class Chamber:
    cone: Cone
    Q: WeightMatrix = field(repr=False)
    n: int = field(repr=False)

    @cached_property
    def compatible_bases(self) -> tuple[IndexSet, ...]:
        """Index sets ``I`` (size ``n``) whose complementary ``Q``-columns span
        a full-rank cone containing the chamber."""
        w = self.cone.relint_point()
        out = []
        for I in itertools.combinations(range(self.Q.m), self.n):
            comp = [j for j in range(self.Q.m) if j not in I]
            cols = [self.Q.column(j) for j in comp]
            if linalg.rank(cols) != self.Q.r:
                continue
            if w in Cone.from_generators(self.Q.r, cols):
                out.append(I)
        return tuple(out)

    def to_json(self) -> dict:
        return {"cone": self.cone.to_json(), "compatible_bases": [list(I) for I in self.compatible_bases]}


@dataclass
class SecondaryFan:
    Q: WeightMatrix
    mov: Cone
    chambers: list[Chamber]
    walls: list[tuple[int, int, Cone]]

    def locate(self, w) -> list[int]:
        """Chambers whose interior contains ``w``."""
        return [i for i, c in enumerate(self.chambers) if c.cone.contains(w) is Position.INTERIOR]

    def to_json(self) -> dict:
        return {
            "Q": self.Q.to_json(),
            "mov": self.mov.to_json(),
            "chambers": [c.to_json() for c in self.chambers],
            "walls": [{"chambers": [i, j], "cone": w.to_json()} for i, j, w in self.walls],
        }


def arrangement(Q) -> list[tuple[int, ...]]:
    """Hyperplanes spanned by ``r - 1`` columns of ``Q``, one normal per hyperplane."""
    Q = as_weights(Q)
    out = set()
    for S in itertools.combinations(range(Q.m), Q.r - 1):
        cols = [Q.column(j) for j in S]
        if linalg.rank(cols) != Q.r - 1:
            continue
        h = linalg.rational_kernel(cols, Q.r)[0] if cols else None
        if h is None:
            continue
        if next(x for x in h if x) < 0:
            h = tuple(-x for x in h)
        out.add(h)
    return sorted(out)


def _split(cell: Cone, h) -> list[Cone]:
    vals = [linalg.dot(h, g) for g in cell.generators]
    if not (any(v > 0 for v in vals) and any(v < 0 for v in vals)):
        return [cell]
    neg = tuple(-x for x in h)
    pieces = [Cone.from_halfspaces(cell.ambient_dim, cell.halfspaces + [h]),
              Cone.from_halfspaces(cell.ambient_dim, cell.halfspaces + [neg])]
    return [p for p in pieces if p.is_full_dimensional()]


def secondary_fan(Q, n: int | None = None) -> SecondaryFan:
    """Full-dimensional chambers of the GKZ decomposition inside ``Mov(Q)``.

    ``Mov(Q)`` is cut successively by every hyperplane spanned by ``r - 1``
    columns of ``Q``; the surviving full-dimensional cells are the chambers,
    sorted by their canonical form.
    """
    Q = as_weights(Q)
    if linalg.rank(Q.Q) != Q.r:
        raise GaleDualityError("weight matrix is not of full row rank")
    if Q.m <= Q.r:
        raise GaleDualityError("need more columns than rows (m > r)")
    n = Q.m - Q.r if n is None else n
    mov = moving_cone(Q)
    cells = [mov] if mov.is_full_dimensional() else []
    for h in arrangement(Q):
        nxt = []
        for part in pmap(lambda c: _split(c, h), cells):
            nxt.extend(part)
        cells = nxt
    cells.sort(key=Cone.sort_key)
    chambers = [Chamber(c, Q, n) for c in cells]
    walls = []
    for i, j in itertools.combinations(range(len(cells)), 2):
        meet = cells[i].intersect(cells[j])
        if meet.dim == Q.r - 1:
            walls.append((i, j, meet))
    return SecondaryFan(Q, mov, chambers, walls)


def chamber_to_fan(Q, chamber: Chamber | Cone, V: Sequence[Sequence[int]]) -> Fan:
    """The simplicial fan whose nef cone is the given chamber."""
    Q = as_weights(Q)
    cone = chamber.cone if isinstance(chamber, Chamber) else chamber
    if not cone.is_full_dimensional():
        raise ValueError("chamber is not full-dimensional")
    n = len(V)
    if isinstance(chamber, Chamber):
        cones = chamber.compatible_bases
    else:
        cones = Chamber(cone, Q, n).compatible_bases
    cones = [I for I in cones if linalg.rank(linalg.columns(V, I)) == n]
    f = Fan.from_matrix(V, cones)
    if not f.valid:
        raise InconsistentInputError(f"chamber does not define a fan: {f.report.violations[0].message}")
    if not (f.complete and f.simplicial):
        raise InconsistentInputError("chamber fan is not complete and simplicial")
    if nef_cone(f, Q) != cone:
        raise InconsistentInputError("nef cone of the chamber fan differs from the chamber")
    return f


def describe_chamber(ch: Chamber) -> str:
    return "chamber " + ", ".join(str(r) for r in ch.cone.rays) + " <- " + " ".join(label(I) for I in ch.compatible_bases)
