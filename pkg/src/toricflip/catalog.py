"""Small ready-made fans used in docs, tests and the CLI demo files."""
from __future__ import annotations

from .fan import Fan

# Columns are the six vertices of a triangular prism in Z^3.
PRISM_V = [
    [1, 0, 0, 0, -1, 1],
    [0, 1, 0, -1, -1, 2],
    [0, 0, 1, -1, 0, 1],
]

# Fan over the prism's faces: three quadrangles and two triangles (1-based).
PRISM_CONES_1 = [(1, 2, 4, 6), (1, 3, 4, 5), (2, 3, 5, 6), (2, 4, 5), (1, 3, 6)]

# A weight matrix for PRISM_V: each row is a relation among the columns.
PRISM_Q = [
    [1, 1, 0, 0, 1, 0],
    [0, 1, 1, 1, 0, 0],
    [0, 0, 0, 1, 1, 1],
]


def one_based(cones):
    return [tuple(i - 1 for i in c) for c in cones]


def prism_fan() -> Fan:
    return Fan.from_matrix(PRISM_V, one_based(PRISM_CONES_1))


def orthant_fan(n: int = 2) -> Fan:
    """Fan of all coordinate orthants of R^n (rays +-e_i)."""
    rays = []
    for i in range(n):
        for s in (1, -1):
            rays.append(tuple(s * int(i == j) for j in range(n)))
    cones = []
    for signs in range(2 ** n):
        cones.append(tuple(2 * i + ((signs >> i) & 1) for i in range(n)))
    return Fan(rays, cones)
