"""Exact integer and rational linear algebra.

Matrices are plain lists of rows. Integer matrices hold ``int`` entries,
rational ones hold :class:`fractions.Fraction`. Nothing in here touches
floating point.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

IMatrix = list[list[int]]
QMatrix = list[list[Fraction]]


def identity(n: int) -> IMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> IMatrix:
    return [[0] * cols for _ in range(rows)]


def transpose(M: Sequence[Sequence]) -> list[list]:
    if not M:
        return []
    return [list(col) for col in zip(*M)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    Bt = transpose(B)
    if not Bt:
        return [[] for _ in A]
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence], x: Sequence) -> list:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def columns(M: Sequence[Sequence], idx: Sequence[int]) -> list[list]:
    """Submatrix made of the columns ``idx`` (in that order)."""
    return [[row[j] for j in idx] for row in M]


def content(v: Sequence[int]) -> int:
    g = 0
    for a in v:
        g = gcd(g, a)
    return g


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on its ray.

    The zero vector is returned unchanged (as integers).
    """
    den = 1
    for a in v:
        a = Fraction(a)
        den = den * a.denominator // gcd(den, a.denominator)
    ints = [int(Fraction(a) * den) for a in v]
    g = content(ints)
    if g == 0:
        return tuple(ints)
    return tuple(a // g for a in ints)


def hnf(M: Sequence[Sequence[int]]) -> tuple[IMatrix, IMatrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U @ M == H``. ``H`` is in
    row echelon form, zero rows at the bottom, every pivot positive and
    every entry above a pivot reduced into ``[0, pivot)``.
    """
    rows = len(M)
    cols = len(M[0]) if rows else 0
    H = [list(map(int, row)) for row in M]
    U = identity(rows)

    def swap(i, k):
        H[i], H[k] = H[k], H[i]
        U[i], U[k] = U[k], U[i]

    def addmul(dst, src, q):
        # row[dst] -= q * row[src]
        if q:
            H[dst] = [a - q * b for a, b in zip(H[dst], H[src])]
            U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    r = 0
    for j in range(cols):
        if r == rows:
            break
        while True:
            nz = [i for i in range(r, rows) if H[i][j] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(H[i][j]))
            swap(r, p)
            done = True
            for i in range(r + 1, rows):
                if H[i][j]:
                    addmul(i, r, H[i][j] // H[r][j])
                    if H[i][j]:
                        done = False
            if done:
                break
        if H[r][j] == 0:
            continue
        if H[r][j] < 0:
            H[r] = [-a for a in H[r]]
            U[r] = [-a for a in U[r]]
        for i in range(r):
            addmul(i, r, H[i][j] // H[r][j])
        r += 1
    return H, U


def hnf_basis(M: Sequence[Sequence[int]]) -> IMatrix:
    """Nonzero rows of the HNF: a canonical basis of the row lattice."""
    H, _ = hnf(M)
    return [row for row in H if any(row)]


def in_row_lattice(basis: Sequence[Sequence[int]], x: Sequence[int]) -> bool:
    """Integer membership of ``x`` in the row lattice spanned by ``basis``."""
    B = hnf_basis(basis) if basis else []
    x = list(map(int, x))
    for row in B:
        j = next(k for k, a in enumerate(row) if a)
        if x[j] % row[j]:
            return False
        q = x[j] // row[j]
        x = [a - q * b for a, b in zip(x, row)]
    return not any(x)


def same_row_lattice(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> bool:
    return all(in_row_lattice(B, a) for a in A) and all(in_row_lattice(A, b) for b in B)


def rref(M: Sequence[Sequence]) -> tuple[QMatrix, list[int]]:
    """Reduced row echelon form over Q and the pivot columns."""
    R = [[Fraction(a) for a in row] for row in M]
    rows = len(R)
    cols = len(R[0]) if rows else 0
    pivots = []
    r = 0
    for j in range(cols):
        p = next((i for i in range(r, rows) if R[i][j] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        piv = R[r][j]
        R[r] = [a / piv for a in R[r]]
        for i in range(rows):
            if i != r and R[i][j] != 0:
                f = R[i][j]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(j)
        r += 1
        if r == rows:
            break
    return R, pivots


def rank(M: Sequence[Sequence]) -> int:
    """Rank over the rationals."""
    A = [list(row) for row in M if any(row)]
    if not A:
        return 0
    if any(isinstance(a, Fraction) for row in A for a in row):
        return len(rref(A)[1])
    # Bareiss fraction-free elimination keeps integer entries bounded.
    rows, cols = len(A), len(A[0])
    r = 0
    prev = 1
    for j in range(cols):
        p = next((i for i in range(r, rows) if A[i][j] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        piv = A[r][j]
        for i in range(r + 1, rows):
            f = A[i][j]
            A[i] = [(piv * a - f * b) // prev for a, b in zip(A[i], A[r])]
        prev = piv
        r += 1
        if r == rows:
            break
    return r


def det(M: Sequence[Sequence]) -> Fraction:
    n = len(M)
    A = [[Fraction(a) for a in row] for row in M]
    d = Fraction(1)
    for j in range(n):
        p = next((i for i in range(j, n) if A[i][j] != 0), None)
        if p is None:
            return Fraction(0)
        if p != j:
            A[j], A[p] = A[p], A[j]
            d = -d
        d *= A[j][j]
        for i in range(j + 1, n):
            if A[i][j]:
                f = A[i][j] / A[j][j]
                A[i] = [a - f * b for a, b in zip(A[i], A[j])]
    return d


def solve(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One exact solution of ``A x = b``, or ``None`` if inconsistent.

    Free variables are set to zero, so the answer is unique whenever ``A``
    has full column rank.
    """
    cols = len(A[0]) if A else 0
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    if not aug:
        return [Fraction(0)] * cols
    R, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for row, j in zip(R, pivots):
        x[j] = row[cols]
    return x


def kernel_lattice(M: Sequence[Sequence[int]], ncols: int | None = None) -> IMatrix:
    """HNF basis of the saturated lattice ``{x in Z^m : M x = 0}``.

    ``ncols`` is only needed when ``M`` has no rows.
    """
    m = len(M[0]) if M else ncols
    if m is None:
        raise ValueError("cannot infer column count of an empty matrix")
    if not M:
        return identity(m)
    # U @ M^T = H; the rows of U facing zero rows of H span the left kernel
    # of M^T, and a unimodular U makes that basis saturated.
    H, U = hnf(transpose(M))
    K = [u for h, u in zip(H, U) if not any(h)]
    if not K:
        return []
    return hnf_basis(K)


def rational_kernel(M: Sequence[Sequence], ncols: int) -> list[tuple[int, ...]]:
    """Primitive integer basis of the rational null space of ``M``."""
    if not M:
        return [tuple(r) for r in identity(ncols)]
    R, pivots = rref(M)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(primitive(v))
    return basis


def row_space_basis(M: Sequence[Sequence], ncols: int) -> list[tuple[int, ...]]:
    """Canonical basis of the rational row space: primitive RREF rows."""
    if not M:
        return []
    R, pivots = rref(M)
    return [primitive(row) for row in R[: len(pivots)]]


def project_out(v: Sequence, basis: Sequence[Sequence]) -> list[Fraction]:
    """Orthogonal projection of ``v`` onto the complement of span(basis)."""
    if not basis:
        return [Fraction(a) for a in v]
    # Solve the normal equations G c = B v, subtract B^T c.
    G = [[Fraction(dot(a, b)) for b in basis] for a in basis]
    rhs = [Fraction(dot(a, v)) for a in basis]
    c = solve(G, rhs)
    out = [Fraction(a) for a in v]
    for ci, bi in zip(c, basis):
        if ci:
            out = [o - ci * b for o, b in zip(out, bi)]
    return out
