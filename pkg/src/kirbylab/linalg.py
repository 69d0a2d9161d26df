"""Exact linear algebra over a field: kernels, solves, inverses, inertia.

Rows are handled as sparse dictionaries ``{column: FieldElement}`` and reduced
incrementally to reduced row echelon form, which keeps the structured, very
sparse systems coming from Hopf algebra presentations cheap.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import KirbyLabError
from .exactfield import FieldDescriptor, FieldElement
from .farray import FArray


class SingularSystem(KirbyLabError):
    """A linear system has no (unique) solution where one was required."""


class RREF:
    """Incremental reduced row echelon form of a growing set of sparse rows."""

    def __init__(self, fld: FieldDescriptor, ncols: int):
        self.field = fld
        self.ncols = ncols
        self.pivots: dict[int, dict[int, FieldElement]] = {}

    def reduce(self, row: dict) -> dict:
        row = {c: v for c, v in row.items() if not v.is_zero()}
        for col in sorted(set(row) & set(self.pivots)):
            if col not in row:
                continue
            f = row[col]
            for c2, v2 in self.pivots[col].items():
                nv = row.get(c2)
                nv = -(f * v2) if nv is None else nv - f * v2
                if nv.is_zero():
                    row.pop(c2, None)
                else:
                    row[c2] = nv
            # pivot rows are fully reduced, so new pivot columns never reappear
        return row

    def add(self, row: dict) -> bool:
        """Insert a row; returns True if it increased the rank."""
        row = self.reduce(row)
        # reduce again for columns introduced by the first pass
        while set(row) & set(self.pivots):
            row = self.reduce(row)
        if not row:
            return False
        p = min(row)
        inv = row[p].inverse()
        row = {c: v * inv for c, v in row.items()}
        for q, prow in self.pivots.items():
            f = prow.get(p)
            if f is None:
                continue
            for c2, v2 in row.items():
                nv = prow.get(c2)
                nv = -(f * v2) if nv is None else nv - f * v2
                if nv.is_zero():
                    prow.pop(c2, None)
                else:
                    prow[c2] = nv
        self.pivots[p] = row
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def kernel(self) -> list[list[FieldElement]]:
        zero, one = self.field.zero(), self.field.one()
        free = [c for c in range(self.ncols) if c not in self.pivots]
        basis = []
        for f in free:
            vec = [zero] * self.ncols
            vec[f] = one
            for p, prow in self.pivots.items():
                v = prow.get(f)
                if v is not None:
                    vec[p] = -v
            basis.append(vec)
        return basis


def farray_rows(M: FArray):
    """Sparse rows of a 2-d FArray."""
    rows = []
    nz = np.any(M.num != 0, axis=-1)
    for r in range(M.shape[0]):
        cols = np.nonzero(nz[r])[0]
        rows.append({int(c): M.element((r, int(c))) for c in cols})
    return rows


def nullspace_rows(fld: FieldDescriptor, rows, ncols: int) -> list[list[FieldElement]]:
    ech = RREF(fld, ncols)
    for row in rows:
        ech.add(row)
    return ech.kernel()


def nullspace(M: FArray) -> FArray:
    """Canonical kernel basis (one basis vector per row) of a 2-d FArray."""
    fld = M.field
    basis = nullspace_rows(fld, farray_rows(M), M.shape[1])
    if not basis:
        return FArray.zeros(fld, (0, M.shape[1]))
    return FArray.from_elements(fld, np.array(basis, dtype=object))


def rank(M: FArray) -> int:
    ech = RREF(M.field, M.shape[1])
    for row in farray_rows(M):
        ech.add(row)
    return ech.rank


def solve(M: FArray, b: FArray) -> FArray:
    """Some solution x of M x = b (the one with free variables set to zero)."""
    fld = M.field
    n = M.shape[1]
    rows = farray_rows(M)
    rhs = [b.element(i) for i in range(M.shape[0])]
    ech = RREF(fld, n + 1)
    for row, r in zip(rows, rhs):
        row = dict(row)
        if not r.is_zero():
            row[n] = r
        ech.add(row)
    if n in ech.pivots:
        raise SingularSystem("inconsistent linear system")
    x = [fld.zero()] * n
    for p, prow in ech.pivots.items():
        v = prow.get(n)
        if v is not None:
            x[p] = v
    return FArray.from_elements(fld, np.array(x, dtype=object))


def inverse(M: FArray) -> FArray:
    n = M.shape[0]
    if M.shape != (n, n):
        raise SingularSystem("inverse of a non-square matrix")
    fld = M.field
    rows = farray_rows(M)
    one = fld.one()
    ech = RREF(fld, 2 * n)
    for i, row in enumerate(rows):
        row = dict(row)
        row[n + i] = one
        ech.add(row)
    if any(p >= n for p in ech.pivots) or ech.rank < n:
        raise SingularSystem("matrix is singular")
    out = np.empty((n, n), dtype=object)
    for p, prow in ech.pivots.items():
        for j in range(n):
            out[p, j] = prow.get(n + j, fld.zero())
    return FArray.from_elements(fld, out)


def symmetric_inertia(A) -> tuple[int, int, int]:
    """(positive, negative, zero) eigenvalue counts of a rational symmetric matrix.

    Uses symmetric Gaussian elimination by congruence, so only exact pivots
    are inspected.
    """
    M = [[Fraction(x) for x in row] for row in A]
    n = len(M)
    for i in range(n):
        for j in range(n):
            if M[i][j] != M[j][i]:
                raise ValueError("matrix is not symmetric")
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if M[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i < j and M[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # row/col i += row/col j turns the diagonal entry into 2 M[i][j] + M[j][j]
            sgn = 1 if 2 * M[i][j] + M[j][j] != 0 else -1
            for k in range(n):
                M[i][k] += sgn * M[j][k]
            for k in range(n):
                M[k][i] += sgn * M[k][j]
            piv = i
        d = M[piv][piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        for i in active:
            f = M[i][piv] / d
            if f:
                for k in range(n):
                    M[i][k] -= f * M[piv][k]
        for i in active:
            M[piv][i] = M[i][piv] = Fraction(0)
    return pos, neg, n - pos - neg
