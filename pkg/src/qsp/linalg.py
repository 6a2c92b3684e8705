"""Exact Gaussian elimination over Q(q)."""

from __future__ import annotations

from typing import Sequence

from .errors import NoSolution, NonUniqueSolution
from .scalars import ONE, ZERO, RatFuncQ

Vector = list[RatFuncQ]


def _size(x: RatFuncQ) -> int:
    return x.num.degree() + x.den.degree()


class IncrementalBasis:
    """Echelon basis of a growing set of vectors.

    ``add`` returns True iff the vector is independent of those already added.
    Each stored vector is zero at the pivot positions of its predecessors,
    so reduction can proceed in insertion order.
    """

    def __init__(self, length: int):
        self.length = length
        self.pivots: list[int] = []
        self.vectors: list[Vector] = []

    def reduce(self, v: Sequence[RatFuncQ]) -> Vector:
        v = list(v)
        for p, b in zip(self.pivots, self.vectors):
            c = v[p]
            if c:
                for k in range(self.length):
                    if b[k]:
                        v[k] = v[k] - c * b[k]
        return v

    def add(self, v: Sequence[RatFuncQ]) -> bool:
        v = self.reduce(v)
        nz = [k for k in range(self.length) if v[k]]
        if not nz:
            return False
        p = min(nz, key=lambda k: _size(v[k]))
        inv = v[p].inv()
        v = [x * inv if x else ZERO for x in v]
        # keep earlier vectors free of the new pivot
        for idx, b in enumerate(self.vectors):
            c = b[p]
            if c:
                self.vectors[idx] = [b[k] - c * v[k] if v[k] else b[k]
                                     for k in range(self.length)]
        self.pivots.append(p)
        self.vectors.append(v)
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)


def greedy_independent(vectors: Sequence[Sequence[RatFuncQ]], length: int,
                       limit: int | None = None) -> list[int]:
    """Indices of the greedily selected independent vectors, in order."""
    basis = IncrementalBasis(length)
    chosen = []
    for idx, v in enumerate(vectors):
        if basis.add(v):
            chosen.append(idx)
            if limit is not None and len(chosen) == limit:
                break
    return chosen


def solve_many(rows: Sequence[Sequence[RatFuncQ]],
               rhs: Sequence[Sequence[RatFuncQ]], ncols: int) -> list[Vector]:
    """Unique solutions of ``rows @ x == b`` for each right-hand side b.

    ``rhs[k]`` is the k-th right-hand side (a column).  Raises
    NonUniqueSolution if the rank is below ``ncols`` and NoSolution if some
    system is inconsistent.
    """
    nrhs = len(rhs)
    aug = [list(r) + [b[i] for b in rhs] for i, r in enumerate(rows)]
    nrows = len(aug)
    width = ncols + nrhs
    r = 0
    for col in range(ncols):
        cand = [i for i in range(r, nrows) if aug[i][col]]
        if not cand:
            raise NonUniqueSolution(f"rank deficient at column {col}")
        piv = min(cand, key=lambda i: _size(aug[i][col]))
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = aug[r][col].inv()
        prow = [x * inv if x else ZERO for x in aug[r]]
        aug[r] = prow
        nzk = [k for k in range(width) if prow[k]]
        for i in range(nrows):
            c = aug[i][col]
            if i != r and c:
                row = aug[i]
                for k in nzk:
                    row[k] = row[k] - c * prow[k]
        r += 1
    for i in range(r, nrows):
        for k in range(ncols, width):
            if aug[i][k]:
                raise NoSolution(f"inconsistent equation (residual {aug[i][k]})")
    return [[aug[i][ncols + k] for i in range(ncols)] for k in range(nrhs)]


def solve(rows: Sequence[Sequence[RatFuncQ]], rhs: Sequence[RatFuncQ],
          ncols: int) -> Vector:
    """Unique solution of ``rows @ x == rhs``."""
    return solve_many(rows, [rhs], ncols)[0]


def inverse(m: Sequence[Sequence[RatFuncQ]]) -> list[Vector]:
    n = len(m)
    ident = [[ONE if k == j else ZERO for k in range(n)] for j in range(n)]
    cols = solve_many(m, ident, n)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def matvec(m: Sequence[Sequence[RatFuncQ]], v: Sequence[RatFuncQ]) -> Vector:
    out = []
    for row in m:
        acc = ZERO
        for a, b in zip(row, v):
            if a and b:
                acc = acc + a * b
        out.append(acc)
    return out
