"""Exact linear algebra over Q(q).

Matrices are lists of rows of ``Scalar``.  Elimination picks, in each
column, the pivot with the smallest total polynomial size to keep
intermediate expressions short.
"""
from __future__ import annotations

from typing import List, Sequence

from .errors import IntegrityError
from .qfield import Scalar, ZERO, as_scalar

__all__ = ["solve_exact", "rank_exact"]


def _size(x: Scalar) -> int:
    return len(x.num.coeffs) + len(x.den.coeffs)


def _eliminate(rows: List[list], ncols: int):
    """In-place row reduction; returns list of pivot columns."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        best = None
        for k in range(r, nrows):
            v = rows[k][c]
            if v:
                if best is None or _size(v) < _size(rows[best][c]):
                    best = k
        if best is None:
            continue
        rows[r], rows[best] = rows[best], rows[r]
        piv = rows[r][c]
        inv = piv.inverse()
        rows[r] = [x * inv if x else x for x in rows[r]]
        for k in range(nrows):
            if k != r:
                f = rows[k][c]
                if f:
                    rk = rows[k]
                    rr = rows[r]
                    rows[k] = [a - f * b if b else a for a, b in zip(rk, rr)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def solve_exact(matrix: Sequence[Sequence], rhs: Sequence) -> list:
    """Unique solution x of ``matrix . x = rhs``.

    ``matrix`` must have full column rank; an inconsistent system raises
    IntegrityError.
    """
    ncols = len(matrix[0]) if matrix else 0
    rows = [[as_scalar(v) for v in row] + [as_scalar(b)] for row, b in zip(matrix, rhs)]
    pivots = _eliminate(rows, ncols)
    if len(pivots) < ncols:
        raise IntegrityError("coefficient matrix does not have full column rank")
    for k in range(len(pivots), len(rows)):
        if rows[k][ncols]:
            raise IntegrityError("inconsistent linear system")
    x = [ZERO] * ncols
    for k, c in enumerate(pivots):
        x[c] = rows[k][ncols]
    return x


def rank_exact(matrix: Sequence[Sequence]) -> int:
    if not matrix:
        return 0
    rows = [[as_scalar(v) for v in row] for row in matrix]
    return len(_eliminate(rows, len(rows[0])))
