"""Exact linear algebra over K: fraction-free elimination, rank, nullspace, solve.

Matrices are lists of rows of Scalar.  The forward pass is Bareiss
elimination, so intermediate entries stay polynomial when the input is.
"""
from __future__ import annotations

from .scalars import ONE, ZERO, Scalar


def _copy(rows):
    return [[Scalar.coerce(v) for v in row] for row in rows]


def echelon(rows):
    """Bareiss forward elimination.  Returns (echelon rows, pivot columns)."""
    A = _copy(rows)
    if not A:
        return A, []
    m, n = len(A), len(A[0])
    prev = ONE
    r = 0
    pivots = []
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if not A[i][c].is_zero()), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        piv = A[r][c]
        for i in range(r + 1, m):
            f = A[i][c]
            row = A[i]
            if f.is_zero():
                if not prev.is_one() or not piv.is_one():
                    A[i] = [(piv * v) / prev if not v.is_zero() else ZERO for v in row]
                continue
            top = A[r]
            A[i] = [
                ZERO if j <= c else (piv * row[j] - f * top[j]) / prev
                for j in range(n)
            ]
        prev = piv
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rref(rows):
    """Reduced row echelon form (pivot entries 1).  Returns (rows, pivot columns)."""
    E, pivots = echelon(rows)
    n = len(E[0]) if E else 0
    for r, c in enumerate(pivots):
        inv = ONE / E[r][c]
        E[r] = [v * inv if not v.is_zero() else ZERO for v in E[r]]
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        for i in range(r):
            f = E[i][c]
            if f.is_zero():
                continue
            E[i] = [E[i][j] - f * E[r][j] if not E[r][j].is_zero() else E[i][j] for j in range(n)]
    return E, pivots


def rank(rows):
    return len(echelon(rows)[1])


def nullspace(rows, ncols=None):
    """Basis of {v : A v = 0}, one vector per free column (that coordinate set to 1)."""
    if not rows:
        return [[ONE if j == i else ZERO for j in range(ncols)] for i in range(ncols or 0)]
    n = len(rows[0])
    R, pivots = rref(rows)
    free = [j for j in range(n) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for r, c in enumerate(pivots):
            v[c] = -R[r][f]
        basis.append(v)
    return basis


def solve(rows, rhs):
    """One solution x of A x = rhs, or None if inconsistent."""
    aug = [list(row) + [Scalar.coerce(b)] for row, b in zip(rows, rhs)]
    n = len(rows[0]) if rows else 0
    R, pivots = rref(aug)
    if n in pivots:
        return None
    x = [ZERO] * n
    for r, c in enumerate(pivots):
        x[c] = R[r][n]
    return x


def mat_vec(rows, v):
    out = []
    for row in rows:
        acc = ZERO
        for a, b in zip(row, v):
            if not a.is_zero() and not b.is_zero():
                acc = acc + a * b
        out.append(acc)
    return out


def solve_many(rows, rhs_columns):
    """Solve A X = B for square invertible A; ``rhs_columns`` lists the columns of B."""
    n = len(rows)
    m = len(rhs_columns)
    aug = [list(rows[i]) + [rhs_columns[j][i] for j in range(m)] for i in range(n)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) > n:
        raise ArithmeticError("matrix is singular")
    return [[R[i][n + j] for i in range(n)] for j in range(m)]
