"""Dense matrices whose entries are NCElements of one shared context."""
from __future__ import annotations

from fractions import Fraction
from itertools import permutations

import numpy as np

from .algebra import ContextMismatch, NCElement
from .scalars import Scalar


class ShapeMismatch(ValueError):
    pass


class NotSquare(ValueError):
    pass


class NCMatrix:
    __slots__ = ("ctx", "entries")

    def __init__(self, ctx, entries):
        self.ctx = ctx
        self.entries = entries  # numpy object array of NCElement

    # constructors ---------------------------------------------------------
    @classmethod
    def zeros(cls, ctx, rows, cols):
        e = np.empty((rows, cols), dtype=object)
        for i in range(rows):
            for j in range(cols):
                e[i, j] = ctx.zero()
        return cls(ctx, e)

    @classmethod
    def identity(cls, ctx, n):
        m = cls.zeros(ctx, n, n)
        for i in range(n):
            m.entries[i, i] = ctx.one()
        return m

    @classmethod
    def from_rows(cls, ctx, rows):
        e = np.empty((len(rows), len(rows[0])), dtype=object)
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                e[i, j] = v if isinstance(v, NCElement) else ctx.scalar(_as_scalar(v))
        return cls(ctx, e)

    @classmethod
    def from_scalars(cls, ctx, arr):
        arr = np.asarray(arr, dtype=object)
        return cls.from_rows(ctx, arr.tolist())

    # basic protocol -------------------------------------------------------
    @property
    def shape(self):
        return self.entries.shape

    @property
    def rows(self):
        return self.entries.shape[0]

    @property
    def cols(self):
        return self.entries.shape[1]

    def __getitem__(self, idx):
        return self.entries[idx]

    def _check(self, other):
        if other.ctx is not self.ctx:
            raise ContextMismatch(f"{self.ctx!r} vs {other.ctx!r}")

    def map(self, f, ctx=None):
        """Apply ``f`` entrywise; pass ``ctx`` when ``f`` lands in another algebra."""
        out = np.empty(self.shape, dtype=object)
        for idx, v in np.ndenumerate(self.entries):
            out[idx] = f(v)
        return NCMatrix(self.ctx if ctx is None else ctx, out)

    def __add__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} + {other.shape}")
        return NCMatrix(self.ctx, self.entries + other.entries)

    def __sub__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} - {other.shape}")
        return NCMatrix(self.ctx, self.entries - other.entries)

    def __neg__(self):
        return self.map(lambda v: -v)

    def scale(self, c):
        """Multiply every entry by a central scalar."""
        c = _as_scalar(c)
        return self.map(lambda v: v.scale(c))

    def __matmul__(self, other):
        self._check(other)
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise ShapeMismatch(f"{self.shape} @ {other.shape}")
        out = np.empty((n, m), dtype=object)
        A, B = self.entries, other.entries
        for i in range(n):
            for j in range(m):
                acc = self.ctx.zero()
                for t in range(k):
                    a, b = A[i, t], B[t, j]
                    if a.terms and b.terms:
                        acc = acc + a * b
                out[i, j] = acc
        return NCMatrix(self.ctx, out)

    __mul__ = __matmul__

    def left_mul_element(self, f):
        return self.map(lambda v: f * v)

    def right_mul_element(self, f):
        return self.map(lambda v: v * f)

    def __pow__(self, n):
        if self.rows != self.cols:
            raise NotSquare(self.shape)
        out = NCMatrix.identity(self.ctx, self.rows)
        for _ in range(n):
            out = out @ self
        return out

    def __eq__(self, other):
        if not isinstance(other, NCMatrix) or other.shape != self.shape or other.ctx is not self.ctx:
            return False
        return all(a == b for a, b in zip(self.entries.flat, other.entries.flat))

    __hash__ = None

    def is_zero(self):
        return all(v.is_zero() for v in self.entries.flat)

    def nonzero_entries(self):
        return [(idx, v) for idx, v in np.ndenumerate(self.entries) if not v.is_zero()]

    def transpose(self):
        return NCMatrix(self.ctx, self.entries.T.copy())

    def kron_scalar_left(self, arr):
        """``arr (x) self`` for a scalar matrix ``arr``."""
        arr = np.asarray(arr, dtype=object)
        r, c = self.shape
        R, C = arr.shape
        out = NCMatrix.zeros(self.ctx, R * r, C * c)
        for (I, J), s in np.ndenumerate(arr):
            if s == 0:
                continue
            s = _as_scalar(s)
            for (i, j), v in np.ndenumerate(self.entries):
                out.entries[I * r + i, J * c + j] = v.scale(s)
        return out

    def kron_scalar_right(self, arr):
        """``self (x) arr`` for a scalar matrix ``arr``."""
        arr = np.asarray(arr, dtype=object)
        r, c = self.shape
        R, C = arr.shape
        out = NCMatrix.zeros(self.ctx, r * R, c * C)
        for (i, j), v in np.ndenumerate(self.entries):
            if v.is_zero():
                continue
            for (I, J), s in np.ndenumerate(arr):
                if s != 0:
                    out.entries[i * R + I, j * C + J] = v.scale(_as_scalar(s))
        return out

    def __repr__(self):
        return f"NCMatrix({self.rows}x{self.cols}, {self.ctx.name})"

    def __str__(self):
        return "\n".join("[" + ", ".join(str(v) for v in row) + "]" for row in self.entries)

    def to_json(self):
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [v.to_json() for v in self.entries.flat],
        }

    @classmethod
    def from_json(cls, data, ctx):
        flat = [NCElement.from_json(v, ctx) for v in data["entries"]]
        e = np.empty((data["rows"], data["cols"]), dtype=object)
        for k, v in enumerate(flat):
            e[divmod(k, data["cols"])] = v
        return cls(ctx, e)


def _as_scalar(v):
    if isinstance(v, Scalar):
        return v
    if isinstance(v, (int, np.integer)):
        return Scalar.from_int(int(v))
    return Scalar.coerce(Fraction(v))


def mat_trace(A):
    if A.rows != A.cols:
        raise NotSquare(A.shape)
    acc = A.ctx.zero()
    for i in range(A.rows):
        acc = acc + A.entries[i, i]
    return acc


def eval_matrix_poly(A, coeffs):
    """sum(coeffs[i] * A**i) by Horner's rule; coefficients are central scalars."""
    if A.rows != A.cols:
        raise NotSquare(A.shape)
    n = A.rows
    ctx = A.ctx
    coeffs = [_as_scalar(c) for c in coeffs]
    if not coeffs:
        return NCMatrix.zeros(ctx, n, n)
    R = NCMatrix.identity(ctx, n).scale(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        R = R @ A
        if not c.is_zero():
            for i in range(n):
                R.entries[i, i] = R.entries[i, i] + ctx.scalar(c)
    return R


# permutation operators on V^{(x)k}, dim V = 2 ------------------------------


def perm_matrix(k, perm):
    """Matrix of v_{j1}(x)...(x)v_{jk} -> v_{j perm^-1(1)} (x) ... (factor t moves to slot perm[t])."""
    n = 2 ** k
    P = np.zeros((n, n), dtype=object)
    for col in range(n):
        digits = [(col >> (k - 1 - t)) & 1 for t in range(k)]
        new = [0] * k
        for t in range(k):
            new[perm[t]] = digits[t]
        row = 0
        for d in new:
            row = (row << 1) | d
        P[row, col] = 1
    return P


def flip_and_perms(k, i):
    """Permutation matrix P^{i,i+1} on V^{(x)k} (1-based adjacent transposition)."""
    if not 1 <= i < k:
        raise IndexError(f"transposition ({i},{i + 1}) out of range for k={k}")
    perm = list(range(k))
    perm[i - 1], perm[i] = perm[i], perm[i - 1]
    return perm_matrix(k, perm)


def symmetrizer_array(k):
    """(1/k!) sum over all permutation matrices, as a Fraction array."""
    n = 2 ** k
    S = np.zeros((n, n), dtype=object)
    count = 0
    for perm in permutations(range(k)):
        S = S + perm_matrix(k, perm)
        count += 1
    return np.vectorize(lambda v: Fraction(v, count), otypes=[object])(S)
