"""Higher-spin extensions of L: coproduct matrices, symmetrizers, L_(k) and the compact L-bar.

Operator convention: L sends v_j to sum_i v_i (x) L[i, j] (coefficients on the
right), so column j of a matrix holds the image of basis vector j.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

import numpy as np

from .algebra import change_basis, make_algebra
from .ncmatrix import NCMatrix, symmetrizer_array
from .scalars import I, Scalar


def basic_matrix(ctx):
    """L = [[a, b], [c, d]] (d = -a in sl2h); compact form uses a = i x, b = z - i y, c = -i y - z."""
    if ctx.name == "gl2h":
        a, b, c, d = (ctx.gen(g) for g in "abcd")
        return NCMatrix.from_rows(ctx, [[a, b], [c, d]])
    if ctx.name == "sl2h":
        a, b, c = (ctx.gen(g) for g in "abc")
        return NCMatrix.from_rows(ctx, [[a, b], [c, -a]])
    x, y, z = (ctx.gen(g) for g in "xyz")
    a = x.scale(I)
    b = z - y.scale(I)
    c = -y.scale(I) - z
    return NCMatrix.from_rows(ctx, [[a, b], [c, -a]])


def coproduct_matrix(L, k):
    """sum_i id^(i-1) (x) L (x) id^(k-i), a 2^k x 2^k matrix."""
    out = None
    for i in range(1, k + 1):
        left = np.eye(2 ** (i - 1), dtype=int).astype(object)
        right = np.eye(2 ** (k - i), dtype=int).astype(object)
        term = L.kron_scalar_left(left).kron_scalar_right(right)
        out = term if out is None else out + term
    return out


def symmetrizer(k):
    """Young symmetrizer S^(k) = (1/k!) sum of permutation operators (Fraction array)."""
    return symmetrizer_array(k)


@dataclass
class SymBasis:
    """Basis v_{k1,k2} of Sym^k(V) as unnormalized sums of distinct permutations."""

    k: int
    labels: list
    vectors: np.ndarray  # 2^k x (k+1) integer matrix, columns v_{k,0}, v_{k-1,1}, ...

    @classmethod
    def build(cls, k):
        n = 2 ** k
        labels = [(k - j, j) for j in range(k + 1)]
        W = np.zeros((n, k + 1), dtype=object)
        for col, (k1, k2) in enumerate(labels):
            word = (0,) * k1 + (1,) * k2
            for w in set(permutations(word)):
                idx = 0
                for d in w:
                    idx = (idx << 1) | d
                W[idx, col] = 1
        return cls(k, labels, W)

    def coordinates_map(self):
        """Left inverse (W^T W)^{-1} W^T as a Fraction array."""
        W = self.vectors
        norms = [sum(int(v) for v in W[:, j]) for j in range(W.shape[1])]
        return np.array(
            [[Fraction(int(W[i, j]), norms[j]) for i in range(W.shape[0])] for j in range(W.shape[1])],
            dtype=object,
        )


@dataclass
class ExtensionMatrix:
    k: int
    matrix: NCMatrix
    basis: SymBasis


def restrict_to_symmetric(M, basis):
    """Matrix of M on span(W) in the basis W: W^+ M W (scalar W)."""
    Wp = basis.coordinates_map()
    ctx = M.ctx
    MW = M @ NCMatrix.from_scalars(ctx, basis.vectors)
    return NCMatrix.from_scalars(ctx, Wp) @ MW


def extension_matrix(ctx, k):
    """L_(k) = k S L_1 S restricted to Sym^k(V), in the basis v_{k1,k2}."""
    L = basic_matrix(ctx)
    basis = SymBasis.build(k)
    if k == 1:
        return ExtensionMatrix(1, L, basis)
    L1 = L.kron_scalar_right(np.eye(2 ** (k - 1), dtype=int).astype(object))
    S = NCMatrix.from_scalars(ctx, symmetrizer(k))
    M = (S @ L1 @ S).scale(k)
    return ExtensionMatrix(k, restrict_to_symmetric(M, basis), basis)


def transition_matrix(ctx):
    """P = [[0,1,0],[1/2,0,-1/2],[-i/2,0,-i/2]] and its inverse, as scalar NCMatrices."""
    h = Scalar.from_fraction(Fraction(1, 2))
    rows = [
        [Scalar.from_int(0), Scalar.from_int(1), Scalar.from_int(0)],
        [h, Scalar.from_int(0), -h],
        [-(I * h), Scalar.from_int(0), -(I * h)],
    ]
    inv = [
        [Scalar.from_int(0), Scalar.from_int(1), I],
        [Scalar.from_int(1), Scalar.from_int(0), Scalar.from_int(0)],
        [Scalar.from_int(0), Scalar.from_int(-1), I],
    ]
    return NCMatrix.from_rows(ctx, rows), NCMatrix.from_rows(ctx, inv)


def conjugate_to_compact(alpha=None, hbar=None):
    """L-bar_(2) = P L_(2) P^{-1}, transported to the compact generators x, y, z."""
    sl = make_algebra("sl2h", alpha=alpha, hbar=hbar)
    su = make_algebra("su2h", alpha=alpha, hbar=hbar)
    L2 = extension_matrix(sl, 2).matrix
    P, Pinv = transition_matrix(sl)
    conj = P @ L2 @ Pinv
    return conj.map(lambda v: change_basis(v, su), ctx=su)


def compact_target(ctx):
    """2 [[0,-z,y],[z,0,-x],[-y,x,0]] over a su2h context."""
    x, y, z = (ctx.gen(g) for g in "xyz")
    zero = ctx.zero()
    return NCMatrix.from_rows(ctx, [[zero, -z, y], [z, zero, -x], [-y, x, zero]]).scale(2)
