import random

import numpy as np
import pytest

from ncsphere.algebra import make_algebra
from ncsphere.cayley_hamilton import numeric_ch_coefficients
from ncsphere.ncmatrix import NCMatrix, eval_matrix_poly, flip_and_perms, mat_trace
from ncsphere.scalars import ALPHA, H, I
from ncsphere.spin import (
    SymBasis,
    basic_matrix,
    compact_target,
    conjugate_to_compact,
    coproduct_matrix,
    extension_matrix,
    symmetrizer,
    transition_matrix,
)


def A_h():
    return make_algebra("sl2h", alpha=ALPHA)


def eye(n):
    return np.eye(n, dtype=int).astype(object)


def test_coproduct():
    ctx = make_algebra("sl2h")
    L = basic_matrix(ctx)
    assert coproduct_matrix(L, 1) == L
    assert coproduct_matrix(L, 2) == L.kron_scalar_right(eye(2)) + L.kron_scalar_left(eye(2))
    assert coproduct_matrix(L, 2).entries[0, 0] == ctx.gen("a").scale(2)
    assert mat_trace(coproduct_matrix(L, 2)).is_zero()
    gl = make_algebra("gl2h")
    tr = gl.gen("a") + gl.gen("d")
    assert mat_trace(coproduct_matrix(basic_matrix(gl), 2)) == tr.scale(4)


def test_symmetrizer():
    S2 = symmetrizer(2)
    assert (S2 == (np.eye(4, dtype=int) + flip_and_perms(2, 1)) * np.array(1, dtype=object) / 2).all()
    for k in (2, 3, 4):
        S = symmetrizer(k)
        assert (S.dot(S) == S).all()
        for i in range(1, k):
            assert (S.dot(flip_and_perms(k, i)) == S).all()
        assert sum(S[j, j] for j in range(2 ** k)) == k + 1  # rank of a projector is its trace


def test_sym_basis_k2():
    W = SymBasis.build(2).vectors
    assert W.T.tolist() == [[1, 0, 0, 0], [0, 1, 1, 0], [0, 0, 0, 1]]


def test_extension_k1_and_k2():
    ctx = A_h()
    a, b, c = (ctx.gen(g) for g in "abc")
    assert extension_matrix(ctx, 1).matrix == NCMatrix.from_rows(ctx, [[a, b], [c, -a]])
    zero = ctx.zero()
    expected = NCMatrix.from_rows(ctx, [[a.scale(2), b.scale(2), zero], [c, zero, b], [zero, c.scale(2), a.scale(-2)]])
    assert extension_matrix(ctx, 2).matrix == expected


def test_extension_k2_gl():
    ctx = make_algebra("gl2h")
    a, b, c, d = (ctx.gen(g) for g in "abcd")
    zero = ctx.zero()
    expected = NCMatrix.from_rows(ctx, [[a.scale(2), b.scale(2), zero], [c, a + d, b], [zero, c.scale(2), d.scale(2)]])
    assert extension_matrix(ctx, 2).matrix == expected


def test_extension_k3_corner():
    ctx = A_h()
    M = extension_matrix(ctx, 3).matrix
    assert M.shape == (4, 4)
    assert M.entries[0, 0] == ctx.gen("a").scale(3)


@pytest.mark.parametrize("k", [2, 3])
def test_restricted_operator_consistency(k):
    ctx = A_h()
    ext = extension_matrix(ctx, k)
    L1 = basic_matrix(ctx).kron_scalar_right(eye(2 ** (k - 1)))
    S = NCMatrix.from_scalars(ctx, symmetrizer(k))
    full = (S @ L1 @ S).scale(k)
    W = NCMatrix.from_scalars(ctx, ext.basis.vectors)
    rng = random.Random(k)
    for _ in range(20):
        coords = NCMatrix.from_scalars(ctx, [[rng.randint(-5, 5)] for _ in range(k + 1)])
        assert full @ (W @ coords) == W @ (ext.matrix @ coords)


def test_full_space_cubic():
    ctx = A_h()
    L1 = basic_matrix(ctx).kron_scalar_right(eye(2))
    S = NCMatrix.from_scalars(ctx, symmetrizer(2))
    M = (S @ L1 @ S).scale(2)
    P = NCMatrix.from_scalars(ctx, flip_and_perms(2, 1))
    ident = NCMatrix.identity(ctx, 4)
    lhs = M @ M @ M - (M @ M).scale(4 * H) + M.scale(4 * (ALPHA + H * H)) - (ident + P).scale(4 * H * ALPHA)
    assert lhs.is_zero()


def test_transition_matrix_inverse():
    ctx = A_h()
    P, Pinv = transition_matrix(ctx)
    assert P @ Pinv == NCMatrix.identity(ctx, 3) == Pinv @ P


def test_compact_conjugate():
    Lbar = conjugate_to_compact(alpha=ALPHA)
    assert Lbar.ctx is make_algebra("su2h", alpha=ALPHA)
    assert Lbar == compact_target(Lbar.ctx)
    assert mat_trace(Lbar).is_zero()
    assert eval_matrix_poly(Lbar, numeric_ch_coefficients(2)).is_zero()
