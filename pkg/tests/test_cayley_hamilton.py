from fractions import Fraction

import pytest

from ncsphere.algebra import make_algebra
from ncsphere.cayley_hamilton import (
    DegreeCapExceeded,
    _flatten,
    generic_ch_residual,
    minimal_polynomial,
    numeric_ch_coefficients,
    poly_from_roots,
    predicted_root,
    predicted_spectrum,
    spectrum_check,
    verify_generic_ch,
    verify_numeric_ch,
    vieta_check_k1,
)
from ncsphere.linalg import nullspace
from ncsphere.ncmatrix import NCMatrix
from ncsphere.scalars import ALPHA, H, LAMBDA1, LAMBDA2, ONE, ZERO, Scalar
from ncsphere.spin import extension_matrix


def A_h():
    return make_algebra("sl2h", alpha=ALPHA)


def test_generic_ch():
    rep = verify_generic_ch()
    assert rep.ok and rep.lhs_residual.is_zero()
    assert rep.to_json()["status"] == "verified"


def test_generic_ch_classical_limit():
    assert verify_generic_ch(hbar=0).ok


def test_generic_ch_negative_control():
    rep = verify_generic_ch(wrong_constant=True)
    assert rep.status == "failed"
    assert rep.details["witness"]["value"] != "0"
    assert not generic_ch_residual(wrong_constant=True).is_zero()


@pytest.mark.parametrize("k", [1, 2])
@pytest.mark.parametrize("presentation", ["sl2h", "su2h"])
def test_numeric_ch(k, presentation):
    assert verify_numeric_ch(k, presentation).ok


@pytest.mark.parametrize("hbar,alpha", [(1, Fraction(-3, 4)), (Fraction(1, 2), 2), (0, 1)])
def test_numeric_ch_at_points(hbar, alpha):
    for k in (1, 2):
        for pres in ("sl2h", "su2h"):
            assert verify_numeric_ch(k, pres, alpha=Scalar.from_fraction(alpha), hbar=hbar).ok


def test_numeric_ch_rejects_k3():
    with pytest.raises(ValueError):
        numeric_ch_coefficients(3)


def test_minpoly_k1_k2():
    ctx = A_h()
    mp1 = minimal_polynomial(extension_matrix(ctx, 1))
    assert mp1.coefficients == [ALPHA, -H, ONE]
    assert vieta_check_k1(mp1)
    mp2 = minimal_polynomial(extension_matrix(ctx, 2))
    assert mp2.coefficients == numeric_ch_coefficients(2)


def test_minpoly_k3_roots():
    mp = minimal_polynomial(extension_matrix(A_h(), 3))
    roots = [3 * LAMBDA1, LAMBDA1 + 3 * H, LAMBDA2 + 3 * H, 3 * LAMBDA2]
    assert mp.degree == 4
    assert mp.coefficients == poly_from_roots(roots)
    assert mp(extension_matrix(A_h(), 3).matrix).is_zero()


def test_minpoly_degree_cap():
    with pytest.raises(DegreeCapExceeded):
        minimal_polynomial(extension_matrix(A_h(), 2), cap=2)


def _poly_divmod(num, den):
    num = list(num)
    q = [ZERO] * max(len(num) - len(den) + 1, 1)
    while len(num) >= len(den) and any(not c.is_zero() for c in num):
        shift = len(num) - len(den)
        f = num[-1] / den[-1]
        q[shift] = f
        for i, c in enumerate(den):
            num[i + shift] = num[i + shift] - f * c
        num.pop()
    return q, num


@pytest.mark.parametrize("k", [1, 2])
def test_minpoly_divides_other_annihilators(k):
    M = extension_matrix(A_h(), k).matrix
    mp = minimal_polynomial(M)
    keys = {}
    powers = [NCMatrix.identity(M.ctx, M.rows)]
    for _ in range(k + 2):
        powers.append(powers[-1] @ M)
    vecs = [_flatten(P, keys) for P in powers]
    rows = [[v.get(key, ZERO) for v in vecs] for key in keys]
    null = nullspace(rows)
    assert len(null) == 2  # p and lambda * p
    for v in null:
        _, rem = _poly_divmod(v, mp.coefficients)
        assert all(c.is_zero() for c in rem)


def test_predicted_spectrum():
    assert predicted_spectrum(1).values() == [LAMBDA1, LAMBDA2]
    assert predicted_spectrum(2).values() == [2 * LAMBDA1, 2 * H, 2 * LAMBDA2]
    for k1 in range(4):
        for k2 in range(4):
            # the cross term is k1 k2 (lambda1 + lambda2) = k1 k2 h, which vanishes at h = 0
            assert predicted_root(k1, k2) - (k1 * LAMBDA1 + k2 * LAMBDA2) == k1 * k2 * H
    with pytest.raises(ValueError):
        predicted_spectrum(-1)


@pytest.mark.parametrize("k", [2, 3])
def test_spectrum_check(k):
    rep = spectrum_check(k, at=(1, Fraction(-3, 4)))
    assert rep.ok
    assert rep.details["roots_distinct"]
    assert rep.details["distinct_at_point"]
    assert not rep.details["degenerate_spectrum"]


def test_spectrum_check_degenerate_point():
    rep = spectrum_check(2, at=(2, 1))
    assert rep.details["degenerate_spectrum"]
    assert rep.details["distinct_at_point"] is False


def test_spectrum_check_reports_mismatch():
    from ncsphere.cayley_hamilton import MinPoly

    wrong = MinPoly(numeric_ch_coefficients(2)[:-1] + [ONE, ONE])
    rep = spectrum_check(2, minpoly=wrong)
    assert rep.status == "mismatch"
    assert "discovered" in rep.details["mismatch"]
