import random

import pytest

from ncsphere.algebra import make_algebra
from ncsphere.line_bundles import (
    IsoWitness,
    QlbLabel,
    basic_idempotents,
    e11_closed_form,
    e11_trivialization_witness,
    e11_witness_report,
    idempotent_suite_check,
    lagrange_factors,
    lagrange_idempotent,
    labels_for,
    module_iso_check,
    predicted_trace,
    prepicard_product,
    qlb_presentation,
    qlb_trace,
)
from ncsphere.ncmatrix import NCMatrix, ShapeMismatch, mat_trace
from ncsphere.scalars import ALPHA, H, LAMBDA1, LAMBDA2, ONE, S, DivisionByZero
from ncsphere.spin import basic_matrix


def A_h(name="sl2h"):
    return make_algebra(name, alpha=ALPHA)


def test_basic_idempotents():
    e10, e01 = basic_idempotents()
    ctx = e10.ctx
    L = basic_matrix(ctx)
    ident = NCMatrix.identity(ctx, 2)
    assert e10.e == (ident.scale(LAMBDA2) - L).scale(ONE / (LAMBDA2 - LAMBDA1))
    assert e01.e == (ident.scale(LAMBDA1) - L).scale(ONE / (LAMBDA1 - LAMBDA2))
    assert e10.e @ e10.e == e10.e
    assert e01.e @ e01.e == e01.e
    assert (e10.e @ e01.e).is_zero() and (e01.e @ e10.e).is_zero()
    assert e10.e + e01.e == ident


def test_traces():
    e10, e01 = basic_idempotents()
    assert qlb_trace(e10) == ONE + H / S
    assert qlb_trace(e01) == ONE - H / S
    assert qlb_trace(lagrange_idempotent(2, (1, 1))) == ONE
    e20 = lagrange_idempotent(2, (2, 0))
    assert qlb_trace(e20) == ONE + 2 * H / S
    assert mat_trace(e20.e) == e20.ctx.scalar(ONE + 2 * H / S)


def test_e11_closed_forms():
    e11 = lagrange_idempotent(2, (1, 1))
    assert e11.e == e11_closed_form("sl2h")
    ctx = A_h("su2h")
    xyz = [ctx.gen(g) for g in "xyz"]
    col = NCMatrix.from_rows(ctx, [[v] for v in xyz])
    row = NCMatrix.from_rows(ctx, [xyz])
    assert e11_closed_form("su2h") == (col @ row).scale(ONE / ALPHA)
    assert lagrange_idempotent(2, (1, 1), "su2h").e == e11_closed_form("su2h")


def test_partition_of_unity_k2():
    es = [lagrange_idempotent(2, lab).e for lab in labels_for(2)]
    assert es[0] + es[1] + es[2] == NCMatrix.identity(es[0].ctx, 3)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_suite(k):
    rep = idempotent_suite_check(k)
    assert rep.ok, rep.details


def test_suite_horner_and_compact():
    assert idempotent_suite_check(2, direct=False).ok
    assert idempotent_suite_check(2, "su2h").ok


def test_alpha_zero_rejected():
    with pytest.raises(DivisionByZero):
        lagrange_idempotent(2, (1, 1), alpha_zero=True)
    rep = idempotent_suite_check(2, alpha_zero=True)
    assert rep.status == "failed"
    assert "DivisionByZero" in rep.details["error"]


def test_wrong_label_degree():
    with pytest.raises(ValueError):
        lagrange_factors(2, (2, 1))
    with pytest.raises(ValueError):
        QlbLabel(-1, 0)


def test_e11_witness():
    w = e11_trivialization_witness()
    ctx = w.A.ctx
    assert w.A @ w.B == NCMatrix.identity(ctx, 1)
    assert w.B @ w.A == e11_closed_form("su2h")
    assert module_iso_check(NCMatrix.identity(ctx, 1), e11_closed_form("su2h"), w)
    rep = e11_witness_report()
    assert rep.ok and all(rep.details["checks"].values())


def test_e11_classical_limit_is_gram_projector():
    ctx = make_algebra("su2h", alpha=ONE, hbar=0)
    xyz = [ctx.gen(g) for g in "xyz"]
    col = NCMatrix.from_rows(ctx, [[v] for v in xyz])
    P = col @ NCMatrix.from_rows(ctx, [xyz])
    assert P @ P == P
    assert mat_trace(P) == ctx.one()


def test_module_iso_check_cases():
    e10, e01 = basic_idempotents()
    assert module_iso_check(e10, e10, IsoWitness(e10.e, e10.e))
    assert not module_iso_check(e10, e01, IsoWitness(e10.e, e01.e))
    with pytest.raises(ShapeMismatch):
        module_iso_check(e10, e01, IsoWitness(e10.e, NCMatrix.identity(e10.ctx, 3)))


def test_prepicard():
    assert prepicard_product((1, 0), (0, 1)) == QlbLabel(1, 1)
    assert prepicard_product((3, 2), (0, 0)) == QlbLabel(3, 2)
    assert prepicard_product((1, 0), (1, 0)) == QlbLabel(2, 0)
    a, b, c = QlbLabel(1, 2), QlbLabel(0, 3), QlbLabel(4, 1)
    assert prepicard_product(prepicard_product(a, b), c) == prepicard_product(a, prepicard_product(b, c))
    assert prepicard_product(a, b) == prepicard_product(b, a)


def test_qlb_presentation_k1():
    pres = qlb_presentation((1, 0))
    L = basic_matrix(A_h())
    assert pres.relations == NCMatrix.identity(L.ctx, 2).scale(LAMBDA1) - L
    assert (pres.relations @ pres.projector).is_zero()


def test_projector_images():
    e10, e01 = basic_idempotents()
    p10, p01 = qlb_presentation((1, 0)), qlb_presentation((0, 1))
    ctx = e10.ctx
    rng = random.Random(4)
    gens = [ctx.one()] + [ctx.gen(g) for g in ctx.gens]
    for _ in range(50):
        w = NCMatrix.from_rows(ctx, [[rng.choice(gens).scale(rng.randint(-3, 3))] for _ in range(2)])
        v = e10.e @ w
        assert p10.contains(v)
        # a vector in both images is zero
        u = e01.e @ w
        if p10.contains(u):
            assert u.is_zero()


def test_trace_symmetries():
    for k1 in range(4):
        for k2 in range(4):
            assert predicted_trace((k1, k2)).conjugate_s() == predicted_trace((k2, k1))
            assert predicted_trace((k1 + 1, k2 + 1)) == predicted_trace((k1, k2))
    assert qlb_trace(lagrange_idempotent(3, (2, 1))) == qlb_trace(lagrange_idempotent(1, (1, 0)))


def test_trace_sum():
    for k in (1, 2, 3):
        total = sum((qlb_trace(lagrange_idempotent(k, lab)) for lab in labels_for(k)), start=0 * ONE)
        assert total == k + 1


def test_idempotent_json():
    data = lagrange_idempotent(1, (1, 0)).to_json(trace=ONE + H / S)
    assert data["label"] == [1, 0]
    assert data["matrix"]["rows"] == 2
