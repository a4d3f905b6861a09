import random
from fractions import Fraction

import pytest
from sympy import QQ_I

from helpers import random_element
from ncsphere.algebra import make_algebra
from ncsphere.cayley_hamilton import numeric_ch_coefficients
from ncsphere.ncmatrix import eval_matrix_poly
from ncsphere.representations import (
    SpecializationMismatch,
    _q,
    evaluate_hom,
    eye,
    index_pairing,
    irrep,
    oracle_coherence,
    pairing_table,
    same,
    zeros,
)
from ncsphere.scalars import ALPHA, Specialization
from ncsphere.spin import basic_matrix


@pytest.mark.parametrize("n,value", [(1, 0), (2, Fraction(-3, 4)), (3, -2)])
def test_casimir(n, value):
    rep = irrep(n)
    assert rep.alpha_value == value
    assert same(rep.casimir(), eye(n) * _q(value))


def test_trivial_representation():
    rep = irrep(1)
    assert all(m.is_zero_matrix for m in rep.mats.values())


@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("hbar", [1, Fraction(1, 2)])
def test_compact_relations(n, hbar):
    rep = irrep(n, hbar)
    x, y, z = (rep.mats[g] for g in "xyz")
    h = _q(hbar)
    assert same(x * y - y * x, z * h)
    assert same(y * z - z * y, x * h)
    assert same(z * x - x * z, y * h)
    assert same(rep.casimir(), eye(n) * _q(rep.alpha_value))


def test_b_upper_triangular():
    b = irrep(4).mats["b"].to_list()
    assert all(not b[i][j] for i in range(4) for j in range(i + 1))
    assert all(b[i][i + 1] for i in range(3))


def test_evaluate_casimir():
    ctx = make_algebra("su2h", alpha=ALPHA)
    sp = Specialization.for_irrep(3)
    rep = irrep(3)
    cas = ctx.word("xx") + ctx.word("yy") + ctx.word("zz")
    assert same(evaluate_hom(cas, rep, sp), eye(3) * _q(-2))


@pytest.mark.parametrize("name", ["sl2h", "su2h"])
def test_evaluate_is_homomorphism(name):
    rng = random.Random(9)
    for n in (2, 3, 4):
        rep, sp = irrep(n), Specialization.for_irrep(n)
        for alpha in (None, ALPHA):
            ctx = make_algebra(name, alpha=alpha)
            for _ in range(35):
                f, g = random_element(ctx, rng), random_element(ctx, rng)
                assert same(evaluate_hom(f * g, rep, sp), evaluate_hom(f, rep, sp) * evaluate_hom(g, rep, sp))
                assert same(evaluate_hom(f + g, rep, sp), evaluate_hom(f, rep, sp) + evaluate_hom(g, rep, sp))


def test_evaluate_ch_lhs():
    ctx = make_algebra("sl2h", alpha=ALPHA)
    lhs = eval_matrix_poly(basic_matrix(ctx), numeric_ch_coefficients(1))
    for n in (2, 3):
        assert same(evaluate_hom(lhs, irrep(n), Specialization.for_irrep(n)), zeros(2 * n, 2 * n))


def test_specialization_mismatch():
    ctx = make_algebra("sl2h", alpha=ALPHA)
    with pytest.raises(SpecializationMismatch):
        evaluate_hom(ctx.gen("a"), irrep(3), Specialization.for_irrep(2))
    num = make_algebra("sl2h", alpha=ALPHA.from_int(5))
    with pytest.raises(SpecializationMismatch):
        evaluate_hom(num.gen("a"), irrep(2), Specialization.for_irrep(2))


@pytest.mark.parametrize(
    "label,n,value",
    [((0, 0), 1, 1), ((0, 0), 4, 4), ((1, 0), 2, 3), ((0, 1), 2, 1), ((2, 0), 5, 7), ((0, 2), 4, 2), ((3, 0), 4, 7)],
)
def test_pairing_examples(label, n, value):
    res = index_pairing(label, n)
    assert res.pairing == res.oracle == value
    assert res.status == "ok"
    assert isinstance(res.pairing, int)


def test_pairing_row_11_and_additivity():
    for n in range(3, 7):
        assert index_pairing((1, 1), n).pairing == n
        for k1, k2 in ((1, 0), (2, 0), (2, 1), (3, 1)):
            if n > k1 + k2:
                assert index_pairing((k1, k2), n).pairing + index_pairing((k2, k1), n).pairing == 2 * n


def test_negative_branch_swaps_labels():
    assert index_pairing((2, 0), 4, branch=-1).pairing == index_pairing((0, 2), 4).pairing == 2


def test_outside_regime_is_flagged():
    res = index_pairing((1, 2), 2)
    assert res.regime == "degenerate"
    res = index_pairing((1, 0), 1)
    assert res.regime == "outside-regime"
    assert res.status == "ok"


def test_pairing_table_small():
    rows = pairing_table(max_k=2, max_n=4, min_n=1)
    assert len(rows) == 6 * 4
    for r in rows:
        if r.regime == "closed-form":
            assert r.pairing == r.k1 - r.k2 + r.n
        else:
            assert r.n <= r.k1 + r.k2
    assert rows[0].to_json()["regime"] in ("closed-form", "outside-regime", "degenerate")


@pytest.mark.parametrize("n", [2, 3])
def test_oracle_coherence(n):
    rep = oracle_coherence(n, max_k=3)
    assert rep.ok, rep.details["failed"]
