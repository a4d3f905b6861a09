"""Random generators shared by the property tests and the acceptance gate."""
import random
from fractions import Fraction

import sympy as sp
from hypothesis import strategies as st

from ncsphere.algebra import make_algebra
from ncsphere.scalars import ALPHA, GPoly, Scalar, Specialization

CONTEXT_SPECS = [
    ("gl2h", None),
    ("sl2h", None),
    ("su2h", None),
    ("sl2h", ALPHA),
    ("su2h", ALPHA),
]


def contexts():
    return [make_algebra(name, alpha=alpha) for name, alpha in CONTEXT_SPECS]


def random_gpoly(rng, terms=3, deg=2, size=5):
    out = {}
    for _ in range(rng.randint(0, terms)):
        key = (rng.randint(0, deg), rng.randint(0, deg))
        out[key] = (rng.randint(-size, size), rng.randint(-size, size))
    return GPoly.from_terms(out)


def random_scalar(rng, with_s=True, with_den=True):
    p = random_gpoly(rng)
    q = random_gpoly(rng, terms=2) if with_s else GPoly()
    d = random_gpoly(rng, terms=2, deg=1) if with_den else GPoly.const(1)
    if d.is_zero():
        d = GPoly.const(1)
    return Scalar(p, q, d)


def random_nonzero_scalar(rng, **kw):
    while True:
        a = random_scalar(rng, **kw)
        if not a.is_zero():
            return a


def random_word(ctx, rng, max_len=6):
    return [rng.randrange(ctx.ngens) for _ in range(rng.randint(0, max_len))]


def random_element(ctx, rng, terms=3, max_len=3, coeffs="small"):
    out = ctx.zero()
    for _ in range(rng.randint(1, terms)):
        if coeffs == "small":
            c = Scalar.gaussian(rng.randint(-3, 3), rng.randint(-2, 2))
        else:
            c = random_scalar(rng, with_s=False, with_den=False)
        out = out + ctx.word(random_word(ctx, rng, max_len), c)
    return out


def random_point(rng):
    """A rational point (h, alpha) with rational s: pick h and s, solve for alpha."""
    while True:
        h = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
        s = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
        if s != 0:
            return Specialization(h, (h * h - s * s) / 4, s)


# hypothesis strategies

_gpoly_terms = st.dictionaries(
    st.tuples(st.integers(0, 2), st.integers(0, 2)),
    st.tuples(st.integers(-6, 6), st.integers(-6, 6)),
    max_size=3,
)
gpolys = _gpoly_terms.map(GPoly.from_terms)
nonzero_gpolys = gpolys.filter(lambda p: not p.is_zero())
scalars = st.builds(lambda p, q, d: Scalar(p, q, d), gpolys, gpolys, nonzero_gpolys)
nonzero_scalars = scalars.filter(lambda a: not a.is_zero())
seeds = st.integers(0, 2**32 - 1)


# commutative exterior derivative on R^3 via sympy, restricted to the sphere truncations

_X, _Y, _Z = sp.symbols("x y z")
# b = z - i y, a = i x, c = -i y - z
_SL_TO_XYZ = {0: _Z - sp.I * _Y, 1: sp.I * _X, 2: -sp.I * _Y - _Z}
# 1-form generators u_b, u_a, u_c as (dx, dy, dz) components
_FORMS = {0: (0, -sp.I, 1), 1: (sp.I, 0, 0), 2: (0, -sp.I, -1)}


def _sympy_to_su(expr, ctx):
    out = ctx.zero()
    for (i, j, k), c in sp.Poly(sp.expand(expr), _X, _Y, _Z).terms():
        re, im = sp.re(c), sp.im(c)
        coeff = Scalar.gaussian(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))
        out = out + ctx.monomial((i, j, k)).scale(coeff)
    return out


def _monomial(m):
    return _SL_TO_XYZ[0] ** m[0] * _SL_TO_XYZ[1] ** m[1] * _SL_TO_XYZ[2] ** m[2]


def _columns_to_matrix(cols, nrows):
    return [[col[i] for col in cols] for i in range(nrows)]


def _coords(target, components):
    from ncsphere.derham import to_tilde

    sl = target.ctx
    su = make_algebra("su2h", alpha=ALPHA, hbar=0)
    return target.coords(to_tilde(sl, *(_sympy_to_su(c, su) for c in components)))


def sympy_d0_matrix(cx):
    """Gradient of each Omega^0 basis monomial, in the Omega^1 basis of an h = 0 complex."""
    om0, om1 = cx.omega[0], cx.omega[1]
    cols = []
    for _, m in om0.basis:
        f = _monomial(m)
        cols.append(_coords(om1, [sp.diff(f, v) for v in (_X, _Y, _Z)]))
    return _columns_to_matrix(cols, om1.dim)


def sympy_d1_matrix(cx):
    """Curl of each Omega^1 basis form, in the Omega^2 basis of an h = 0 complex."""
    om1, om2 = cx.omega[1], cx.omega[2]
    cols = []
    for h, m in om1.basis:
        f = _monomial(m)
        w = [c * f for c in _FORMS[h]]
        curl = [
            sp.diff(w[2], _Y) - sp.diff(w[1], _Z),
            sp.diff(w[0], _Z) - sp.diff(w[2], _X),
            sp.diff(w[1], _X) - sp.diff(w[0], _Y),
        ]
        cols.append(_coords(om2, curl))
    return _columns_to_matrix(cols, om2.dim)
