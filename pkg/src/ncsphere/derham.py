"""Truncated de Rham complex on the quantum sphere.

Everything runs in the sl2h picture.  Free modules use generators
ũ_b, ũ_a, ũ_c, which transform like b, a, c under the adjoint action:

    ũ_b = u02 - i u11,   ũ_a = i u20,   ũ_c = -i u11 - u02

(the same linear change as b = z - i y, a = i x, c = -i y - z).  An element
sum ũ_h f_h is a dict {(h, monomial): Scalar}; rank-one vectors use h = None.

The degree-N truncation keeps coefficients of PBW degree <= N.  The quotient
by the relations is taken weight by weight (ad_a is diagonal on monomials),
and irreducibles are found as kernels of the raising operator ad_b.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import change_basis, make_algebra
from .cayley_hamilton import Report
from .linalg import nullspace, rank, rref, solve_many
from .ncmatrix import NCMatrix
from .scalars import ALPHA, I, ONE, ZERO, DivisionByZero, Scalar
from .spin import conjugate_to_compact

B, A, C = 0, 1, 2  # generator indices in sl2h (order b < a < c)
_WEIGHT = {B: 1, A: 0, C: -1, None: 0}
_HALF = Scalar.from_fraction(Fraction(1, 2))


class PatternMismatch(RuntimeError):
    pass


# free-module vectors -------------------------------------------------------------


def _acc(out, key, c):
    if c.is_zero():
        return
    old = out.get(key)
    new = c if old is None else old + c
    if new.is_zero():
        out.pop(key, None)
    else:
        out[key] = new


def vec_add(*vs, coeffs=None):
    out = {}
    for i, v in enumerate(vs):
        c = ONE if coeffs is None else Scalar.coerce(coeffs[i])
        for k, x in v.items():
            _acc(out, k, x if c.is_one() else x * c)
    return out


def vec_scale(v, c):
    c = Scalar.coerce(c)
    if c.is_zero():
        return {}
    return {k: x * c for k, x in v.items()}


def element_vec(f, h=None):
    """ũ_h f (or f itself when h is None) as a vector."""
    return {(h, m): c for m, c in f.terms.items()}


def mul_right(ctx, v, f):
    """(sum ũ_h g_h) f = sum ũ_h (g_h f)."""
    out = {}
    for (h, m), c in v.items():
        for m2, c2 in f.terms.items():
            cc = c * c2
            for m3, c3 in ctx._mono_mul(m, m2).items():
                _acc(out, (h, m3), cc * c3)
    return out


def ad_vec(ctx, g, v):
    """Adjoint action of generator ``g`` on coefficients plus the vector action on ũ."""
    out = {}
    for (h, m), c in v.items():
        for m2, c2 in ctx._ad_mono(g, m).items():
            _acc(out, (h, m2), c * c2)
        if h is not None:
            for k, sc in ctx.struct[g][h]:
                _acc(out, (k, m), c * sc)
    return out


def key_weight(key):
    h, m = key
    return _WEIGHT[h] + m[B] - m[C]


def key_degree(key):
    return sum(key[1])


def filtration_monomials(N):
    """PBW monomials b^i a^e c^k (e <= 1) of degree <= N."""
    out = []
    for d in range(N + 1):
        for e in (0, 1):
            for i in range(d - e + 1):
                k = d - e - i
                if k >= 0:
                    out.append((i, e, k))
    return out


def to_tilde(ctx, f20, f11, f02):
    """u20 f20 + u11 f11 + u02 f02 rewritten over ũ_b, ũ_a, ũ_c (coefficients in ``ctx``)."""
    gb = (f11.scale(I) + f02).scale(_HALF)
    ga = f20.scale(-I)
    gc = (f11.scale(I) - f02).scale(_HALF)
    out = {}
    for h, g in ((B, gb), (A, ga), (C, gc)):
        g = change_basis(g, ctx) if g.ctx is not ctx else g
        for k, c in element_vec(g, h).items():
            _acc(out, k, c)
    return out


# module presentations ----------------------------------------------------------------


@dataclass
class ModulePresentation:
    name: str
    rank: int
    generators: tuple
    relations: list  # 1 x rank NCMatrix rows over the compact presentation

    def relation_vectors(self, ctx):
        """The relation rows transported to ũ-vectors over the sl2h context ``ctx``."""
        out = []
        for row in self.relations:
            f20, f11, f02 = (row.entries[0, j] for j in range(3))
            out.append(to_tilde(ctx, f20, f11, f02))
        return out


def _contexts(hbar=None, alpha=None):
    alpha = ALPHA if alpha is None else alpha
    return make_algebra("sl2h", alpha=alpha, hbar=hbar), make_algebra("su2h", alpha=alpha, hbar=hbar)


def module_presentations(hbar=None, alpha=None):
    """(T, Omega^0, Omega^1, Omega^2) with relation rows over the compact generators."""
    _, su = _contexts(hbar, alpha)
    if su.alpha.is_zero():
        raise DivisionByZero("alpha = 0: the normal-bundle idempotent divides by alpha")
    x, y, z = (su.gen(g) for g in "xyz")
    names = ("u20", "u11", "u02")
    c_row = NCMatrix.from_rows(su, [[x, y, z]])
    Lbar = conjugate_to_compact(alpha=su.alpha, hbar=su.hbar)
    M = Lbar - NCMatrix.identity(su, 3).scale(2 * su.hbar)
    omega2_rows = [NCMatrix.from_rows(su, [[M.entries[i, j] for i in range(3)]]) for j in range(3)]
    T = ModulePresentation("T", 3, names, [c_row])
    return (
        T,
        ModulePresentation("Omega0", 1, ("1",), []),
        ModulePresentation("Omega1", 3, names, [c_row]),
        ModulePresentation("Omega2", 3, names, omega2_rows),
    )


def presentation_checks(hbar=None, alpha=None):
    """T is the complement of e11, and the Omega^2 rows annihilate e11 (eigenvalue 2h)."""
    _, su = _contexts(hbar, alpha)
    if su.alpha.is_zero():
        raise DivisionByZero("alpha = 0")
    xyz = [su.gen(g) for g in "xyz"]
    col = NCMatrix.from_rows(su, [[v] for v in xyz])
    row = NCMatrix.from_rows(su, [[v.scale(ONE / su.alpha) for v in xyz]])
    e11 = col @ row
    Lbar = conjugate_to_compact(alpha=su.alpha, hbar=su.hbar)
    M = Lbar - NCMatrix.identity(su, 3).scale(2 * su.hbar)
    ident = NCMatrix.identity(su, 3)
    return {
        "relation_column_in_image_e11": e11 @ col == col,
        "complement_kills_relations": (ident - e11) @ col == NCMatrix.zeros(su, 3, 1),
        "e11_idempotent": e11 @ e11 == e11,
        "omega2_rows_left_eigen": (e11 @ M).is_zero(),
        "omega2_rows_right_eigen": (M @ e11).is_zero(),
    }


# truncated quotient components -------------------------------------------------------


@dataclass
class TruncatedComponent:
    name: str
    ctx: object
    N: int
    rank: int
    basis: list  # quotient basis keys, grouped by weight (descending)
    index: dict
    _pivots: dict = field(repr=False)  # pivot key -> {basis key: coefficient} with pivot = -sum ...
    decomposition: dict = field(default_factory=dict)  # spin l -> multiplicity
    hw: dict = field(default_factory=dict)  # spin l -> list of coordinate vectors

    @property
    def dim(self):
        return len(self.basis)

    def reduce(self, v):
        """Coordinates (dict over basis keys) of the class of ``v``."""
        out = {}
        for k, c in v.items():
            if key_degree(k) > self.N:
                raise ValueError(f"{k} exceeds the truncation degree {self.N}")
            red = self._pivots.get(k)
            if red is None:
                _acc(out, k, c)
            else:
                for bk, bc in red.items():
                    _acc(out, bk, c * bc)
        return out

    def coords(self, v):
        red = self.reduce(v)
        col = [ZERO] * self.dim
        for k, c in red.items():
            col[self.index[k]] = c
        return col

    def vector(self, coords):
        return {self.basis[i]: c for i, c in enumerate(coords) if not c.is_zero()}

    def weight_slice(self, w):
        return [i for i, k in enumerate(self.basis) if key_weight(k) == w]

    def action_matrix(self, g):
        """Matrix (rows = target coords) of ad_g on the quotient basis."""
        cols = [self.coords(ad_vec(self.ctx, g, {k: ONE})) for k in self.basis]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def irreducible_dims(self):
        out = []
        for l in sorted(self.decomposition):
            out += [2 * l + 1] * self.decomposition[l]
        return out


def _build_component(name, ctx, rank, N, relation_vecs):
    mons = filtration_monomials(N)
    gens = [None] if rank == 1 else [B, A, C]
    keys = [(h, m) for h in gens for m in mons]
    by_weight = {}
    for k in keys:
        by_weight.setdefault(key_weight(k), []).append(k)
    # split relations into weight components (the relation span is ad_a-invariant)
    rel_by_weight = {}
    for v in relation_vecs:
        parts = {}
        for k, c in v.items():
            parts.setdefault(key_weight(k), {})[k] = c
        for w, part in parts.items():
            rel_by_weight.setdefault(w, []).append(part)
    pivots_map = {}
    basis = []
    for w in sorted(by_weight, reverse=True):
        cols = sorted(by_weight[w], key=lambda k: (-key_degree(k), _gen_order(k[0]), tuple(-e for e in k[1])))
        rels = rel_by_weight.get(w, [])
        free = cols
        if rels:
            col_index = {k: i for i, k in enumerate(cols)}
            rows = []
            for r in rels:
                row = [ZERO] * len(cols)
                for k, c in r.items():
                    row[col_index[k]] = c
                rows.append(row)
            R, piv = rref(rows)
            piv_set = set(piv)
            free = [k for i, k in enumerate(cols) if i not in piv_set]
            for r_i, p in enumerate(piv):
                # x_p + sum_{free f} R[f] x_f = 0  =>  [x_p] = -sum R[f] [x_f]
                pivots_map[cols[p]] = {
                    cols[j]: -R[r_i][j] for j in range(len(cols)) if j not in piv_set and not R[r_i][j].is_zero()
                }
        basis.extend(free)
    index = {k: i for i, k in enumerate(basis)}
    comp = TruncatedComponent(name, ctx, N, rank, basis, index, pivots_map)
    _decompose(comp)
    return comp


def _gen_order(h):
    return -1 if h is None else h


def _decompose(comp):
    """Highest-weight spaces: kernel of ad_b from weight l into weight l + 1."""
    weights = sorted({key_weight(k) for k in comp.basis}, reverse=True)
    total = 0
    for l in weights:
        if l < 0:
            continue
        src = comp.weight_slice(l)
        tgt = comp.weight_slice(l + 1)
        if not tgt:
            kernel = [[ONE if j == i else ZERO for j in range(len(src))] for i in range(len(src))]
        else:
            images = [comp.coords(ad_vec(comp.ctx, B, {comp.basis[i]: ONE})) for i in src]
            rows = [[images[j][t] for j in range(len(src))] for t in tgt]
            kernel = nullspace(rows)
        if kernel:
            comp.decomposition[l] = len(kernel)
            vecs = []
            for kv in kernel:
                full = [ZERO] * comp.dim
                for j, i in enumerate(src):
                    full[i] = kv[j]
                vecs.append(full)
            comp.hw[l] = vecs
            total += len(kernel) * (2 * l + 1)
    if total != comp.dim:
        raise PatternMismatch(f"{comp.name}: irreducibles account for {total} of {comp.dim} dimensions")


def truncate_and_decompose(module, N, hbar=None, alpha=None):
    """Exact basis and sl(2) decomposition of the degree <= N part of a presented module."""
    sl, _ = _contexts(hbar, alpha)
    if isinstance(module, str):
        module = {m.name: m for m in module_presentations(hbar, alpha)}[module]
    rels = []
    if module.relations:
        base = module.relation_vectors(sl)
        for m in filtration_monomials(N - 1) if N >= 1 else []:
            mono = sl.monomial(m)
            for r in base:
                rels.append(mul_right(sl, r, mono))
    return _build_component(module.name, sl, module.rank, N, rels)


# differentials -------------------------------------------------------------------------


@dataclass
class DifferentialMap:
    level: int
    source: TruncatedComponent
    target: TruncatedComponent
    matrix: list  # rows indexed by target basis, columns by source basis
    normalization: dict = field(default_factory=dict)

    def apply(self, coords):
        out = [ZERO] * self.target.dim
        for j, x in enumerate(coords):
            if x.is_zero():
                continue
            for i in range(self.target.dim):
                m = self.matrix[i][j]
                if not m.is_zero():
                    out[i] = out[i] + m * x
        return out

    def to_json(self):
        return [[c.to_json() for c in row] for row in self.matrix]


def _lowering_orbit(ctx, v, l):
    out = [v]
    for _ in range(2 * l):
        out.append(ad_vec(ctx, C, out[-1]))
    return out


def _assemble(source, target, pairs):
    """Matrix D with D(coords(src)) = coords(img) for an adapted source basis, solved weight by weight."""
    D = [[ZERO] * source.dim for _ in range(target.dim)]
    by_weight = {}
    for src, img in pairs:
        w = {key_weight(k) for k in src}
        if len(w) != 1:
            raise PatternMismatch("adapted basis vector is not weight-homogeneous")
        by_weight.setdefault(w.pop(), []).append((src, img))
    for w, items in by_weight.items():
        s_idx = source.weight_slice(w)
        t_idx = target.weight_slice(w)
        if len(items) != len(s_idx):
            raise PatternMismatch(f"weight {w}: {len(items)} adapted vectors for {len(s_idx)} basis vectors")
        Hs = [source.coords(src) for src, _ in items]
        Is = [target.coords(img) if img else [ZERO] * target.dim for _, img in items]
        # rows of D restricted: H^T d = i_row for each target index t
        HT = [[Hs[j][s] for s in s_idx] for j in range(len(items))]
        rhs = [[Is[j][t] for j in range(len(items))] for t in t_idx]
        if not t_idx:
            continue
        sol = solve_many(HT, rhs)
        for ti, t in enumerate(t_idx):
            for si, s in enumerate(s_idx):
                D[t][s] = sol[ti][si]
    return D


def _d0_images(ctx, N):
    """Adapted basis ad_c^j(b^l) of Omega^0 and images ad_c^j(l ũ_b b^(l-1))."""
    pairs = []
    for l in range(N + 1):
        src = element_vec(ctx.monomial((l, 0, 0)))
        img = {} if l == 0 else vec_scale(element_vec(ctx.monomial((l - 1, 0, 0)), B), l)
        for s, t in zip(_lowering_orbit(ctx, src, l), _lowering_orbit(ctx, img, l)):
            pairs.append((s, t))
    return pairs


def coexact_vector(ctx, l):
    """-l ũ_a b^l - ũ_b ad_c(b^l) / 2, a highest-weight vector of weight l."""
    bl = element_vec(ctx.monomial((l, 0, 0)))
    first = {(A, m): c * (-l) for (_, m), c in bl.items()}
    adc = ad_vec(ctx, C, bl)
    second = {(B, m): c * (-_HALF) for (_, m), c in adc.items()}
    return vec_add(first, second)


def omega2_highest(ctx, l):
    """[C] for l = 0, [ũ_b b^(l-1)] for l >= 1."""
    if l == 0:
        sl = ctx
        su = make_algebra("su2h", alpha=sl.alpha, hbar=sl.hbar)
        x, y, z = (su.gen(g) for g in "xyz")
        return to_tilde(sl, x, y, z)
    return element_vec(ctx.monomial((l - 1, 0, 0)), B)


def volume_class_vector(ctx):
    """u20 x + u11 y + u02 z as a ũ-vector."""
    return omega2_highest(ctx, 0)


# classical exterior derivative (h = 0) in b, a, c coordinates ---------------------------


def _wedge_table():
    """dg ∧ dh expressed as sum_k coeff ũ_k (Omega^2 generators ũ_k = *dk)."""
    i = I
    vec = {B: (ZERO, -i, ONE), A: (i, ZERO, ZERO), C: (ZERO, -i, -ONE)}

    def cross(u, v):
        return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])

    # x = -i a, y = i (b + c)/2, z = (b - c)/2 as combinations of (b, a, c)
    ex = {A: -i}
    ey = {B: i * _HALF, C: i * _HALF}
    ez = {B: _HALF, C: -_HALF}
    table = {}
    for g in (B, A, C):
        for h in (B, A, C):
            w = cross(vec[g], vec[h])
            out = {}
            for comp, basis in zip(w, (ex, ey, ez)):
                for k, c in basis.items():
                    if not comp.is_zero():
                        out[k] = out.get(k, ZERO) + comp * c
            table[(g, h)] = {k: c for k, c in out.items() if not c.is_zero()}
    return table


_WEDGE = None


def _partial(m, g):
    """Derivative of the commutative monomial b^i a^e c^k in generator g: (coeff, monomial)."""
    if m[g] == 0:
        return None
    new = list(m)
    new[g] -= 1
    return m[g], tuple(new)


def classical_d(ctx, v):
    """Exterior derivative at h = 0: functions -> 1-forms, 1-forms -> 2-forms (ambient formulas)."""
    global _WEDGE
    if not ctx.hbar.is_zero():
        raise ValueError("classical_d needs the h = 0 context")
    if _WEDGE is None:
        _WEDGE = _wedge_table()
    out = {}
    for (h, m), c in v.items():
        for g in (B, A, C):
            p = _partial(m, g)
            if p is None:
                continue
            k, mm = p
            coef = c * k
            if h is None:
                _acc(out, (g, mm), coef)
            else:
                for t, tc in _WEDGE[(g, h)].items():
                    _acc(out, (t, mm), coef * tc)
    return out


# the differentials ---------------------------------------------------------------------


@dataclass
class Complex:
    N: int
    omega: list  # TruncatedComponent for levels 0, 1, 2
    d0: DifferentialMap
    d1: DifferentialMap
    nu: dict


def _coexact_normalizations(N, alpha):
    """nu_l with classical d(w_co,l) = nu_l [ũ_b b^(l-1)] in Omega^2 at h = 0."""
    ctx0, _ = _contexts(0, alpha)
    om2 = truncate_and_decompose("Omega2", N, 0, alpha)
    nu = {}
    for l in range(1, N + 1):
        img = om2.coords(classical_d(ctx0, coexact_vector(ctx0, l)))
        ref = om2.coords(omega2_highest(ctx0, l))
        j = next(i for i, c in enumerate(ref) if not c.is_zero())
        ratio = img[j] / ref[j]
        if any(not (a - ratio * b).is_zero() for a, b in zip(img, ref)):
            raise PatternMismatch(f"classical d(w_co,{l}) is not a multiple of the highest-weight class")
        nu[l] = ratio
    return nu


def build_complex(N, hbar=None, alpha=None, nu=None):
    """Truncated Omega^0 -> Omega^1 -> Omega^2 with the pattern-defined differentials."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    sl, _ = _contexts(hbar, alpha)
    om0 = truncate_and_decompose("Omega0", N, hbar, alpha)
    om1 = truncate_and_decompose("Omega1", N, hbar, alpha)
    om2 = truncate_and_decompose("Omega2", N, hbar, alpha)
    d0 = DifferentialMap(0, om0, om1, _assemble(om0, om1, _d0_images(sl, N)))

    if nu is None:
        nu = _coexact_normalizations(N, alpha)
    _check_omega1_pattern(om1, sl, N)
    pairs = []
    for l in range(1, N + 2):
        ex = vec_scale(element_vec(sl.monomial((l - 1, 0, 0)), B), l)
        for s in _lowering_orbit(sl, ex, l):
            pairs.append((s, {}))
        if l <= N:
            co = coexact_vector(sl, l)
            tgt = vec_scale(omega2_highest(sl, l), nu[l])
            for s, t in zip(_lowering_orbit(sl, co, l), _lowering_orbit(sl, tgt, l)):
                pairs.append((s, t))
    d1 = DifferentialMap(1, om1, om2, _assemble(om1, om2, pairs), normalization=nu)
    return Complex(N, [om0, om1, om2], d0, d1, nu)


def _check_omega1_pattern(om1, ctx, N):
    expected = {l: 2 for l in range(1, N + 1)}
    expected[N + 1] = 1
    if om1.decomposition != expected:
        raise PatternMismatch(f"Omega^1 decomposition {om1.decomposition} != {expected}")
    for l in range(1, N + 1):
        ex = om1.coords(element_vec(ctx.monomial((l - 1, 0, 0)), B))
        co = om1.coords(coexact_vector(ctx, l))
        if rank([ex, co]) != 2:
            raise PatternMismatch(f"exact and coexact vectors of spin {l} are dependent")


def differential(level, N, hbar=None, alpha=None):
    cx = build_complex(N, hbar, alpha)
    return cx.d0 if level == 0 else cx.d1


def _matmul(X, Y):
    n, k, m = len(X), len(Y), len(Y[0]) if Y else 0
    out = [[ZERO] * m for _ in range(n)]
    for i in range(n):
        for t in range(k):
            a = X[i][t]
            if a.is_zero():
                continue
            row = Y[t]
            for j in range(m):
                if not row[j].is_zero():
                    out[i][j] = out[i][j] + a * row[j]
    return out


def _is_zero_matrix(X):
    return all(c.is_zero() for row in X for c in row)


def d_squared_zero(cx):
    return _is_zero_matrix(_matmul(cx.d1.matrix, cx.d0.matrix))


def intertwines(dmap):
    """D ad_g = ad_g D for g in b, a, c."""
    for g in (B, A, C):
        S = dmap.source.action_matrix(g)
        T = dmap.target.action_matrix(g)
        left = _matmul(dmap.matrix, S)
        right = _matmul(T, dmap.matrix)
        if not all((x - y).is_zero() for rl, rr in zip(left, right) for x, y in zip(rl, rr)):
            return False
    return True


# cohomology ------------------------------------------------------------------------------


def _restricted(dmap, l):
    """Matrix of d between highest-weight spaces of spin l (in hw coordinates)."""
    src = dmap.source.hw.get(l, [])
    tgt = dmap.target.hw.get(l, [])
    if not src or not tgt:
        return src, tgt, None
    images = [dmap.apply(v) for v in src]
    # express images in the target hw basis: solve sum_t x_t tgt_t = image
    rows = [[tgt[t][i] for t in range(len(tgt))] for i in range(dmap.target.dim)]
    M = []
    for img in images:
        R, piv = rref([row + [img[i]] for i, row in enumerate(rows)])
        if len(tgt) in piv:
            raise PatternMismatch("image of a highest-weight vector is not highest weight")
        x = [ZERO] * len(tgt)
        for r, p in enumerate(piv):
            x[p] = R[r][len(tgt)]
        M.append(x)
    return src, tgt, [[M[j][i] for j in range(len(src))] for i in range(len(tgt))]


@dataclass
class Cohomology:
    dims: tuple
    per_spin: dict
    generators: dict


def cohomology(N, hbar=None, alpha=None, cx=None):
    """Cohomology spin block by spin block for spins l <= N (the spin N+1 edge is excluded)."""
    if N < 1:
        raise ValueError("the class of u20 x + u11 y + u02 z needs N >= 1")
    cx = cx or build_complex(N, hbar, alpha)
    om0, om1, om2 = cx.omega
    per_spin = {}
    totals = [0, 0, 0]
    for l in range(N + 1):
        m = [om0.decomposition.get(l, 0), om1.decomposition.get(l, 0), om2.decomposition.get(l, 0)]
        _, _, D0 = _restricted(cx.d0, l)
        _, _, D1 = _restricted(cx.d1, l)
        r0 = rank(D0) if D0 else 0
        r1 = rank(D1) if D1 else 0
        h = (m[0] - r0, m[1] - r0 - r1, m[2] - r1)
        per_spin[l] = h
        for p in range(3):
            totals[p] += h[p] * (2 * l + 1)
    sl = cx.d0.source.ctx
    gens = {}
    if per_spin[0][0] == 1:
        one = om0.coords(element_vec(sl.one()))
        gens["H0"] = "1" if _is_zero_vec(cx.d0.apply(one)) else None
    if per_spin[0][2] == 1:
        vol = om2.coords(volume_class_vector(sl))
        hw0 = om2.hw.get(0, [])
        spans = hw0 and rank([hw0[0], vol]) == 1 and not _is_zero_vec(vol)
        gens["H2"] = "u20*x + u11*y + u02*z" if spans else None
    return Cohomology(tuple(totals), per_spin, gens)


def _is_zero_vec(v):
    return all(c.is_zero() for c in v)


# classical limit ---------------------------------------------------------------------------


def _subs_hbar_zero(X):
    return [[c.subs_hbar(0) for c in row] for row in X]


def _matrices_equal(X, Y):
    return len(X) == len(Y) and all(
        len(rx) == len(ry) and all((a - b).is_zero() for a, b in zip(rx, ry)) for rx, ry in zip(X, Y)
    )


def classical_matrix(source, target, level):
    """Matrix of the ambient exterior derivative between h = 0 truncations."""
    ctx = source.ctx
    cols = [target.coords(classical_d(ctx, {k: ONE})) for k in source.basis]
    return [[cols[j][i] for j in range(source.dim)] for i in range(target.dim)]


def classical_limit_check(N, alpha=None, cx=None):
    started = time.perf_counter()
    cx = cx or build_complex(N, None, alpha)
    cx0 = build_complex(N, 0, alpha)
    checks = {}
    for lvl in (0, 1):
        sym, zero = (cx.d0, cx0.d0) if lvl == 0 else (cx.d1, cx0.d1)
        same_basis = sym.source.basis == zero.source.basis and sym.target.basis == zero.target.basis
        checks[f"d{lvl}_same_basis"] = same_basis
        at_zero = _subs_hbar_zero(sym.matrix)
        checks[f"d{lvl}_specializes_to_h0_construction"] = same_basis and _matrices_equal(at_zero, zero.matrix)
        classical = classical_matrix(zero.source, zero.target, lvl)
        checks[f"d{lvl}_equals_classical"] = _matrices_equal(zero.matrix, classical)
        checks[f"d{lvl}_specialization_equals_classical"] = same_basis and _matrices_equal(at_zero, classical)
    for p in range(3):
        checks[f"omega{p}_multiplicities_match"] = cx.omega[p].decomposition == cx0.omega[p].decomposition
    status = "verified" if all(checks.values()) else "failed"
    return Report("classical-limit", status, None, elapsed_ms=(time.perf_counter() - started) * 1e3,
                  details={"N": N, "checks": checks})


def derham_report(N, hbar=None, alpha=None, include_matrices=False):
    """Complex, d^2 = 0, intertwining, cohomology and classical limit at truncation N."""
    started = time.perf_counter()
    cx = build_complex(N, hbar, alpha)
    dsq = d_squared_zero(cx)
    inter = intertwines(cx.d0) and intertwines(cx.d1)
    coh = cohomology(N, cx=cx) if N >= 1 else None
    # the classical limit is a statement about the symbolic-h complex
    lim = classical_limit_check(N, alpha, cx=cx if hbar is None else None)
    decomp = {f"Omega{p}": cx.omega[p].irreducible_dims() for p in range(3)}
    ok = dsq and inter and lim.ok and (coh is None or (coh.dims == (1, 0, 1) and all(coh.generators.values())))
    details = {
        "N": N,
        "decompositions": decomp,
        "d_squared_zero": dsq,
        "intertwining": inter,
        "cohomology": None if coh is None else list(coh.dims),
        "cohomology_per_spin": None if coh is None else {str(l): list(h) for l, h in coh.per_spin.items()},
        "generators": None if coh is None else coh.generators,
        "normalizations": {str(l): str(v) for l, v in cx.nu.items()},
        "classical_limit_ok": lim.ok,
        "classical_checks": lim.details["checks"],
    }
    if include_matrices:
        details["d0"] = cx.d0.to_json()
        details["d1"] = cx.d1.to_json()
    return Report("derham", "verified" if ok else "failed", None,
                  elapsed_ms=(time.perf_counter() - started) * 1e3, details=details)
