"""Finite-dimensional irreducibles, the evaluation homomorphism and the index pairing.

Numeric matrices are sympy ``DomainMatrix`` objects over QQ_I.  A matrix over
the algebra evaluates to a block matrix: entry (i, j) becomes the n x n block
``pi(M[i, j])``.
"""
from __future__ import annotations

import time
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import QQ, QQ_I
from sympy.polys.matrices import DomainMatrix

from .algebra import make_algebra
from .cayley_hamilton import Report, numeric_ch_coefficients, predicted_spectrum
from .line_bundles import QlbLabel, lagrange_idempotent, qlb_trace
from .ncmatrix import symmetrizer_array
from .scalars import ALPHA, H, DenominatorVanishes, Scalar, Specialization, specialize, to_fraction
from .spin import SymBasis


class SpecializationMismatch(ValueError):
    pass


class DegenerateAtSpecialization(ValueError):
    pass


def _q(x):
    x = Fraction(x)
    return QQ_I(QQ(x.numerator, x.denominator), 0)


def dm(rows):
    """DomainMatrix over QQ_I from nested lists of numbers or QQ_I elements."""
    conv = [[v if _is_qqi(v) else _q(v) for v in row] for row in rows]
    return DomainMatrix(conv, (len(conv), len(conv[0]) if conv else 0), QQ_I)


def _is_qqi(v):
    try:
        return v.parent() is QQ_I
    except AttributeError:
        return False


def eye(n):
    return DomainMatrix.eye(n, QQ_I).to_dense()


def zeros(r, c):
    return DomainMatrix.zeros((r, c), QQ_I).to_dense()


def same(A, B):
    """Exact equality independent of sparse/dense storage."""
    return A.shape == B.shape and (A - B).is_zero_matrix


def trace(M):
    rows = M.to_list()
    acc = QQ_I(0, 0)
    for i in range(len(rows)):
        acc += rows[i][i]
    return acc


def kron(A, B):
    a, b = A.to_list(), B.to_list()
    ra, ca = len(a), len(a[0])
    rb, cb = len(b), len(b[0])
    zero = QQ_I(0, 0)
    out = [[zero] * (ca * cb) for _ in range(ra * rb)]
    for i in range(ra):
        for j in range(ca):
            x = a[i][j]
            if not x:
                continue
            for k in range(rb):
                row = out[i * rb + k]
                for m in range(cb):
                    y = b[k][m]
                    if y:
                        row[j * cb + m] = x * y
    return DomainMatrix(out, (ra * rb, ca * cb), QQ_I)


def from_blocks(blocks):
    """Assemble a block matrix from a rectangular grid of equally sized square blocks."""
    m, p = len(blocks), len(blocks[0])
    n = blocks[0][0].shape[0]
    zero = QQ_I(0, 0)
    out = [[zero] * (p * n) for _ in range(m * n)]
    for i in range(m):
        for j in range(p):
            rows = blocks[i][j].to_list()
            for u in range(n):
                out[i * n + u][j * n:(j + 1) * n] = rows[u]
    return DomainMatrix(out, (m * n, p * n), QQ_I)


# irreducible representations ---------------------------------------------------


@dataclass
class Irrep:
    n: int
    hbar: Fraction
    mats: dict  # generator name -> DomainMatrix, for a, b, c and x, y, z
    forced_alpha: Scalar = field(default=None)

    @property
    def alpha_value(self):
        return -self.hbar ** 2 * (self.n * self.n - 1) / 4

    def casimir(self):
        x, y, z = (self.mats[g] for g in "xyz")
        return x * x + y * y + z * z


@lru_cache(maxsize=None)
def irrep(n, hbar=1):
    """n-dimensional irreducible: b = h E, c = h F, a = h H / 2 with b upper triangular.

    Basis v_j = F^j v_0, so H v_j = (n-1-2j) v_j, F v_j = v_{j+1}, E v_j = j(n-j) v_{j-1}.
    """
    if n < 1:
        raise ValueError("n must be positive")
    hbar = Fraction(hbar)
    E = [[0] * n for _ in range(n)]
    F = [[0] * n for _ in range(n)]
    Hm = [[0] * n for _ in range(n)]
    for j in range(n):
        Hm[j][j] = n - 1 - 2 * j
        if j + 1 < n:
            F[j + 1][j] = 1
        if j >= 1:
            E[j - 1][j] = j * (n - j)
    a = dm([[hbar * v / 2 for v in row] for row in Hm])
    b = dm([[hbar * v for v in row] for row in E])
    c = dm([[hbar * v for v in row] for row in F])
    i = QQ_I(0, 1)
    half = QQ_I(QQ(1, 2), 0)
    # x = -i a, y = i (b + c) / 2, z = (b - c) / 2
    x = a * (-i)
    y = (b + c) * (i * half)
    z = (b - c) * half
    forced = -(H * H) * Scalar.from_fraction(Fraction(n * n - 1, 4))
    return Irrep(n, hbar, {"a": a, "b": b, "c": c, "x": x, "y": y, "z": z}, forced)


def _check_point(ctx, rep, sp):
    if Fraction(sp.hbar) != rep.hbar:
        raise SpecializationMismatch(f"hbar {sp.hbar} differs from the irrep's {rep.hbar}")
    if sp.alpha != rep.alpha_value:
        raise SpecializationMismatch(f"alpha {sp.alpha} is not forced value {rep.alpha_value} for n={rep.n}")
    if specialize(ctx.hbar, sp) != _q(sp.hbar):
        raise SpecializationMismatch("context hbar does not match the point")
    if ctx.alpha is not None and specialize(ctx.alpha, sp) != _q(sp.alpha):
        raise SpecializationMismatch("context alpha does not match the point")


class Evaluator:
    """pi_U on one context at one point, with cached generator powers and coefficients."""

    def __init__(self, ctx, rep, sp, gl_shift=Fraction(0)):
        _check_point(ctx, rep, sp)
        self.ctx, self.rep, self.sp = ctx, rep, sp
        n = rep.n
        if ctx.name == "gl2h":
            shift = eye(n) * _q(gl_shift)
            gens = {"a": rep.mats["a"] + shift, "b": rep.mats["b"], "c": rep.mats["c"],
                    "d": -rep.mats["a"] + shift}
        else:
            gens = rep.mats
        self.gens = [gens[g] for g in ctx.gens]
        self._powers = [[eye(n)] for _ in ctx.gens]
        self._monos = {}

    def _power(self, i, e):
        cache = self._powers[i]
        while len(cache) <= e:
            cache.append(cache[-1] * self.gens[i])
        return cache[e]

    def monomial(self, m):
        hit = self._monos.get(m)
        if hit is None:
            hit = eye(self.rep.n)
            for i, e in enumerate(m):
                if e:
                    hit = hit * self._power(i, e)
            self._monos[m] = hit
        return hit

    def element(self, f):
        if f.ctx is not self.ctx:
            raise SpecializationMismatch("element from another context")
        n = self.rep.n
        acc = zeros(n, n)
        for m, c in f.terms.items():
            acc = acc + self.monomial(m) * specialize(c, self.sp)
        return acc

    def matrix(self, M):
        return from_blocks([[self.element(M.entries[i, j]) for j in range(M.cols)] for i in range(M.rows)])


def evaluate_hom(f, rep, sp, gl_shift=Fraction(0)):
    """pi_U(f) for an NCElement, or the block matrix pi_U(M) for an NCMatrix."""
    ev = Evaluator(f.ctx, rep, sp, gl_shift)
    if hasattr(f, "entries"):
        return ev.matrix(f)
    return ev.element(f)


# block-matrix oracle: L and L_(k) assembled directly from generator matrices ------------


def block_basic(rep, presentation="sl2h"):
    """pi(L) = [[a, b], [c, -a]] (compact generators give the same matrices)."""
    m = rep.mats
    if presentation == "su2h":
        i = QQ_I(0, 1)
        a = m["x"] * i
        b = m["z"] - m["y"] * i
        c = -(m["y"] * i) - m["z"]
    else:
        a, b, c = m["a"], m["b"], m["c"]
    return from_blocks([[a, b], [c, -a]])


def block_extension(rep, k):
    """k (W^+ S (x) I) (L (x) id) (W (x) I), all numeric; S W = W drops one symmetrizer."""
    return _block_extension(rep.n, rep.hbar, k)


@lru_cache(maxsize=None)
def _block_extension(n, hbar, k):
    rep = irrep(n, hbar)
    L = block_basic(rep)
    if k == 1:
        return L
    Lt = _kron_middle(L, 2, n, 2 ** (k - 1))
    basis = SymBasis.build(k)
    WpS = basis.coordinates_map().dot(symmetrizer_array(k))
    W = kron(dm(basis.vectors.tolist()), eye(n))
    left = kron(dm(WpS.tolist()), eye(n))
    return left * (Lt * W) * _q(k)


def _kron_middle(L, m, n, r):
    """Block matrix with blocks L[i,j] on (i*r+I, j*r+I) for an m x m block matrix L of n x n blocks."""
    rows = L.to_list()
    zero = QQ_I(0, 0)
    size = m * r * n
    out = [[zero] * size for _ in range(size)]
    for i in range(m):
        for j in range(m):
            for I in range(r):
                for u in range(n):
                    src = rows[i * n + u][j * n:(j + 1) * n]
                    dst = out[(i * r + I) * n + u]
                    dst[(j * r + I) * n:(j * r + I + 1) * n] = src
    return DomainMatrix(out, (size, size), QQ_I)


def block_compact_l2(rep):
    """P pi(L_(2)) P^{-1} with P the fixed transition matrix, on blocks."""
    i = QQ_I(0, 1)
    half = QQ_I(QQ(1, 2), 0)
    P = dm([[0, 1, 0], [half, 0, -half], [-i * half, 0, -i * half]])
    Pinv = dm([[0, 1, i], [1, 0, 0], [0, -1, i]])
    n = rep.n
    return kron(P, eye(n)) * block_extension(rep, 2) * kron(Pinv, eye(n))


def eval_poly_numeric(M, coeffs):
    """Horner evaluation of a polynomial with QQ_I coefficients at a numeric matrix."""
    size = M.shape[0]
    R = eye(size) * coeffs[-1]
    for c in reversed(coeffs[:-1]):
        R = R * M + eye(size) * c
    return R


def specialized_roots(k, sp):
    return [((k1, k2), specialize(r, sp)) for (k1, k2), r in predicted_spectrum(k).roots]


def block_idempotent(rep, k, label, sp):
    """Lagrange idempotent of pi(L_(k)) with numeric roots at ``sp``."""
    label = QlbLabel(*label)
    n = rep.n
    if k == 0:
        return eye(n)
    M = block_extension(rep, k)
    roots = specialized_roots(k, sp)
    lt = next(r for lab, r in roots if lab == (label.k1, label.k2))
    size = M.shape[0]
    e = eye(size)
    for lab, r in roots:
        if lab == (label.k1, label.k2):
            continue
        if r == lt:
            raise DegenerateAtSpecialization(f"roots for {lab} and {tuple(label)} coincide at n={n}")
        e = e * (eye(size) * r - M) * (1 / (r - lt))
    return e


# index pairing -------------------------------------------------------------------


@dataclass
class PairingResult:
    k1: int
    k2: int
    n: int
    pairing: int | Fraction | None
    oracle: int | Fraction | None
    closed_form: int
    regime: str
    status: str

    def to_json(self):
        def num(v):
            if v is None:
                return None
            v = Fraction(v)
            return v.numerator if v.denominator == 1 else str(v)

        return {"k1": self.k1, "k2": self.k2, "n": self.n, "pairing": num(self.pairing),
                "oracle": num(self.oracle), "closed_form": self.closed_form,
                "regime": self.regime, "status": self.status}


def _as_number(z):
    f = to_fraction(z)
    return f.numerator if f.denominator == 1 else f


def index_pairing(label, n, hbar=1, branch=1):
    """<E^{k1,k2}, U> = tr pi_U(tr e_{k1 k2}), by the symbolic trace and by block idempotents."""
    label = label if isinstance(label, QlbLabel) else QlbLabel(*label)
    k = label.k
    sp = Specialization.for_irrep(n, hbar, branch)
    rep = irrep(n, hbar)
    closed = n + branch * (label.k1 - label.k2)
    regime = "closed-form" if n > k else "outside-regime"
    try:
        e_block = block_idempotent(rep, k, label, sp)
    except DegenerateAtSpecialization:
        return PairingResult(label.k1, label.k2, n, None, None, closed, "degenerate", "degenerate")
    oracle = _as_number(trace(e_block))
    # route through the algebra: pi_U applied to the scalar element mat_trace(e)
    ctx = make_algebra("sl2h", alpha=ALPHA)
    try:
        t = qlb_trace(lagrange_idempotent(k, label))
        value = _as_number(trace(evaluate_hom(ctx.scalar(t), rep, sp)))
    except DenominatorVanishes:
        value = None
    if regime == "closed-form":
        ok = value == oracle == closed
    else:
        ok = value is None or value == oracle
    return PairingResult(label.k1, label.k2, n, value, oracle, closed, regime, "ok" if ok else "mismatch")


def pairing_table(max_k=4, max_n=7, min_n=1, hbar=1, branch=1):
    """All labels with k1 + k2 <= max_k against n = min_n..max_n."""
    out = []
    for k in range(max_k + 1):
        for j in range(k + 1):
            for n in range(min_n, max_n + 1):
                out.append(index_pairing((k - j, j), n, hbar, branch))
    return out


# oracle coherence --------------------------------------------------------------


def _specialized(coeffs, sp):
    return [specialize(c, sp) for c in coeffs]


def oracle_coherence(n, hbar=1, max_k=4, gl_shift=Fraction(1, 3)):
    """Re-verify the symbolic identities in the n-dimensional irrep at alpha = -h^2 (n^2-1)/4."""
    from .cayley_hamilton import generic_ch_residual, poly_from_roots
    from .line_bundles import e11_closed_form, e11_trivialization_witness, labels_for
    from .spin import basic_matrix, conjugate_to_compact, extension_matrix

    started = time.perf_counter()
    sp = Specialization.for_irrep(n, hbar)
    rep = irrep(n, hbar)
    checks = {}
    sl = make_algebra("sl2h", alpha=ALPHA)
    su = make_algebra("su2h", alpha=ALPHA)

    # generic CH over U(gl(2)_h): the residual evaluates to zero, and so does the
    # identity rebuilt from numeric blocks
    res = generic_ch_residual()
    checks["generic_ch"] = evaluate_hom(res, rep, sp, gl_shift).is_zero_matrix
    shift = eye(n) * _q(gl_shift)
    m = rep.mats
    Lg = from_blocks([[m["a"] + shift, m["b"]], [m["c"], -m["a"] + shift]])
    tr = 2 * shift
    h = _q(hbar)
    delta = (m["a"] + shift) * (-m["a"] + shift) - (m["b"] * m["c"] + m["c"] * m["b"]) * QQ_I(QQ(1, 2), 0)
    const = delta + tr * (h * QQ_I(QQ(1, 2), 0))
    lhs = Lg * Lg - from_blocks([[tr + eye(n) * h, zeros(n, n)], [zeros(n, n), tr + eye(n) * h]]) * Lg
    lhs = lhs + from_blocks([[const, zeros(n, n)], [zeros(n, n), const]])
    checks["generic_ch_blocks"] = lhs.is_zero_matrix

    # quotient CH for L, L_(2) and the compact L-bar_(2)
    for k, sym, blk in (
        (1, basic_matrix(sl), block_basic(rep)),
        (1, basic_matrix(su), block_basic(rep, "su2h")),
        (2, extension_matrix(sl, 2).matrix, block_extension(rep, 2)),
        (2, conjugate_to_compact(alpha=ALPHA), block_compact_l2(rep)),
    ):
        name = f"ch_k{k}_{sym.ctx.name}"
        coeffs = _specialized(numeric_ch_coefficients(k), sp)
        ev = evaluate_hom(sym, rep, sp)
        checks[name + "_hom_matches_blocks"] = same(ev, blk)
        checks[name] = eval_poly_numeric(blk, coeffs).is_zero_matrix

    # minimal polynomial with predicted roots annihilates the block L_(k)
    for k in range(1, max_k + 1):
        blk = block_extension(rep, k)
        checks[f"extension_k{k}_hom_matches_blocks"] = same(evaluate_hom(extension_matrix(sl, k).matrix, rep, sp), blk)
        coeffs = _specialized(poly_from_roots(predicted_spectrum(k).values()), sp)
        checks[f"minpoly_k{k}"] = eval_poly_numeric(blk, coeffs).is_zero_matrix

    # idempotent suite
    for k in range(0, max_k + 1):
        size = (k + 1) * n
        total = zeros(size, size)
        es = []
        for lab in labels_for(k):
            sym = lagrange_idempotent(k, lab)
            try:
                ev = evaluate_hom(sym.numerator, rep, sp) * (1 / specialize(sym.denominator, sp))
            except (DenominatorVanishes, ZeroDivisionError):
                checks[f"idempotent_{lab.k1}{lab.k2}_n{n}"] = "degenerate"
                es = None
                break
            es.append(ev)
            key = f"idempotent_{lab.k1}{lab.k2}"
            checks[key] = same(ev * ev, ev)
            checks[key + "_trace"] = trace(ev) == n * specialize(qlb_trace(sym), sp)
            total = total + ev
        if es is None:
            continue
        checks[f"complete_k{k}"] = same(total, eye(size))
        checks[f"orthogonal_k{k}"] = all(
            (a * b).is_zero_matrix for i, a in enumerate(es) for j, b in enumerate(es) if i != j
        )

    # e11 witness in the compact presentation
    w = e11_trivialization_witness()
    A, B = evaluate_hom(w.A, rep, sp), evaluate_hom(w.B, rep, sp)
    e11 = evaluate_hom(e11_closed_form("su2h"), rep, sp)
    e00 = eye(n)
    checks["witness_AB"] = same(A * B, e00)
    checks["witness_BA"] = same(B * A, e11)
    checks["witness_A"] = same(e00 * A, A) and same(A * e11, A)
    checks["witness_B"] = same(e11 * B, B) and same(B * e00, B)
    checks["e11_idempotent"] = same(e11 * e11, e11)

    failed = [k for k, v in checks.items() if v is False]
    return Report("oracle", "verified" if not failed else "failed", None,
                  elapsed_ms=(time.perf_counter() - started) * 1e3,
                  details={"n": n, "checks": checks, "failed": failed})
