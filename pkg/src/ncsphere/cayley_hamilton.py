"""Cayley-Hamilton identities for L and L_(k), minimal polynomials and the predicted spectrum."""
from __future__ import annotations

import time
from fractions import Fraction
from dataclasses import dataclass, field

from .algebra import casimir_and_center, make_algebra
from .linalg import nullspace
from .ncmatrix import NCMatrix, eval_matrix_poly
from .scalars import ALPHA, H, LAMBDA1, LAMBDA2, ONE, ZERO, Scalar, Specialization, specialize
from .spin import ExtensionMatrix, basic_matrix, conjugate_to_compact, extension_matrix

DEFAULT_K_CAP = 5


class DegreeCapExceeded(RuntimeError):
    pass


@dataclass
class Report:
    task: str
    status: str
    k: int | None = None
    lhs_residual: NCMatrix | None = None
    minpoly: list | None = None
    predicted: list | None = None
    elapsed_ms: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.status == "verified"

    def to_json(self):
        return {
            "task": self.task,
            "k": self.k,
            "status": self.status,
            "lhs_residual": None if self.lhs_residual is None else self.lhs_residual.to_json(),
            "minpoly": None if self.minpoly is None else [c.to_json() for c in self.minpoly],
            "predicted": None if self.predicted is None else [r.to_json() for r in self.predicted],
            "elapsed_ms": round(self.elapsed_ms, 3),
            **self.details,
        }


def _residual_report(task, k, residual, started, **details):
    status = "verified" if residual.is_zero() else "failed"
    if status == "failed":
        idx, v = residual.nonzero_entries()[0]
        details["witness"] = {"entry": list(map(int, idx)), "value": str(v)}
    return Report(task, status, k, residual, elapsed_ms=(time.perf_counter() - started) * 1e3, details=details)


def generic_ch_residual(hbar=None, wrong_constant=False):
    """L^2 - (tr+h) L + (Delta + h tr/2) id over U(gl(2)_h), with Delta the central quadratic."""
    ctx = make_algebra("gl2h", hbar=hbar)
    L = basic_matrix(ctx)
    delta, tr, _ = casimir_and_center(ctx)
    h = ctx.scalar(ctx.hbar)
    const = delta if wrong_constant else delta + (h * tr).scale(Scalar.from_fraction(Fraction(1, 2)))
    ident = NCMatrix.identity(ctx, 2)
    lin = L.map(lambda v: (tr + h) * v)
    return (L @ L) - lin + ident.map(lambda v: const * v)


def verify_generic_ch(hbar=None, wrong_constant=False):
    started = time.perf_counter()
    residual = generic_ch_residual(hbar=hbar, wrong_constant=wrong_constant)
    return _residual_report("generic-ch", 1, residual, started)


def numeric_ch_coefficients(k):
    """Ascending coefficients of the quotient CH polynomial: k=1 quadratic, k=2 cubic."""
    if k == 1:
        return [ALPHA, -H, ONE]
    if k == 2:
        return [-8 * H * ALPHA, 4 * (ALPHA + H * H), -4 * H, ONE]
    raise ValueError("numeric CH identities are stated for k in {1, 2}")


def _specialize_coeffs(coeffs, ctx):
    """Map the symbolic coefficients into the (possibly numeric) parameters of ``ctx``."""
    if ctx.hbar == H and ctx.alpha == ALPHA:
        return coeffs
    return [substitute_parameters(c, ctx.hbar, ctx.alpha) for c in coeffs]


def substitute_parameters(c, hbar, alpha):
    """Substitute h -> hbar and alpha -> alpha into an s-free Scalar."""
    if not c.q.is_zero():
        raise ValueError("expected an s-free scalar")

    def poly(g):
        out = ZERO
        for (eh, ea), (re, im) in g.terms():
            out = out + Scalar.gaussian(re, im) * hbar ** eh * alpha ** ea
        return out

    return poly(c.p) if c.d.is_one() else poly(c.p) / poly(c.d)


def verify_numeric_ch(k, presentation="sl2h", alpha=None, hbar=None):
    """L^2 - hL + alpha = 0 (k=1) or the cubic for L_(2) (k=2) in the quotient algebra."""
    started = time.perf_counter()
    alpha = ALPHA if alpha is None else alpha
    ctx = make_algebra(presentation, alpha=alpha, hbar=hbar)
    if k == 1:
        M = basic_matrix(ctx)
    elif presentation == "su2h":
        M = conjugate_to_compact(alpha=alpha, hbar=hbar)
    else:
        M = extension_matrix(ctx, k).matrix
    coeffs = _specialize_coeffs(numeric_ch_coefficients(k), ctx)
    residual = eval_matrix_poly(M, coeffs)
    return _residual_report("numeric-ch", k, residual, started, presentation=presentation)


# minimal polynomial discovery ----------------------------------------------


@dataclass
class MinPoly:
    coefficients: list  # ascending, monic
    roots: list | None = None  # [(label, Scalar)]

    @property
    def degree(self):
        return len(self.coefficients) - 1

    def __call__(self, M):
        return eval_matrix_poly(M, self.coefficients)


def _flatten(M, keys):
    vec = {}
    for (i, j), v in M.nonzero_entries():
        for m, c in v.terms.items():
            key = (i, j, m)
            keys.setdefault(key, len(keys))
            vec[key] = c
    return vec


def minimal_polynomial(M, cap=None):
    """Lowest-degree monic polynomial over K annihilating ``M`` (exact linear dependence search)."""
    if isinstance(M, ExtensionMatrix):
        k, M = M.k, M.matrix
    else:
        k = M.rows - 1
    cap = k + 2 if cap is None else cap
    keys = {}
    powers = [NCMatrix.identity(M.ctx, M.rows)]
    vecs = [_flatten(powers[0], keys)]
    for d in range(1, cap + 1):
        powers.append(powers[-1] @ M)
        vecs.append(_flatten(powers[-1], keys))
        rows = [[vec.get(key, ZERO) for vec in vecs] for key in keys]
        null = nullspace(rows)
        if null:
            v = null[0]
            lead = v[-1]
            if lead.is_zero():
                raise ArithmeticError("dependence among lower powers; earlier search missed it")
            return MinPoly([c / lead for c in v])
    raise DegreeCapExceeded(f"no annihilating polynomial of degree <= {cap}")


# predicted spectrum ----------------------------------------------------------


@dataclass
class SpectrumPrediction:
    k: int
    roots: list  # [((k1, k2), Scalar)]

    def values(self):
        return [r for _, r in self.roots]


def predicted_root(k1, k2):
    return k1 * LAMBDA1 + k1 * k2 * (LAMBDA1 + LAMBDA2) + k2 * LAMBDA2


def predicted_spectrum(k):
    if k < 0:
        raise ValueError("k must be nonnegative")
    return SpectrumPrediction(k, [((k - j, j), predicted_root(k - j, j)) for j in range(k + 1)])


def poly_from_roots(roots):
    """Ascending coefficients of prod (lambda - r)."""
    coeffs = [ONE]
    for r in roots:
        shifted = [ZERO] + coeffs
        for i, c in enumerate(coeffs):
            shifted[i] = shifted[i] - r * c
        coeffs = shifted
    return coeffs


def _distinct_at(diffs, hbar, alpha):
    """Whether no difference p + q s vanishes at the rational point (h, alpha)."""
    sq = _gaussian_sqrt(hbar * hbar - 4 * alpha)
    if sq is None:
        # s is irrational there, so p + q s = 0 forces p = q = 0
        return not any(
            d.p.evaluate(hbar, alpha) == (0, 0) and d.q.evaluate(hbar, alpha) == (0, 0) for d in diffs
        )
    sp = Specialization(hbar, alpha, sq)
    return all(specialize(d, sp) != 0 for d in diffs)


def _gaussian_sqrt(x):
    """Square root of a rational in Q(i), if it exists (as a (re, im) pair)."""
    from math import isqrt

    x = Fraction(x)
    a = abs(x)
    n, d = a.numerator, a.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn != n or rd * rd != d:
        return None
    r = Fraction(rn, rd)
    return (r, 0) if x >= 0 else (0, r)


def spectrum_check(k, at=None, minpoly=None):
    """Compare prod (lambda - lambda_{k1 k2}) with the discovered minimal polynomial of L_(k).

    ``at`` is an optional rational point (hbar, alpha) at which distinctness of
    the predicted roots is also reported.
    """
    started = time.perf_counter()
    pred = predicted_spectrum(k)
    roots = pred.values()
    diffs = [roots[i] - roots[j] for i in range(len(roots)) for j in range(i + 1, len(roots))]
    distinct = all(not d.is_zero() for d in diffs)
    if minpoly is None:
        ctx = make_algebra("sl2h", alpha=ALPHA)
        try:
            minpoly = minimal_polynomial(extension_matrix(ctx, k))
        except DegreeCapExceeded as exc:
            return Report("spectrum", "failed", k, predicted=roots, details={"error": str(exc)},
                          elapsed_ms=(time.perf_counter() - started) * 1e3)
    expected = poly_from_roots(roots)
    match = len(expected) == len(minpoly.coefficients) and all(
        a == b for a, b in zip(expected, minpoly.coefficients)
    )
    details = {"roots_distinct": distinct, "degree": minpoly.degree}
    if not match:
        details["mismatch"] = {
            "discovered": [str(c) for c in minpoly.coefficients],
            "predicted": [str(c) for c in expected],
        }
    if at is not None:
        hbar, alpha = Fraction(at[0]), Fraction(at[1])
        degenerate = hbar * hbar == 4 * alpha
        details["degenerate_spectrum"] = degenerate
        details["distinct_at_point"] = False if degenerate else _distinct_at(diffs, hbar, alpha)
    status = "verified" if match and distinct else "mismatch"
    return Report("spectrum", status, k, minpoly=minpoly.coefficients, predicted=roots,
                  elapsed_ms=(time.perf_counter() - started) * 1e3, details=details)


def vieta_check_k1(minpoly):
    """Root sum h and root product alpha for the quadratic of L."""
    c0, c1, _ = minpoly.coefficients
    return (-c1 == LAMBDA1 + LAMBDA2 == H) and (c0 == LAMBDA1 * LAMBDA2 == ALPHA)


__all__ = [
    "DEFAULT_K_CAP",
    "DegreeCapExceeded",
    "MinPoly",
    "Report",
    "SpectrumPrediction",
    "generic_ch_residual",
    "minimal_polynomial",
    "numeric_ch_coefficients",
    "poly_from_roots",
    "predicted_root",
    "predicted_spectrum",
    "spectrum_check",
    "verify_generic_ch",
    "verify_numeric_ch",
    "vieta_check_k1",
]
