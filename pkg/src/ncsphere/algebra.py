"""Presented enveloping algebras with PBW normal forms.

Three presentations are supported: ``gl2h`` (generators b < a < d < c),
``sl2h`` (b < a < c, with d = -a) and the compact form ``su2h`` (x < y < z).
``sl2h`` and ``su2h`` accept a Casimir value alpha, giving the quotient
A_h = U / (Delta - alpha) whose quotient rule is a^2 -> h*a - b*c - alpha,
resp. z^2 -> alpha - x^2 - y^2.

Elements are dicts from exponent tuples (over the ordered generators) to
:class:`~ncsphere.scalars.Scalar`.  Products of monomials are computed by a
memoized recursive rewrite and are always returned in normal form.
"""
from __future__ import annotations

import json
import random

from .scalars import ONE, ZERO, H, I, Scalar


class UnknownPresentation(ValueError):
    pass


class ContextMismatch(ValueError):
    pass


# [g_i, g_j] = hbar * sum(coeff * g_k); names only, indices resolved per context
_BRACKETS = {
    "gl2h": {
        ("a", "b"): {"b": 1},
        ("a", "c"): {"c": -1},
        ("a", "d"): {},
        ("b", "c"): {"a": 1, "d": -1},
        ("b", "d"): {"b": 1},
        ("c", "d"): {"c": -1},
    },
    "sl2h": {
        ("a", "b"): {"b": 1},
        ("a", "c"): {"c": -1},
        ("b", "c"): {"a": 2},
    },
    "su2h": {
        ("x", "y"): {"z": 1},
        ("y", "z"): {"x": 1},
        ("z", "x"): {"y": 1},
    },
}

_ORDER = {"gl2h": ("b", "a", "d", "c"), "sl2h": ("b", "a", "c"), "su2h": ("x", "y", "z")}

_CONTEXTS = {}


def make_algebra(name, alpha=None, hbar=None):
    """Return the (cached) context for presentation ``name``.

    ``alpha`` turns on the Casimir quotient; ``hbar`` defaults to the symbol h
    and may be any Scalar (``0`` gives the commutative limit).
    """
    if name not in _ORDER:
        raise UnknownPresentation(name)
    if alpha is not None and name == "gl2h":
        raise UnknownPresentation("gl2h is kept without quotient; use sl2h or su2h for A_h")
    hbar = H if hbar is None else Scalar.coerce(hbar)
    alpha = None if alpha is None else Scalar.coerce(alpha)
    key = (name, json.dumps(hbar.to_json()), None if alpha is None else json.dumps(alpha.to_json()))
    ctx = _CONTEXTS.get(key)
    if ctx is None:
        ctx = _CONTEXTS[key] = AlgebraContext(name, hbar, alpha)
    return ctx


class AlgebraContext:
    def __init__(self, name, hbar, alpha):
        self.name = name
        self.gens = _ORDER[name]
        self.index = {g: i for i, g in enumerate(self.gens)}
        self.ngens = len(self.gens)
        self.hbar = hbar
        self.alpha = alpha
        n = self.ngens
        # struct[i][j]: list of (k, Scalar) with [g_i, g_j] = hbar * sum c g_k
        self.struct = [[[] for _ in range(n)] for _ in range(n)]
        for (gi, gj), rhs in _BRACKETS[name].items():
            i, j = self.index[gi], self.index[gj]
            terms = [(self.index[g], Scalar.from_int(c)) for g, c in rhs.items()]
            self.struct[i][j] = terms
            self.struct[j][i] = [(k, -c) for k, c in terms]
        self.zero_mono = (0,) * n
        self._gen_monos = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
        self._mtg_cache = {}
        self._mm_cache = {}
        self._ad_cache = {}
        self.quotient = None
        if alpha is not None:
            if name == "sl2h":
                q = self.index["a"]
                rhs = {self._gen_monos[q]: hbar, self._mono({"b": 1, "c": 1}): -ONE, self.zero_mono: -alpha}
            else:
                q = self.index["z"]
                rhs = {self.zero_mono: alpha, self._mono({"x": 2}): -ONE, self._mono({"y": 2}): -ONE}
            self.quotient = (q, {m: c for m, c in rhs.items() if not c.is_zero()})

    def __repr__(self):
        tail = "" if self.alpha is None else f", alpha={self.alpha}"
        return f"AlgebraContext({self.name}, hbar={self.hbar}{tail})"

    def _mono(self, exps):
        return tuple(exps.get(g, 0) for g in self.gens)

    # element constructors -----------------------------------------------
    def gen(self, name):
        return NCElement(self, {self._gen_monos[self.index[name]]: ONE})

    def scalar(self, c):
        c = Scalar.coerce(c)
        return NCElement(self, {} if c.is_zero() else {self.zero_mono: c})

    def one(self):
        return self.scalar(ONE)

    def zero(self):
        return NCElement(self, {})

    def word(self, letters, coeff=ONE):
        """Normal form of the product of the listed generators (names or indices)."""
        el = self.scalar(coeff)
        for g in letters:
            el = el * self.gen(g if isinstance(g, str) else self.gens[g])
        return el

    def monomial(self, exps):
        exps = tuple(exps)
        if self.quotient is not None and exps[self.quotient[0]] >= 2:
            return NCElement(self, self._reduce(exps))
        return NCElement(self, {exps: ONE})

    # rewriting core -------------------------------------------------------
    def _last_gen(self, m):
        for i in range(self.ngens - 1, -1, -1):
            if m[i]:
                return i
        return -1

    def _reduce(self, m):
        """Apply the quotient rule to an ordered monomial with q-exponent >= 2."""
        q, rhs = self.quotient
        left = tuple(m[i] if i < q else (m[q] - 2 if i == q else 0) for i in range(self.ngens))
        suffix = tuple(m[i] if i > q else 0 for i in range(self.ngens))
        out = {}
        for rm, rc in rhs.items():
            for m2, c2 in self._mono_mul(left, rm).items():
                for m3, c3 in self._mono_mul(m2, suffix).items():
                    _acc(out, m3, rc * c2 * c3)
        return out

    def _mono_times_gen(self, m, g):
        key = (m, g)
        hit = self._mtg_cache.get(key)
        if hit is not None:
            return hit
        h = self._last_gen(m)
        if h <= g:
            new = m[:g] + (m[g] + 1,) + m[g + 1:]
            if self.quotient is not None and g == self.quotient[0] and new[g] >= 2:
                out = self._reduce(new)
            else:
                out = {new: ONE}
        else:
            # m = m' h, and h g = g h - [g, h]
            mp = m[:h] + (m[h] - 1,) + m[h + 1:]
            out = {}
            for m1, c1 in self._mono_times_gen(mp, g).items():
                for m2, c2 in self._mono_times_gen(m1, h).items():
                    _acc(out, m2, c1 * c2)
            for k, c in self.struct[g][h]:
                coef = -(self.hbar * c)
                if coef.is_zero():
                    continue
                for m1, c1 in self._mono_times_gen(mp, k).items():
                    _acc(out, m1, coef * c1)
        self._mtg_cache[key] = out
        return out

    def _mono_mul(self, m1, m2):
        if not any(m2):
            return {m1: ONE}
        if not any(m1):
            if self.quotient is not None and m2[self.quotient[0]] >= 2:
                return self._reduce(m2)
            return {m2: ONE}
        key = (m1, m2)
        hit = self._mm_cache.get(key)
        if hit is not None:
            return hit
        g = next(i for i in range(self.ngens) if m2[i])
        rest = m2[:g] + (m2[g] - 1,) + m2[g + 1:]
        out = {}
        for m, c in self._mono_times_gen(m1, g).items():
            for mm, cc in self._mono_mul(m, rest).items():
                _acc(out, mm, c * cc)
        self._mm_cache[key] = out
        return out

    def _ad_mono(self, g, m):
        """ad_g on a normal monomial, as a derivation built from the structure constants."""
        key = (g, m)
        hit = self._ad_cache.get(key)
        if hit is not None:
            return hit
        h = self._last_gen(m)
        if h < 0:
            out = {}
        else:
            mp = m[:h] + (m[h] - 1,) + m[h + 1:]
            out = {}
            # ad(m' h) = ad(m') h + m' ad(h)
            for m1, c1 in self._ad_mono(g, mp).items():
                for m2, c2 in self._mono_times_gen(m1, h).items():
                    _acc(out, m2, c1 * c2)
            for k, c in self.struct[g][h]:
                for m1, c1 in self._mono_times_gen(mp, k).items():
                    _acc(out, m1, c * c1)
        self._ad_cache[key] = out
        return out


def _acc(out, m, c):
    if c.is_zero():
        return
    old = out.get(m)
    if old is None:
        out[m] = c
    else:
        new = old + c
        if new.is_zero():
            del out[m]
        else:
            out[m] = new


class NCElement:
    """Element of a presented algebra, stored in PBW normal form."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms):
        self.ctx = ctx
        self.terms = terms

    def _check(self, other):
        if other.ctx is not self.ctx:
            raise ContextMismatch(f"{self.ctx!r} vs {other.ctx!r}")

    def _lift(self, other):
        if isinstance(other, NCElement):
            self._check(other)
            return other
        return self.ctx.scalar(other)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            _acc(out, m, c)
        return NCElement(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return NCElement(self.ctx, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c):
        c = Scalar.coerce(c)
        if c.is_zero():
            return NCElement(self.ctx, {})
        if c.is_one():
            return self
        return NCElement(self.ctx, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, NCElement):
            return self.scale(other)
        self._check(other)
        ctx = self.ctx
        z = ctx.zero_mono
        if len(other.terms) == 1 and z in other.terms:
            return self.scale(other.terms[z])
        if len(self.terms) == 1 and z in self.terms:
            return other.scale(self.terms[z])
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                c12 = c1 * c2
                for m, c in ctx._mono_mul(m1, m2).items():
                    _acc(out, m, c12 if c.is_one() else c12 * c)
        return NCElement(ctx, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n):
        out = self.ctx.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, NCElement):
            other = self.ctx.scalar(other)
        if other.ctx is not self.ctx:
            return False
        if self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[m] == other.terms[m] for m in self.terms)

    __hash__ = None

    def commutator(self, other):
        other = self._lift(other)
        return self * other - other * self

    def degree(self):
        return max((sum(m) for m in self.terms), default=-1)

    def constant_term(self):
        return self.terms.get(self.ctx.zero_mono, ZERO)

    def is_scalar(self):
        return all(not any(m) for m in self.terms)

    def map_coeffs(self, f):
        out = {}
        for m, c in self.terms.items():
            v = f(c)
            if not v.is_zero():
                out[m] = v
        return NCElement(self.ctx, out)

    def sorted_terms(self):
        """Terms ordered by graded-lex (higher first)."""
        return sorted(self.terms.items(), key=lambda mc: (sum(mc[0]), mc[0]), reverse=True)

    def __repr__(self):
        return f"NCElement({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(
                g if e == 1 else f"{g}^{e}" for g, e in zip(self.ctx.gens, m) if e
            )
            if not mono:
                parts.append(f"({c})")
            elif c.is_one():
                parts.append(mono)
            else:
                parts.append(f"({c})*{mono}")
        return " + ".join(parts)

    def to_json(self):
        return {
            "ctx": self.ctx.name,
            "terms": [{"exps": list(m), "coeff": c.to_json()} for m, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data, ctx):
        if data["ctx"] != ctx.name:
            raise ContextMismatch(f"{data['ctx']} vs {ctx.name}")
        out = {}
        for t in data["terms"]:
            _acc(out, tuple(t["exps"]), Scalar.from_json(t["coeff"]))
        return NCElement(ctx, out)


def normal_form(e):
    """Elements are kept reduced; this re-reduces every monomial from scratch."""
    ctx = e.ctx
    out = ctx.zero()
    for m, c in e.terms.items():
        letters = [i for i, k in enumerate(m) for _ in range(k)]
        out = out + ctx.word(letters, c)
    return out


def multiply(e1, e2):
    return e1 * e2


def casimir_and_center(ctx):
    """Return ``(Delta, tr, central)`` for a context without quotient."""
    w = ctx.word
    if ctx.name == "gl2h":
        delta = w("ad") - (w("bc") + w("cb")).scale(Scalar.from_fraction("1/2"))
        tr = ctx.gen("a") + ctx.gen("d")
    elif ctx.name == "sl2h":
        delta = -w("aa") - (w("bc") + w("cb")).scale(Scalar.from_fraction("1/2"))
        tr = ctx.zero()
    else:
        delta = w("xx") + w("yy") + w("zz")
        tr = ctx.zero()
    central = all(
        delta.commutator(ctx.gen(g)).is_zero() and tr.commutator(ctx.gen(g)).is_zero()
        for g in ctx.gens
    )
    return delta, tr, central


def ad_action(g, f):
    """ad_g(f) = hbar^{-1} (g f - f g) for a generator name ``g``.

    Computed as a derivation from the structure constants, so it stays defined
    at hbar = 0 where it is the Kirillov-Poisson bracket.
    """
    ctx = f.ctx
    gi = ctx.index[g]
    out = {}
    for m, c in f.terms.items():
        for mm, cc in ctx._ad_mono(gi, m).items():
            _acc(out, mm, c * cc)
    return NCElement(ctx, out)


# change of basis between the compact form and sl(2) -------------------------


def _images(src, dst):
    half = Scalar.from_fraction("1/2")
    g = dst.gen
    if src.name == "su2h" and dst.name == "sl2h":
        # x = -i a, y = i (b + c)/2, z = (b - c)/2
        return {
            "x": g("a").scale(-I),
            "y": (g("b") + g("c")).scale(I * half),
            "z": (g("b") - g("c")).scale(half),
        }
    if src.name == "sl2h" and dst.name == "su2h":
        # a = i x, b = z - i y, c = -i y - z
        return {
            "a": g("x").scale(I),
            "b": g("z") - g("y").scale(I),
            "c": -g("y").scale(I) - g("z"),
        }
    raise ContextMismatch(f"no basis change {src.name} -> {dst.name}")


def change_basis(e, target):
    """Transport ``e`` along the isomorphism between su2h and sl2h presentations."""
    src = e.ctx
    if not (src.hbar == target.hbar):
        raise ContextMismatch("hbar differs")
    if (src.alpha is None) != (target.alpha is None) or (
        src.alpha is not None and not (src.alpha == target.alpha)
    ):
        raise ContextMismatch("quotient parameters differ")
    img = _images(src, target)
    imgs = [img[name] for name in src.gens]
    out = target.zero()
    for m, c in e.terms.items():
        term = target.scalar(c)
        for i, k in enumerate(m):
            for _ in range(k):
                term = term * imgs[i]
        out = out + term
    return out


# explicit-strategy rewriting (confluence oracle) ---------------------------


def rewrite_word(ctx, letters, rng=None, coeff=ONE):
    """Reduce a word by applying single rewrite steps at randomly chosen redexes.

    Independent of the memoized engine: works on linear combinations of words
    and picks the redex with ``rng``.  Returns an NCElement.
    """
    rng = rng or random.Random(0)
    q = ctx.quotient
    pending = {tuple(ctx.index[g] if isinstance(g, str) else g for g in letters): Scalar.coerce(coeff)}
    done = {}
    while pending:
        w = rng.choice(list(pending))
        c = pending.pop(w)
        redexes = [p for p in range(len(w) - 1) if w[p] > w[p + 1] or (q and w[p] == w[p + 1] == q[0])]
        if not redexes:
            m = [0] * ctx.ngens
            for g in w:
                m[g] += 1
            _acc(done, tuple(m), c)
            continue
        p = rng.choice(redexes)
        j, i = w[p], w[p + 1]
        pre, post = w[:p], w[p + 2:]
        if j == i:
            # q q -> rhs
            for m, rc in q[1].items():
                mid = tuple(g for g in range(ctx.ngens) for _ in range(m[g]))
                _acc(pending, pre + mid + post, c * rc)
        else:
            # g_j g_i -> g_i g_j - [g_i, g_j]
            _acc(pending, pre + (i, j) + post, c)
            for k, sc in ctx.struct[i][j]:
                _acc(pending, pre + (k,) + post, -(c * ctx.hbar * sc))
    return NCElement(ctx, done)
