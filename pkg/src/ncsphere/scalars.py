"""Exact coefficient field K = Frac(Z[i][h, alpha])(s) with s**2 = h**2 - 4*alpha.

Polynomials (:class:`GPoly`) keep real and imaginary parts in two dicts keyed by
a packed exponent ``(eh << 32) | ea`` so that exponent addition is one integer
addition.  A :class:`Scalar` is ``(p + q*s) / d``.  Fractions are reduced by
integer content, common monomials and exact division by the denominator only;
equality is decided by cross-multiplication.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from sympy import QQ_I

_SHIFT = 32
_MASK = (1 << _SHIFT) - 1


class DivisionByZero(ZeroDivisionError):
    pass


class DenominatorVanishes(ZeroDivisionError):
    def __init__(self, poly):
        super().__init__(f"denominator {poly} vanishes at the specialization point")
        self.poly = poly


def _key(eh, ea):
    return (eh << _SHIFT) | ea


def _unkey(k):
    return k >> _SHIFT, k & _MASK


def _clean(d):
    return {k: v for k, v in d.items() if v}


def _dadd(a, b, sign=1):
    if not b:
        return a
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + sign * v
    return _clean(out)


def _dmul(a, b):
    if not a or not b:
        return {}
    if len(b) == 1:
        (kb, vb), = b.items()
        return {ka + kb: va * vb for ka, va in a.items()}
    if len(a) == 1:
        (ka, va), = a.items()
        return {ka + kb: va * vb for kb, vb in b.items()}
    out = {}
    get = out.get
    for ka, va in a.items():
        for kb, vb in b.items():
            k = ka + kb
            out[k] = get(k, 0) + va * vb
    return _clean(out)


class GPoly:
    """Polynomial in h, alpha with Gaussian-integer coefficients."""

    __slots__ = ("re", "im", "_hash")

    def __init__(self, re=None, im=None):
        self.re = re or {}
        self.im = im or {}
        self._hash = None

    @classmethod
    def const(cls, re=0, im=0):
        return cls({0: re} if re else {}, {0: im} if im else {})

    @classmethod
    def monomial(cls, eh=0, ea=0, re=1, im=0):
        k = _key(eh, ea)
        return cls({k: re} if re else {}, {k: im} if im else {})

    @classmethod
    def from_terms(cls, terms):
        """``terms`` maps ``(eh, ea)`` to ``(re, im)``."""
        re, im = {}, {}
        for (eh, ea), (r, i) in terms.items():
            k = _key(eh, ea)
            if r:
                re[k] = re.get(k, 0) + r
            if i:
                im[k] = im.get(k, 0) + i
        return cls(_clean(re), _clean(im))

    def terms(self):
        """Sorted list of ``((eh, ea), (re, im))``, highest monomial first."""
        keys = sorted(set(self.re) | set(self.im), reverse=True)
        return [(_unkey(k), (self.re.get(k, 0), self.im.get(k, 0))) for k in keys]

    def is_zero(self):
        return not self.re and not self.im

    def is_one(self):
        return not self.im and self.re == {0: 1}

    def is_const(self):
        return all(k == 0 for k in self.re) and all(k == 0 for k in self.im)

    def is_real(self):
        return not self.im

    def __eq__(self, other):
        return isinstance(other, GPoly) and self.re == other.re and self.im == other.im

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self.re.items()), frozenset(self.im.items())))
        return self._hash

    def __add__(self, other):
        return GPoly(_dadd(self.re, other.re), _dadd(self.im, other.im))

    def __sub__(self, other):
        return GPoly(_dadd(self.re, other.re, -1), _dadd(self.im, other.im, -1))

    def __neg__(self):
        return GPoly({k: -v for k, v in self.re.items()}, {k: -v for k, v in self.im.items()})

    def __mul__(self, other):
        if not self.im and not other.im:
            return GPoly(_dmul(self.re, other.re))
        re = _dadd(_dmul(self.re, other.re), _dmul(self.im, other.im), -1)
        im = _dadd(_dmul(self.re, other.im), _dmul(self.im, other.re))
        return GPoly(re, im)

    def scale(self, c, ci=0):
        """Multiply by the Gaussian integer ``c + ci*i``."""
        if ci == 0:
            return GPoly({k: c * v for k, v in self.re.items()}, {k: c * v for k, v in self.im.items()})
        return self * GPoly.const(c, ci)

    def conj_i(self):
        return GPoly(dict(self.re), {k: -v for k, v in self.im.items()})

    def content(self):
        g = 0
        for v in self.re.values():
            g = gcd(g, v)
        for v in self.im.values():
            g = gcd(g, v)
        return g

    def div_int(self, g):
        return GPoly({k: v // g for k, v in self.re.items()}, {k: v // g for k, v in self.im.items()})

    def min_monomial(self):
        """Componentwise minimum exponent over all terms (or None if zero)."""
        mh = ma = None
        for k in list(self.re) + list(self.im):
            eh, ea = _unkey(k)
            mh = eh if mh is None else min(mh, eh)
            ma = ea if ma is None else min(ma, ea)
        return None if mh is None else (mh, ma)

    def shift_down(self, eh, ea):
        k0 = _key(eh, ea)
        return GPoly({k - k0: v for k, v in self.re.items()}, {k - k0: v for k, v in self.im.items()})

    def leading(self):
        k = max(max(self.re, default=-1), max(self.im, default=-1))
        return k, self.re.get(k, 0), self.im.get(k, 0)

    def exact_div(self, d):
        """Return ``self / d`` if ``d`` divides ``self`` exactly in Z[i][h, alpha], else None."""
        if d.is_zero():
            raise DivisionByZero("polynomial division by zero")
        if self.is_zero():
            return GPoly()
        kd, dr, di = d.leading()
        dh, da = _unkey(kd)
        nrm = dr * dr + di * di
        rem = self
        qre, qim = {}, {}
        while not rem.is_zero():
            kr, rr, ri = rem.leading()
            rh, ra = _unkey(kr)
            if rh < dh or ra < da:
                return None
            # (rr + ri i) / (dr + di i)
            nr = rr * dr + ri * di
            ni = ri * dr - rr * di
            if nr % nrm or ni % nrm:
                return None
            cr, ci = nr // nrm, ni // nrm
            k = kr - kd
            if cr:
                qre[k] = cr
            if ci:
                qim[k] = ci
            rem = rem - GPoly({k: cr} if cr else {}, {k: ci} if ci else {}) * d
        return GPoly(qre, qim)

    def degree(self):
        """(max eh, max ea) over all terms."""
        mh = ma = 0
        for k in list(self.re) + list(self.im):
            eh, ea = _unkey(k)
            mh, ma = max(mh, eh), max(ma, ea)
        return mh, ma

    def evaluate(self, h, a):
        """Value at rational ``h``, ``a`` as a pair of Fractions (re, im)."""
        h, a = Fraction(h), Fraction(a)
        cache = {}

        def mono(k):
            if k not in cache:
                eh, ea = _unkey(k)
                cache[k] = h ** eh * a ** ea
            return cache[k]

        re = sum((v * mono(k) for k, v in self.re.items()), Fraction(0))
        im = sum((v * mono(k) for k, v in self.im.items()), Fraction(0))
        return re, im

    def subs_h(self, h):
        """Substitute a rational for h, keeping alpha.  Returns ``(poly, den)``, value = poly/den."""
        h = Fraction(h)
        out_re, out_im = {}, {}
        terms = []
        for part, src in ((0, self.re), (1, self.im)):
            for k, v in src.items():
                eh, ea = _unkey(k)
                terms.append((part, ea, v * h ** eh))
        den = 1
        for _, _, c in terms:
            den = den * c.denominator // gcd(den, c.denominator)
        for part, ea, c in terms:
            tgt = out_re if part == 0 else out_im
            k = _key(0, ea)
            tgt[k] = tgt.get(k, 0) + int(c * den)
        return GPoly(_clean(out_re), _clean(out_im)), den

    def __repr__(self):
        return f"GPoly({self})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for (eh, ea), (r, i) in self.terms():
            if i == 0:
                c = str(r)
            elif r == 0:
                c = f"{i}*I"
            else:
                c = f"({r}+{i}*I)" if i > 0 else f"({r}{i}*I)"
            mono = []
            if eh:
                mono.append("h" if eh == 1 else f"h^{eh}")
            if ea:
                mono.append("al" if ea == 1 else f"al^{ea}")
            if not mono:
                parts.append(c)
            elif c == "1":
                parts.append("*".join(mono))
            elif c == "-1":
                parts.append("-" + "*".join(mono))
            else:
                parts.append(c + "*" + "*".join(mono))
        return " + ".join(parts)

    def to_json(self):
        return [
            {"re": str(r), "im": str(i), "eh": eh, "ea": ea}
            for (eh, ea), (r, i) in self.terms()
        ]

    @classmethod
    def from_json(cls, data):
        return cls.from_terms({(t["eh"], t["ea"]): (int(t["re"]), int(t["im"])) for t in data})


_ZERO_P = GPoly()
_ONE_P = GPoly.const(1)
DISC = GPoly.from_terms({(2, 0): (1, 0), (0, 1): (-4, 0)})  # h^2 - 4 alpha


def _unit_for(re, im):
    """Unit u in {1,-1,i,-i} such that u*(re + im i) has positive real part or is positive real."""
    if re > 0:
        return 1, 0
    if re < 0:
        return -1, 0
    return (0, -1) if im > 0 else (0, 1)


def _times_unit(p, u):
    ur, ui = u
    if ui == 0:
        return p if ur == 1 else -p
    return p.scale(ur, ui)


class Scalar:
    """Element ``(p + q*s) / d`` of K.  Immutable."""

    __slots__ = ("p", "q", "d")

    def __init__(self, p, q=None, d=None, _normalized=False):
        self.p = p
        self.q = q if q is not None else _ZERO_P
        self.d = d if d is not None else _ONE_P
        if not _normalized:
            self._normalize()

    # construction -------------------------------------------------------
    @classmethod
    def from_int(cls, n):
        return cls(GPoly.const(n), _ZERO_P, _ONE_P, _normalized=True)

    @classmethod
    def from_fraction(cls, x):
        x = Fraction(x)
        return cls(GPoly.const(x.numerator), _ZERO_P, GPoly.const(x.denominator))

    @classmethod
    def gaussian(cls, re, im=0):
        re, im = Fraction(re), Fraction(im)
        den = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        return cls(GPoly.const(int(re * den), int(im * den)), _ZERO_P, GPoly.const(den))

    @classmethod
    def coerce(cls, x):
        if isinstance(x, Scalar):
            return x
        if isinstance(x, int):
            return cls.from_int(x)
        if isinstance(x, Fraction):
            return cls.from_fraction(x)
        if isinstance(x, GPoly):
            return cls(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Scalar")

    def _normalize(self):
        p, q, d = self.p, self.q, self.d
        if d.is_zero():
            raise DivisionByZero("zero denominator")
        if p.is_zero() and q.is_zero():
            self.p, self.q, self.d = _ZERO_P, _ZERO_P, _ONE_P
            return
        if not d.is_const():
            mm = [m for m in (p.min_monomial(), q.min_monomial(), d.min_monomial()) if m]
            mh, ma = min(m[0] for m in mm), min(m[1] for m in mm)
            if mh or ma:
                p, q, d = p.shift_down(mh, ma), q.shift_down(mh, ma), d.shift_down(mh, ma)
            if not d.is_const():
                pp = p.exact_div(d)
                if pp is not None:
                    qq = q.exact_div(d)
                    if qq is not None:
                        p, q, d = pp, qq, _ONE_P
        if not d.is_one():
            g = gcd(gcd(p.content(), q.content()), d.content())
            if g > 1:
                p, q, d = p.div_int(g), q.div_int(g), d.div_int(g)
            _, lr, li = d.leading()
            u = _unit_for(lr, li)
            if u != (1, 0):
                p, q, d = _times_unit(p, u), _times_unit(q, u), _times_unit(d, u)
            if d.im and d.is_const():
                # clear a Gaussian constant denominator
                c = d.conj_i()
                p, q, d = p * c, q * c, d * c
                g = gcd(gcd(p.content(), q.content()), d.content())
                if g > 1:
                    p, q, d = p.div_int(g), q.div_int(g), d.div_int(g)
        self.p, self.q, self.d = p, q, d

    # predicates ---------------------------------------------------------
    def is_zero(self):
        return self.p.is_zero() and self.q.is_zero()

    def is_one(self):
        return self.q.is_zero() and self.d.is_one() and self.p.is_one()

    def is_polynomial(self):
        return self.d.is_one() and self.q.is_zero()

    def has_s(self):
        return not self.q.is_zero()

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Scalar):
            other = Scalar.coerce(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.d == other.d:
            return Scalar(self.p + other.p, self.q + other.q, self.d)
        return Scalar(
            self.p * other.d + other.p * self.d,
            self.q * other.d + other.q * self.d,
            self.d * other.d,
        )

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.p, -self.q, self.d, _normalized=True)

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            other = Scalar.coerce(other)
        return self + (-other)

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            other = Scalar.coerce(other)
        if self.is_zero() or other.is_zero():
            return ZERO
        if self.q.is_zero() and other.q.is_zero():
            if self.d.is_one() and other.d.is_one():
                return Scalar(self.p * other.p, _ZERO_P, _ONE_P, _normalized=True)
            return Scalar(self.p * other.p, _ZERO_P, self.d * other.d)
        p = self.p * other.p + self.q * other.q * DISC
        q = self.p * other.q + self.q * other.p
        return Scalar(p, q, self.d * other.d)

    __rmul__ = __mul__

    def conjugate_s(self):
        """Field automorphism s -> -s."""
        return Scalar(self.p, -self.q, self.d, _normalized=True)

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero scalar")
        # 1/(p + q s) = (p - q s) / (p^2 - q^2 D)
        norm = self.p * self.p - self.q * self.q * DISC
        return Scalar(self.d * self.p, -(self.d * self.q), norm)

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            other = Scalar.coerce(other)
        if other.is_zero():
            raise DivisionByZero("division by zero scalar")
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Scalar.coerce(other) / self

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except TypeError:
                return NotImplemented
        if self.d == other.d:
            return self.p == other.p and self.q == other.q
        return (self.p * other.d == other.p * self.d) and (self.q * other.d == other.q * self.d)

    def __hash__(self):
        raise TypeError("Scalar is not hashable; equality is by cross-multiplication")

    # specialization -----------------------------------------------------
    def specialize(self, sp):
        return specialize(self, sp)

    def reduced(self):
        """Cancel the polynomial gcd of p, q and d (slow path, via sympy over Z[i])."""
        if self.d.is_const():
            return self
        g = _to_sympy(self.d)
        for part in (self.p, self.q):
            if not part.is_zero():
                g = g.gcd(_to_sympy(part))
        if g.total_degree() == 0:
            return self
        p, q, d = (_from_sympy(_to_sympy(x).exquo(g)) if not x.is_zero() else x for x in (self.p, self.q, self.d))
        return Scalar(p, q, d)

    def subs_hbar(self, h):
        """Replace h by a rational value, alpha kept symbolic.  Only for s-free scalars."""
        if not self.q.is_zero():
            raise ValueError("subs_hbar needs an s-free scalar")
        p, dp = self.p.subs_h(h)
        d, dd = self.d.subs_h(h)
        if d.is_zero():
            raise DenominatorVanishes(self.d)
        return Scalar(p.scale(dd), _ZERO_P, d.scale(dp))

    # text / json --------------------------------------------------------
    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        if self.q.is_zero() and self.d.is_one():
            return str(self.p)
        if self.q.is_zero():
            return f"({self.p})/({self.d})"
        num = f"({self.p}) + ({self.q})*s" if not self.p.is_zero() else f"({self.q})*s"
        return num if self.d.is_one() else f"({num})/({self.d})"

    def to_json(self):
        return {"p": self.p.to_json(), "q": self.q.to_json(), "d": self.d.to_json()}

    @classmethod
    def from_json(cls, data):
        return cls(GPoly.from_json(data["p"]), GPoly.from_json(data["q"]), GPoly.from_json(data["d"]))


ZERO = Scalar(_ZERO_P, _ZERO_P, _ONE_P, _normalized=True)
ONE = Scalar(_ONE_P, _ZERO_P, _ONE_P, _normalized=True)
H = Scalar(GPoly.monomial(1, 0), _ZERO_P, _ONE_P, _normalized=True)
ALPHA = Scalar(GPoly.monomial(0, 1), _ZERO_P, _ONE_P, _normalized=True)
S = Scalar(_ZERO_P, _ONE_P, _ONE_P, _normalized=True)
I = Scalar(GPoly.const(0, 1), _ZERO_P, _ONE_P, _normalized=True)
LAMBDA1 = (H - S) / 2
LAMBDA2 = (H + S) / 2


# ---------------------------------------------------------------------------
# specialization


@dataclass(frozen=True)
class Specialization:
    """A rational point (h, alpha) with a chosen square root s of h^2 - 4*alpha."""

    hbar: Fraction
    alpha: Fraction
    s: object  # GaussianRational (QQ_I element)

    def __post_init__(self):
        object.__setattr__(self, "hbar", Fraction(self.hbar))
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        s = _to_qqi(self.s)
        object.__setattr__(self, "s", s)
        disc = self.hbar ** 2 - 4 * self.alpha
        if disc == 0:
            raise ValueError("h^2 - 4*alpha vanishes at this point")
        if s * s != _to_qqi(disc):
            raise ValueError(f"s={s} is not a square root of h^2-4*alpha={disc}")

    @classmethod
    def for_irrep(cls, n, hbar=1, branch=1):
        """Point forced by the n-dimensional irrep: alpha = -h^2 (n^2-1)/4, s = +-n h."""
        hbar = Fraction(hbar)
        return cls(hbar, -hbar ** 2 * (n * n - 1) / 4, branch * n * hbar)


def _to_qqi(x):
    if isinstance(x, tuple):
        re, im = x
        return QQ_I(_qq(re), _qq(im))
    try:
        if x.parent() is QQ_I:  # already a Gaussian rational
            return x
    except AttributeError:
        pass
    return QQ_I(_qq(x), 0)


def _qq(x):
    from sympy import QQ

    x = Fraction(x)
    return QQ(x.numerator, x.denominator)


def _sympy_gens():
    from sympy import symbols

    return symbols("h al")


def _to_sympy(p):
    from sympy import Poly, ZZ_I

    rep = {}
    for (eh, ea), (re, im) in p.terms():
        rep[(eh, ea)] = ZZ_I(re, im)
    return Poly.from_dict(rep, *_sympy_gens(), domain=ZZ_I)


def _from_sympy(poly):
    terms = {}
    for (eh, ea), c in poly.as_dict().items():
        terms[(eh, ea)] = _gauss_pair(c)
    return GPoly.from_terms(terms)


def _gauss_pair(c):
    from sympy import im, re

    return int(re(c)), int(im(c))


def specialize(a, sp):
    """Ring homomorphism K -> Q(i) at ``sp`` (s maps to ``sp.s``).

    A denominator vanishing at the point is retried after cancelling the
    polynomial gcd; only a genuine pole raises DenominatorVanishes.
    """
    a = Scalar.coerce(a)
    dr, di = a.d.evaluate(sp.hbar, sp.alpha)
    if dr == 0 and di == 0:
        a = a.reduced()
        dr, di = a.d.evaluate(sp.hbar, sp.alpha)
    if dr == 0 and di == 0:
        raise DenominatorVanishes(a.d)
    pr, pi = a.p.evaluate(sp.hbar, sp.alpha)
    qr, qi = a.q.evaluate(sp.hbar, sp.alpha)
    num = _to_qqi((pr, pi)) + _to_qqi((qr, qi)) * sp.s
    return num / _to_qqi((dr, di))


def to_fraction(z):
    """Gaussian rational with zero imaginary part -> Fraction; raises otherwise."""
    z = _to_qqi(z)
    if z.y != 0:
        raise ValueError(f"{z} is not real")
    return Fraction(int(z.x.numerator), int(z.x.denominator))
