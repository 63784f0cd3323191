"""Exact coefficient arithmetic: sparse Laurent fractions over declared symbols.

A SymbolTable declares invertible generators, each with an exponent
denominator (q with denominator 2 stores q**(1/2) on an integer grid).
Monomials are packed into single big integers (one biased field per symbol),
so monomial multiplication is one integer addition.  A Scalar is a Laurent
polynomial numerator together with a multiset of registered denominator
factors; no gcd is taken during arithmetic, which keeps the engine loop fast,
and `normalize` produces the canonical GCD-reduced form at the boundary.

Zero tests never need gcd: a fraction vanishes iff its numerator does.
"""

from __future__ import annotations

from fractions import Fraction
from gmpy2 import mpq

from .numberfield import QuadRat

_BIAS_BITS = 28
_STRIDE_BITS = 60
_BIAS = 1 << _BIAS_BITS
_STRIDE = 1 << _STRIDE_BITS


class DomainError(ValueError):
    """Raised for operations outside a scalar domain (zero denominator etc.)."""


class SymbolTable:
    """Ordered list of invertible generators with exponent denominators."""

    def __init__(self, names, dens=None, coeff="q"):
        self.names = tuple(names)
        self.dens = tuple(dens) if dens is not None else tuple(2 for _ in self.names)
        if len(set(self.names)) != len(self.names):
            raise DomainError("symbol names must be unique")
        if any(d <= 0 for d in self.dens):
            raise DomainError("exponent denominators must be positive")
        self.coeff = coeff
        self.nv = len(self.names)
        self.index = {n: i for i, n in enumerate(self.names)}
        self.bias_total = sum(_BIAS * (_STRIDE ** i) for i in range(self.nv))
        # registered denominator factors: id -> poly dict; intern by frozen terms
        self._factors = []
        self._factor_ids = {}
        self._bagprods = {}
        self._one = self.cnum(1)
        self.zero = Scalar(self, {}, ())
        self.one = Scalar(self, {self.bias_total: self._one}, ())

    # -- coefficient ring helpers -------------------------------------------------
    def cnum(self, x):
        if self.coeff == "quad":
            if isinstance(x, QuadRat):
                return x
            if isinstance(x, Fraction):
                return QuadRat(mpq(x.numerator, x.denominator))
            return QuadRat(mpq(x))
        if isinstance(x, Fraction):
            return mpq(x.numerator, x.denominator)
        return mpq(x)

    # -- monomial packing ----------------------------------------------------------
    def pack(self, exps):
        """Pack grid exponents (integers, one per symbol) into one int."""
        p = 0
        for i, e in enumerate(exps):
            p += (e + _BIAS) * (_STRIDE ** i)
        return p

    def unpack(self, m):
        out = []
        for _ in range(self.nv):
            m, r = divmod(m, _STRIDE)
            out.append(r - _BIAS)
        return tuple(out)

    def grid_exponents(self, powers):
        """Map {name: Fraction exponent} to grid exponents, checking the grid."""
        exps = [0] * self.nv
        for name, e in powers.items():
            i = self.index[name]
            ge = Fraction(e) * self.dens[i]
            if ge.denominator != 1:
                raise DomainError(
                    f"exponent {e} of {name} off the 1/{self.dens[i]} grid")
            exps[i] = int(ge)
        return exps

    # -- scalar constructors ---------------------------------------------------
    def monomial(self, powers, coeff=1):
        c = self.cnum(coeff)
        if not c:
            return self.zero
        return Scalar(self, {self.pack(self.grid_exponents(powers)): c}, ())

    def sym(self, name, e=1):
        return self.monomial({name: e})

    def num(self, x):
        c = self.cnum(x)
        if not c:
            return self.zero
        return Scalar(self, {self.bias_total: c}, ())

    def poly(self, terms):
        """Build from [(coeff, {name: exponent}), ...]."""
        num = {}
        for coeff, powers in terms:
            c = self.cnum(coeff)
            if not c:
                continue
            m = self.pack(self.grid_exponents(powers))
            v = num.get(m)
            if v is None:
                num[m] = c
            else:
                v = v + c
                if v:
                    num[m] = v
                else:
                    del num[m]
        return Scalar(self, num, ())

    # -- denominator factor registry --------------------------------------------
    def _canonical_factor(self, num):
        """Split a poly into (unit monomial, unit coeff, canonical factor poly).

        The canonical factor is monic in its packed-greatest monomial and has
        per-symbol minimum exponent zero, so equal factors intern identically.
        """
        if not num:
            raise DomainError("zero denominator")
        mins = None
        for m in num:
            exps = self.unpack(m)
            mins = exps if mins is None else tuple(map(min, mins, exps))
        shift = self.pack(mins)
        lead = max(num)
        lc = num[lead]
        if self.coeff == "quad":
            inv = lc.inverse()
        else:
            inv = 1 / lc
        fac = {m - shift + self.bias_total: c * inv for m, c in num.items()}
        return shift, lc, fac

    def register_factor(self, fac_poly):
        key = frozenset(fac_poly.items())
        fid = self._factor_ids.get(key)
        if fid is None:
            fid = len(self._factors)
            self._factors.append(fac_poly)
            self._factor_ids[key] = fid
        return fid

    def factor_poly(self, fid):
        return self._factors[fid]

    def bag_product(self, bag):
        """Materialize prod(factor^mult) for a bag tuple, cached."""
        if not bag:
            return {self.bias_total: self._one}
        prod = self._bagprods.get(bag)
        if prod is None:
            fid, mult = bag[0]
            rest = bag[1:] if mult == 1 else ((fid, mult - 1),) + bag[1:]
            prod = _pmul(self, self.bag_product(rest), self._factors[fid])
            self._bagprods[bag] = prod
        return prod


# ---------------------------------------------------------------------------
# poly-dict helpers
# ---------------------------------------------------------------------------

def _pmul(tab, p1, p2):
    if len(p2) < len(p1):
        p1, p2 = p2, p1
    bias = tab.bias_total
    if len(p1) == 1:
        ((m1, c1),) = p1.items()
        if m1 == bias and c1 == 1:
            return dict(p2)
        return {m2 + m1 - bias: c2 * c1 for m2, c2 in p2.items()}
    out = {}
    get = out.get
    for m1, c1 in p1.items():
        mo = m1 - bias
        for m2, c2 in p2.items():
            m = m2 + mo
            v = get(m)
            if v is None:
                out[m] = c1 * c2
            else:
                v = v + c1 * c2
                if v:
                    out[m] = v
                else:
                    del out[m]
    return out


def _padd(p1, p2):
    out = dict(p1)
    get = out.get
    for m, c in p2.items():
        v = get(m)
        if v is None:
            out[m] = c
        else:
            v = v + c
            if v:
                out[m] = v
            else:
                del out[m]
    return out


def _pneg(p):
    return {m: -c for m, c in p.items()}


def _pscale(p, c):
    if not c:
        return {}
    return {m: v * c for m, v in p.items()}


def _divexact(tab, num, fac):
    """Exact sparse division num/fac, or None if it does not divide."""
    if not num:
        return {}
    lead_f = max(fac)
    cf = fac[lead_f]
    if tab.coeff == "quad":
        cf_inv = cf.inverse()
    else:
        cf_inv = 1 / cf
    bias = tab.bias_total
    rem = dict(num)
    quot = {}
    cap = 4 * len(num) + 16
    while rem:
        if len(quot) > cap:
            return None
        mr = max(rem)
        t_m = mr - lead_f + bias
        t_c = rem[mr] * cf_inv
        quot[t_m] = t_c
        to = t_m - bias
        get = rem.get
        for mf, cff in fac.items():
            m = mf + to
            v = get(m)
            prod = t_c * cff
            if v is None:
                rem[m] = -prod
            else:
                v = v - prod
                if v:
                    rem[m] = v
                else:
                    del rem[m]
    return quot


# ---------------------------------------------------------------------------
# Scalar
# ---------------------------------------------------------------------------

def _bag_merge(b1, b2):
    if not b1:
        return b2
    if not b2:
        return b1
    d = dict(b1)
    for fid, mult in b2:
        d[fid] = d.get(fid, 0) + mult
    return tuple(sorted(d.items()))


class Scalar:
    """Exact Laurent fraction: numerator poly / product of registered factors."""

    __slots__ = ("tab", "num", "bag")

    def __init__(self, tab, num, bag):
        self.tab = tab
        self.num = num
        self.bag = bag

    # -- predicates ------------------------------------------------------------
    def is_zero(self):
        return not self.num

    def is_one(self):
        if self.bag or len(self.num) != 1:
            return self == self.tab.one
        c = self.num.get(self.tab.bias_total)
        return c == 1

    def is_monomial(self):
        return not self.bag and len(self.num) == 1

    def __bool__(self):
        return bool(self.num)

    # -- ring ops ---------------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, int):
            other = self.tab.num(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        if not self.num:
            return other
        if not other.num:
            return self
        if self.bag == other.bag:
            return Scalar(self.tab, _padd(self.num, other.num), self.bag)
        tab = self.tab
        d1, d2 = dict(self.bag), dict(other.bag)
        extra1 = tuple(sorted((f, m - d1.get(f, 0)) for f, m in d2.items()
                              if m > d1.get(f, 0)))
        extra2 = tuple(sorted((f, m - d2.get(f, 0)) for f, m in d1.items()
                              if m > d2.get(f, 0)))
        n1 = _pmul(tab, self.num, tab.bag_product(extra1)) if extra1 else self.num
        n2 = _pmul(tab, other.num, tab.bag_product(extra2)) if extra2 else other.num
        bag = _bag_merge(self.bag, extra1)
        return Scalar(tab, _padd(n1, n2), bag)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.tab, _pneg(self.num), self.bag)

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.tab.num(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = self.tab.cnum(other)
            return Scalar(self.tab, _pscale(self.num, c), self.bag if c else ())
        if not isinstance(other, Scalar):
            return NotImplemented
        if not self.num or not other.num:
            return self.tab.zero
        return Scalar(self.tab, _pmul(self.tab, self.num, other.num),
                      _bag_merge(self.bag, other.bag))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, int):
            if other == 0:
                raise DomainError("division by zero")
            c = self.tab.cnum(Fraction(1, other))
            return Scalar(self.tab, _pscale(self.num, c), self.bag)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self * other.inverse()

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.tab.num(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        if self.bag == other.bag:
            return self.num == other.num
        return (self - other).is_zero()

    # unreduced representations are not canonical, so scalars are not hashable
    __hash__ = None

    # -- inversion and powers ---------------------------------------------------
    def inverse(self):
        tab = self.tab
        if not self.num:
            raise DomainError("zero denominator")
        new_num = tab.bag_product(self.bag)
        if len(self.num) == 1:
            ((m, c),) = self.num.items()
            inv_c = c.inverse() if tab.coeff == "quad" else 1 / c
            inv_m = 2 * tab.bias_total - m
            return Scalar(tab, _pmul(tab, new_num, {inv_m: inv_c}), ())
        shift, lc, fac = tab._canonical_factor(self.num)
        fid = tab.register_factor(fac)
        inv_c = lc.inverse() if tab.coeff == "quad" else 1 / lc
        mono = {2 * tab.bias_total - shift: inv_c}
        return Scalar(tab, _pmul(tab, new_num, mono), ((fid, 1),))

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = self.tab.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- reduction ----------------------------------------------------------------
    def reduce(self):
        """Cancel denominator factors that exactly divide the numerator."""
        if not self.bag or not self.num:
            return Scalar(self.tab, self.num, ())
        tab = self.tab
        num = self.num
        bag = []
        for fid, mult in self.bag:
            fac = tab.factor_poly(fid)
            while mult > 0 and len(num) >= 1:
                q = _divexact(tab, num, fac)
                if q is None:
                    break
                num = q
                mult -= 1
            if mult:
                bag.append((fid, mult))
        return Scalar(tab, num, tuple(bag))

    # -- evaluation (tests / probabilistic oracles) -------------------------------
    def eval_grid(self, point):
        """Evaluate at grid-generator values {name: value of symbol**(1/den)}."""
        tab = self.tab

        def ev(poly):
            tot = tab.cnum(0)
            for m, c in poly.items():
                v = c
                for name, e in zip(tab.names, tab.unpack(m)):
                    if e:
                        v = v * (tab.cnum(point[name]) ** e if e > 0
                                 else tab.cnum(Fraction(1)) / (tab.cnum(point[name]) ** (-e)))
                tot = tot + v
            return tot

        den = ev(tab.bag_product(self.bag))
        if not den:
            raise DomainError("denominator vanishes at evaluation point")
        return ev(self.num) / den

    # -- display -------------------------------------------------------------------
    def __repr__(self):
        n = render_poly(self.tab, self.num)
        if not self.bag:
            return n
        d = render_poly(self.tab, self.tab.bag_product(self.bag))
        return f"({n})/({d})"


def render_poly(tab, poly):
    """Deterministic text form of a poly dict, highest packed monomial first."""
    if not poly:
        return "0"
    parts = []
    for m in sorted(poly, reverse=True):
        c = poly[m]
        factors = []
        for name, e, den in zip(tab.names, tab.unpack(m), tab.dens):
            if e:
                ex = Fraction(e, den)
                if ex == 1:
                    factors.append(name)
                else:
                    factors.append(f"{name}**{ex}" if ex.denominator == 1
                                   else f"{name}**({ex})")
        cs = _render_coeff(c)
        if factors and cs == "1":
            parts.append("*".join(factors))
        elif factors and cs == "-1":
            parts.append("-" + "*".join(factors))
        else:
            parts.append("*".join([cs] + factors))
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def _render_coeff(c):
    if isinstance(c, QuadRat):
        if not (c.b or c.c or c.d):
            return str(c.a)
        return "(" + repr(c) + ")"
    return str(c)
