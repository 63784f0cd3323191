"""Boundary canonicalization of scalars (full GCD reduction + stable strings).

The engine's factored fractions are exact but not unique representations;
reports, OPE output and the `normalize` operation need the canonical
GCD-reduced form with the fixed sign convention (lexicographically greatest
denominator monomial has positive coefficient; monic over the quadratic
field).  sympy does the multivariate gcd here -- this path is never inside
the verification loop.
"""

from __future__ import annotations

import sympy

from .numberfield import QuadRat
from .scalars import DomainError, Scalar, render_poly

_I = sympy.I
_R2 = sympy.sqrt(2)


def _gens(tab):
    return sympy.symbols([f"{n}__g" for n in tab.names])


def _coeff_to_sympy(c):
    if isinstance(c, QuadRat):
        return (sympy.Rational(c.a.numerator, c.a.denominator)
                + sympy.Rational(c.b.numerator, c.b.denominator) * _I
                + sympy.Rational(c.c.numerator, c.c.denominator) * _R2
                + sympy.Rational(c.d.numerator, c.d.denominator) * _I * _R2)
    return sympy.Rational(c.numerator, c.denominator)


def _sympy_to_coeff(tab, e):
    if tab.coeff != "quad":
        if not e.is_Rational:
            raise DomainError(f"non-rational coefficient {e}")
        from fractions import Fraction
        return tab.cnum(Fraction(int(e.p), int(e.q)))

    def frac(x):
        from fractions import Fraction
        return Fraction(x.p, x.q)

    poly = sympy.Poly(sympy.expand(e), _I, _R2)
    a = b = c = d = 0
    for (ei, er), coeff in poly.terms():
        if ei > 1 or er > 1:
            raise DomainError(f"unreduced algebraic coefficient {e}")
        val = frac(sympy.Rational(coeff))
        if ei == 0 and er == 0:
            a = val
        elif ei == 1 and er == 0:
            b = val
        elif ei == 0 and er == 1:
            c = val
        else:
            d = val
    return QuadRat(a, b, c, d)


def poly_to_sympy(tab, poly, gens):
    terms = []
    for m, c in poly.items():
        mono = sympy.Integer(1)
        for g, e in zip(gens, tab.unpack(m)):
            if e:
                mono *= g ** e
        terms.append(_coeff_to_sympy(c) * mono)
    return sympy.Add(*terms) if terms else sympy.Integer(0)


def _sympy_poly_to_dict(tab, expr, gens):
    poly = sympy.Poly(expr, *gens, domain="EX") if tab.coeff == "quad" \
        else sympy.Poly(expr, *gens, domain="QQ")
    dom = poly.domain
    out = {}
    for exps, coeff in poly.terms():
        c = _sympy_to_coeff(tab, dom.to_sympy(coeff))
        if c:
            out[tab.pack(exps)] = c
    return out


def normalize(scalar):
    """Canonical GCD-reduced form of a Scalar (content-free, fixed lead sign)."""
    tab = scalar.tab
    if not scalar.num:
        return tab.zero
    gens = _gens(tab)
    num_e = poly_to_sympy(tab, scalar.num, gens)
    den_e = poly_to_sympy(tab, tab.bag_product(scalar.bag), gens)
    if tab.coeff == "quad":
        expr = sympy.cancel(num_e / den_e, extension=[_I, _R2])
    else:
        expr = sympy.cancel(num_e / den_e)
    n_e, d_e = sympy.fraction(sympy.together(expr))
    num = _sympy_poly_to_dict(tab, n_e, gens)
    den = _sympy_poly_to_dict(tab, d_e, gens)
    return _rebuild(tab, num, den)


def _rebuild(tab, num, den):
    """Assemble num/den dicts into a canonical Scalar."""
    if not den:
        raise DomainError("zero denominator")
    if len(den) == 1:
        ((m, c),) = den.items()
        inv_c = c.inverse() if tab.coeff == "quad" else 1 / c
        inv_m = 2 * tab.bias_total - m
        num = {k + inv_m - tab.bias_total: v * inv_c for k, v in num.items()}
        return Scalar(tab, num, ())
    # sign/content convention on the denominator
    lead = max(den)
    lc = den[lead]
    if tab.coeff == "quad":
        unit = lc.inverse()
    else:
        import math
        from gmpy2 import mpq
        g = 0
        for c in den.values():
            g = math.gcd(g, int(c.numerator))
        l = 1
        for c in den.values():
            dd = int(c.denominator)
            l = l * dd // math.gcd(l, dd)
        unit = mpq(l, g if g else 1)
        if lc * unit < 0:
            unit = -unit
    den = {m: c * unit for m, c in den.items()}
    num = {m: c * unit for m, c in num.items()}
    shift, lcf, fac = tab._canonical_factor(den)
    fid = tab.register_factor(fac)
    lcf_inv = lcf.inverse() if tab.coeff == "quad" else 1 / lcf
    mono = {2 * tab.bias_total - shift: lcf_inv}
    from .scalars import _pmul
    return Scalar(tab, _pmul(tab, num, mono), ((fid, 1),))


def canonical_str(scalar):
    """Deterministic text rendering of the canonical form."""
    s = normalize(scalar)
    n = render_poly(s.tab, s.num)
    if not s.bag:
        return n
    d = render_poly(s.tab, s.tab.bag_product(s.bag))
    return f"({n})/({d})"
