"""Parameter contexts for the two coefficient domains.

Deformed side: Laurent fractions in q, d (half-integer grids), the opaque
sector symbols P1, P2 (tensor side), v (single Fock module), and xi (generic
spectral parameter).  Derived parameters q1 = d/q, q2 = q**2, q3 = 1/(q d),
so q1*q2*q3 = 1; beta is never a scalar here -- it lives in exponent records
with the single collapse rule q1**beta = 1/q3.

Degeneration side: fractions in s (= sqrt(beta)), x (xi = exp(x*hbar)) and
the square roots of the mixing weights k1, k2, with coefficients in
Q(i, sqrt2).
"""

from __future__ import annotations

from fractions import Fraction

from .lincomb import LC, lc_num
from .numberfield import QR_I, QR_IR2, QR_R2
from .scalars import DomainError, Scalar, SymbolTable

# deformed LC keys: (beta_power, usym); usym 0 = none, 1 = u1, 2 = u2, 3 = u
KUNIT = (0, 0)
KBETA = (1, 0)
KU1 = (0, 1)
KU2 = (0, 2)
KU = (0, 3)


def key_mul_deformed(k1, k2):
    b1, u1 = k1
    b2, u2 = k2
    if u1 and u2:
        raise DomainError("product of two sector symbols in an exponent")
    return (b1 + b2, u1 or u2)


def key_mul_degen(k1, k2):
    return k1 + k2


class DeformedParams:
    """Symbols and derived parameters of the deformed side."""

    def __init__(self):
        self.tab = SymbolTable(("q", "d", "P1", "P2", "v", "xi"),
                               dens=(2, 2, 2, 2, 2, 2))
        t = self.tab
        self.q = t.sym("q")
        self.d = t.sym("d")
        self.q1 = t.monomial({"q": -1, "d": 1})
        self.q2 = t.monomial({"q": 2})
        self.q3 = t.monomial({"q": -1, "d": -1})
        self.v = t.sym("v")
        self.P1 = t.sym("P1")
        self.P2 = t.sym("P2")
        self.xi = t.sym("xi")
        self.unit_key = KUNIT
        self.key_mul = key_mul_deformed

    def lc(self, r):
        return lc_num(r, KUNIT)

    def lc_beta(self, r):
        return LC({KBETA: Fraction(r)})

    def lc_to_scalar(self, expo):
        out = self.tab.zero
        for key, coeff in expo.items():
            if key != KUNIT:
                raise DomainError(
                    f"eigenvalue {expo!r} is not a pure number on the deformed side")
            out = out + self.tab.num(coeff)
        return out

    def mono_exponents(self, mono):
        """True (Fraction) exponents of a monomial scalar, per symbol name."""
        if not mono.is_monomial():
            raise DomainError("monomial expected")
        ((m, c),) = mono.num.items()
        exps = self.tab.unpack(m)
        return c, {n: Fraction(e, den) for n, e, den
                   in zip(self.tab.names, exps, self.tab.dens) if e}

    def mono_pow(self, mono, r):
        """mono**r for Fraction r; the monomial coefficient must be 1 or r integral."""
        r = Fraction(r)
        c, exps = self.mono_exponents(mono)
        if r.denominator == 1:
            return mono ** int(r)
        if c != 1:
            raise DomainError(f"fractional power of monomial with coefficient {c}")
        return self.tab.monomial({n: e * r for n, e in exps.items()})

    def _as_q1_power(self, mono):
        c, exps = self.mono_exponents(mono)
        if c != 1:
            return None
        e_q = exps.get("q", Fraction(0))
        e_d = exps.get("d", Fraction(0))
        if e_q != -e_d or set(exps) - {"q", "d"}:
            return None
        return e_d

    def scalarize(self, base, expo):
        """base**expo for a monomial base and an LC exponent.

        Rational parts exponentiate directly; beta parts require base = q1**e
        and collapse through q1**beta = q3**(-1) = q*d; sector parts map
        q1**(e*c*u_i) to P_i**(e*c) (or v for the single-module symbol u).
        Anything else (1/beta parts, beta**2, ...) is a DomainError.
        """
        out = self.tab.one
        for (bpow, usym), coeff in expo.items():
            if bpow == 0 and usym == 0:
                out = out * self.mono_pow(base, coeff)
                continue
            e = self._as_q1_power(base)
            if e is None:
                raise DomainError(
                    f"cannot scalarize base {base!r} to the power of a "
                    f"beta/sector-valued exponent {expo!r}")
            if usym == 0 and bpow == 1:
                # q1**(e*coeff*beta) = (q*d)**(e*coeff)
                out = out * self.tab.monomial({"q": e * coeff, "d": e * coeff})
            elif usym and bpow == 0:
                name = {1: "P1", 2: "P2", 3: "v"}[usym]
                out = out * self.tab.monomial({name: e * coeff})
            else:
                raise DomainError(
                    f"exponent key (beta**{bpow}, u{usym}) is not scalarizable")
        return out


class DegenParams:
    """Symbols of the degeneration side over Q(i, sqrt2)."""

    def __init__(self):
        self.tab = SymbolTable(("s", "x", "k1", "k2"), dens=(1, 1, 2, 2),
                               coeff="quad")
        t = self.tab
        self.s = t.sym("s")
        self.x = t.sym("x")
        self.k1 = t.sym("k1")
        self.k2 = t.sym("k2")
        self.i = t.num(QR_I)
        self.r2 = t.num(QR_R2)
        self.ir2 = t.num(QR_IR2)      # sqrt(-2), fixed branch
        self.beta = self.s * self.s
        self.sigma = (t.one - self.beta) / (self.s * 2)
        self.t_plus = self.s.inverse()
        self.t_minus = -self.s
        self.unit_key = 0
        self.key_mul = key_mul_degen

    def lc(self, r, spow=0):
        return lc_num(r, 0) if spow == 0 else LC({spow: Fraction(r)})

    def lc_to_scalar(self, expo):
        out = self.tab.zero
        for spow, coeff in expo.items():
            out = out + self.tab.monomial({"s": spow}, Fraction(coeff))
        return out
