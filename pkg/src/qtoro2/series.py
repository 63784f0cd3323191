"""Truncated one-variable power series over exact scalars.

Also holds the exponential-sum term type used both for structure functions
(f, g expansions) and for vertex-operator mode coefficient functions: a term
denotes n |-> coeff * rho**n / (1 + sign*tau**n), with sign 0 meaning no
denominator.
"""

from __future__ import annotations

from dataclasses import dataclass

from .scalars import DomainError, Scalar


class TruncSeries:
    """Polynomial truncation of a power series: coefficients c[0..L]."""

    __slots__ = ("var", "L", "c")

    def __init__(self, var, coeffs):
        self.var = var
        self.c = list(coeffs)
        self.L = len(self.c) - 1

    @staticmethod
    def constant(tab, value, L, var="z"):
        c = [tab.zero] * (L + 1)
        c[0] = value if isinstance(value, Scalar) else tab.num(value)
        return TruncSeries(var, c)

    def _check(self, other):
        if self.var != other.var or self.L != other.L:
            raise DomainError("series variable/order mismatch")

    def __add__(self, other):
        self._check(other)
        return TruncSeries(self.var, [a + b for a, b in zip(self.c, other.c)])

    def __sub__(self, other):
        self._check(other)
        return TruncSeries(self.var, [a - b for a, b in zip(self.c, other.c)])

    def __neg__(self):
        return TruncSeries(self.var, [-a for a in self.c])

    def __bool__(self):
        return any(bool(x) for x in self.c)

    def __mul__(self, other):
        if isinstance(other, (Scalar, int)):
            return TruncSeries(self.var, [a * other for a in self.c])
        self._check(other)
        L = self.L
        out = []
        for n in range(L + 1):
            acc = None
            for k in range(n + 1):
                t = self.c[k] * other.c[n - k]
                acc = t if acc is None else acc + t
            out.append(acc)
        return TruncSeries(self.var, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (self.var == other.var and self.L == other.L
                and all(a == b for a, b in zip(self.c, other.c)))

    __hash__ = None

    def is_zero(self):
        return all(x.is_zero() for x in self.c)

    def inverse(self):
        if self.c[0].is_zero():
            raise DomainError("series inversion requires nonzero constant term")
        inv0 = self.c[0].inverse()
        out = [inv0]
        for n in range(1, self.L + 1):
            acc = self.c[1] * out[n - 1]
            for k in range(2, n + 1):
                acc = acc + self.c[k] * out[n - k]
            out.append(-(inv0 * acc))
        return TruncSeries(self.var, out)

    def exp(self):
        if not self.c[0].is_zero():
            raise DomainError("series exp requires zero constant term")
        tab = self.c[0].tab
        out = [tab.one]
        for n in range(1, self.L + 1):
            acc = None
            for k in range(1, n + 1):
                t = (self.c[k] * out[n - k]) * k
                acc = t if acc is None else acc + t
            out.append(acc / n if acc is not None else tab.zero)
        return TruncSeries(self.var, out)

    def log(self):
        if not self.c[0].is_one():
            raise DomainError("series log requires constant term 1")
        tab = self.c[0].tab
        out = [tab.zero]
        for n in range(1, self.L + 1):
            acc = self.c[n] * n
            for k in range(1, n):
                acc = acc - (out[k] * k) * self.c[n - k]
            out.append(acc / n)
        return TruncSeries(self.var, out)

    def truncate(self, L):
        if L > self.L:
            raise DomainError("cannot extend a truncated series")
        return TruncSeries(self.var, self.c[: L + 1])

    def reduce(self):
        return TruncSeries(self.var, [a.reduce() for a in self.c])

    def __repr__(self):
        terms = []
        for n, a in enumerate(self.c):
            if not a.is_zero():
                terms.append(f"({a!r})*{self.var}**{n}" if n else repr(a))
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O({self.var}**{self.L + 1})"


# ---------------------------------------------------------------------------
# exponential-sum terms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExpTerm:
    """n |-> coeff * rho**n / (1 + sign*tau**n); sign 0 drops the denominator."""

    coeff: Scalar
    rho: Scalar
    sign: int = 0
    tau: Scalar | None = None

    def value(self, n):
        v = self.coeff * (self.rho ** n)
        if self.sign:
            den = self.tau.tab.one + (self.tau ** n) * self.sign
            if den.is_zero():
                raise DomainError(f"structure-function denominator vanishes at n={n}")
            v = v * den.inverse()
        return v

    def scaled(self, mono):
        return ExpTerm(self.coeff, self.rho * mono, self.sign, self.tau)

    def negated(self):
        return ExpTerm(-self.coeff, self.rho, self.sign, self.tau)


class ModeFn:
    """A finite sum of ExpTerms, optionally divided by n; cached pointwise."""

    __slots__ = ("terms", "over_n", "_cache")

    def __init__(self, terms, over_n=False):
        self.terms = tuple(terms)
        self.over_n = over_n
        self._cache = {}

    def value(self, n):
        v = self._cache.get(n)
        if v is None:
            acc = None
            for t in self.terms:
                tv = t.value(n)
                acc = tv if acc is None else acc + tv
            if acc is None:
                raise DomainError("empty mode function")
            if self.over_n:
                acc = acc / n
            v = acc.reduce()
            self._cache[n] = v
        return v

    def scaled(self, mono):
        return ModeFn([t.scaled(mono) for t in self.terms], self.over_n)

    def negated(self):
        return ModeFn([t.negated() for t in self.terms], self.over_n)

    def plus(self, other):
        if self.over_n != other.over_n:
            raise DomainError("cannot add mode functions with mixed 1/n conventions")
        return ModeFn(self.terms + other.terms, self.over_n)

    def is_empty(self):
        return not self.terms


def expand_structure_function(tab, terms, L, var="x"):
    """Coefficients of exp(sum_{n>0} f(n) * var**n / n) up to order L.

    `terms` is a list of ExpTerms giving f(n); the leading coefficient is 1.
    """
    fn = ModeFn(terms, over_n=False)
    c = [tab.zero]
    for n in range(1, L + 1):
        c.append(fn.value(n) / n)
    return TruncSeries(var, c).exp()
