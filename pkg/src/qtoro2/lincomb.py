"""Frozen rational linear combinations over opaque hashable basis keys.

These carry everything that must stay exact but is not a Laurent fraction:
z-exponents (rationals plus beta-valued and sector-symbol parts), zero-mode
eigenvalues, and bracket values.  Key composition rules are supplied by each
engine side (deformed keys are (beta_power, u_symbol); degeneration keys are
integer powers of s = sqrt(beta)).
"""

from __future__ import annotations

from fractions import Fraction


class LC:
    """Immutable linear combination {key: Fraction}, zero coefficients dropped."""

    __slots__ = ("d", "_hash")

    def __init__(self, d=None):
        dd = {}
        if d:
            for k, v in d.items():
                v = Fraction(v)
                if v:
                    dd[k] = v
        self.d = dd
        self._hash = None

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(frozenset(self.d.items()))
            self._hash = h
        return h

    def __eq__(self, other):
        if not isinstance(other, LC):
            return NotImplemented
        return self.d == other.d

    def __add__(self, other):
        if not isinstance(other, LC):
            return NotImplemented
        d = dict(self.d)
        for k, v in other.d.items():
            nv = d.get(k, _ZERO) + v
            if nv:
                d[k] = nv
            else:
                d.pop(k, None)
        out = LC.__new__(LC)
        out.d = d
        out._hash = None
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, r):
        r = Fraction(r)
        if not r:
            return LC_ZERO
        out = LC.__new__(LC)
        out.d = {k: v * r for k, v in self.d.items()}
        out._hash = None
        return out

    def __neg__(self):
        return self.scale(-1)

    def is_zero(self):
        return not self.d

    def coeff(self, key):
        return self.d.get(key, _ZERO)

    def items(self):
        return self.d.items()

    def mul(self, other, key_mul):
        """Bilinear product with a key-composition rule."""
        acc = {}
        for k1, v1 in self.d.items():
            for k2, v2 in other.d.items():
                k = key_mul(k1, k2)
                nv = acc.get(k, _ZERO) + v1 * v2
                if nv:
                    acc[k] = nv
                else:
                    acc.pop(k, None)
        return LC(acc)

    def __repr__(self):
        if not self.d:
            return "0"
        return " + ".join(f"{v}*{k}" for k, v in sorted(self.d.items(),
                                                        key=lambda kv: repr(kv[0])))


_ZERO = Fraction(0)
LC_ZERO = LC()


def lc_num(r, unit_key):
    """A pure-number LC on the given unit key."""
    return LC({unit_key: Fraction(r)})


class ZForm:
    """Linear form in zero-mode directions plus a constant: sum c_i * dir_i + const.

    Coefficients and the constant are LCs over the side's key vocabulary.
    """

    __slots__ = ("coeffs", "const")

    def __init__(self, coeffs=(), const=LC_ZERO):
        merged = {}
        for name, c in (coeffs.items() if isinstance(coeffs, dict) else coeffs):
            if name in merged:
                merged[name] = merged[name] + c
            else:
                merged[name] = c
        self.coeffs = tuple(sorted(((n, c) for n, c in merged.items()
                                    if not c.is_zero()), key=lambda t: t[0]))
        self.const = const

    def eval(self, charges, key_mul):
        """Evaluate on a charge assignment {dir_name: LC eigenvalue}."""
        total = self.const
        for name, c in self.coeffs:
            total = total + c.mul(charges[name], key_mul)
        return total

    def scale(self, r):
        return ZForm([(n, c.scale(r)) for n, c in self.coeffs], self.const.scale(r))

    def __add__(self, other):
        return ZForm(self.coeffs + other.coeffs, self.const + other.const)

    def is_zero(self):
        return not self.coeffs and self.const.is_zero()

    def __eq__(self, other):
        if not isinstance(other, ZForm):
            return NotImplemented
        return self.coeffs == other.coeffs and self.const == other.const

    __hash__ = None

    def __repr__(self):
        parts = [f"({c!r})*{n}" for n, c in self.coeffs]
        if not self.const.is_zero() or not parts:
            parts.append(repr(self.const))
        return " + ".join(parts)
