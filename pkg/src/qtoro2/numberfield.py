"""The quadratic-extension coefficient field Q(i, sqrt(2)).

Elements are vectors over the basis (1, i, r, i*r) with i^2 = -1 and r^2 = 2.
This is the coefficient ring of every scalar on the degeneration side; the
fixed branches sqrt(-1) = i, sqrt(2) = r, sqrt(-2) = i*r live here.
"""

from __future__ import annotations

from gmpy2 import mpq


class QuadRat:
    """An element a + b*i + c*r + d*i*r of Q(i, sqrt(2))."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=0, b=0, c=0, d=0):
        self.a = mpq(a)
        self.b = mpq(b)
        self.c = mpq(c)
        self.d = mpq(d)

    def __bool__(self):
        return bool(self.a or self.b or self.c or self.d)

    def __eq__(self, other):
        if isinstance(other, QuadRat):
            return (self.a == other.a and self.b == other.b
                    and self.c == other.c and self.d == other.d)
        if isinstance(other, (int, mpq)):
            return self.a == other and not (self.b or self.c or self.d)
        return NotImplemented

    def __hash__(self):
        if not (self.b or self.c or self.d):
            return hash(self.a)
        return hash((self.a, self.b, self.c, self.d))

    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return QuadRat(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadRat(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return QuadRat(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = o.a, o.b, o.c, o.d
        # (a + bi + cr + dir)(a' + b'i + c'r + d'ir), r^2 = 2, i^2 = -1
        return QuadRat(
            a1 * a2 - b1 * b2 + 2 * (c1 * c2 - d1 * d2),
            a1 * b2 + b1 * a2 + 2 * (c1 * d2 + d1 * c2),
            a1 * c2 + c1 * a2 - (b1 * d2 + d1 * b2),
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        )

    __rmul__ = __mul__

    def conj_i(self):
        return QuadRat(self.a, -self.b, self.c, -self.d)

    def conj_r(self):
        return QuadRat(self.a, self.b, -self.c, -self.d)

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero in Q(i, sqrt2)")
        # product of the three nontrivial Galois conjugates / rational norm
        ci = self.conj_i()
        cr = self.conj_r()
        cir = ci.conj_r()
        num = ci * cr * cir
        norm = self * num
        assert not (norm.b or norm.c or norm.d)
        inv = 1 / norm.a
        return QuadRat(num.a * inv, num.b * inv, num.c * inv, num.d * inv)

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = QR_ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def __repr__(self):
        parts = []
        for coeff, tag in ((self.a, ""), (self.b, "i"), (self.c, "r2"), (self.d, "i*r2")):
            if coeff:
                parts.append(f"{coeff}{'*' if tag and coeff != 1 else ''}{tag}"
                             if not (coeff == 1 and tag) else tag)
        return " + ".join(parts) if parts else "0"


def _coerce(x):
    if isinstance(x, QuadRat):
        return x
    if isinstance(x, (int, mpq)):
        return QuadRat(x)
    return None


QR_ZERO = QuadRat(0)
QR_ONE = QuadRat(1)
QR_I = QuadRat(0, 1)
QR_R2 = QuadRat(0, 0, 1)       # sqrt(2)
QR_IR2 = QuadRat(0, 0, 0, 1)   # sqrt(-2), the fixed branch
