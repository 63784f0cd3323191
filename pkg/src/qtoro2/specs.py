"""The four concrete Heisenberg algebras used by the engine.

- single:     the two-color algebra acting on one Fock module F_u
- tensor:     its doubling for F_{u1} (x) F_{u2}
- decoupled:  the orthogonal-complement algebra left after removing the
              Cartan modes from the tensor module (the home of the W currents
              and the screening currents)
- undeformed: two commuting standard bosons (degeneration target)
"""

from __future__ import annotations

from fractions import Fraction

from .lincomb import LC, ZForm
from .params import KU, KU1, KU2, KUNIT
from .fock import HeisenbergSpec, ZeroDir


def spec_single(P):
    one = P.tab.one

    def kernel(i, j, n):
        a = abs(n)
        if i == j:
            return one + P.q2 ** (-a)
        return -(P.q1 ** a + P.q3 ** a)

    def kstruct(i, j):
        if i == j:
            return ((one, one, ()), (one, P.q2.inverse(), ()))
        return ((-one, P.q1, ()), (-one, P.q3, ()))

    dirs = (ZeroDir("a0", "chf", P.lc(2)),
            ZeroDir("e0", "zchf", P.lc_beta(1)))
    charge = (ZForm({"a0": P.lc(1)}), ZForm({"a0": P.lc(-1)}))
    return HeisenbergSpec("single", P, 2, kernel, dirs, charge, kstruct)


def sector_single(P, n=0, shifted_u=0):
    return {"a0": P.lc(n), "e0": LC({KU: 1, KUNIT: Fraction(shifted_u)})}


def spec_tensor(P):
    one = P.tab.one

    def kernel(i, j, n):
        if (i < 2) != (j < 2):
            return P.tab.zero
        a = abs(n)
        if i % 2 == j % 2:
            return one + P.q2 ** (-a)
        return -(P.q1 ** a + P.q3 ** a)

    def kstruct(i, j):
        if (i < 2) != (j < 2):
            return ()
        if i % 2 == j % 2:
            return ((one, one, ()), (one, P.q2.inverse(), ()))
        return ((-one, P.q1, ()), (-one, P.q3, ()))

    dirs = (ZeroDir("a0L", "chfL", P.lc(2)),
            ZeroDir("e0L", "zchfL", P.lc_beta(1)),
            ZeroDir("a0R", "chfR", P.lc(2)),
            ZeroDir("e0R", "zchfR", P.lc_beta(1)))
    charge = (ZForm({"a0L": P.lc(1)}), ZForm({"a0L": P.lc(-1)}),
              ZForm({"a0R": P.lc(1)}), ZForm({"a0R": P.lc(-1)}))
    return HeisenbergSpec("tensor", P, 4, kernel, dirs, charge, kstruct)


def sector_tensor(P, n1=0, n2=0):
    return {"a0L": P.lc(n1), "e0L": LC({KU1: 1}),
            "a0R": P.lc(n2), "e0R": LC({KU2: 1})}


def spec_decoupled(P):
    one = P.tab.one

    def kernel(i, j, n):
        if i == j:
            return one
        return -(P.q1 ** n + P.q3 ** n) * (one + P.q2 ** (-n)).inverse()

    def kstruct(i, j):
        if i == j:
            return ((one, one, ()),)
        q2inv = P.q2.inverse()
        return ((-one, P.q1, ((1, q2inv),)), (-one, P.q3, ((1, q2inv),)))

    dirs = (ZeroDir("b0", "cho", P.lc(1)),
            ZeroDir("ze", "zch", P.lc_beta(Fraction(1, 2))))
    charge = (ZForm({"b0": P.lc(1)}), ZForm({"b0": P.lc(-1)}))
    return HeisenbergSpec("decoupled", P, 2, kernel, dirs, charge, kstruct)


def sector_decoupled(P, m=0):
    # ze eigenvalue on the tensor vacuum: (u1 - u2 - 1)/2
    ze = LC({KU1: Fraction(1, 2), KU2: Fraction(-1, 2), KUNIT: Fraction(-1, 2)})
    return {"b0": P.lc(m), "ze": ze}


def spec_undeformed(G):
    one = G.tab.one
    zero = G.tab.zero

    def kernel(i, j, n):
        return one if i == j else zero

    def kstruct(i, j):
        return ((one, one, ()),) if i == j else ()

    dirs = (ZeroDir("a0", "Q", G.lc(1)),
            ZeroDir("ta0", "Qt", G.lc(1)))
    charge = (ZForm({"a0": G.lc(1)}), ZForm({"ta0": G.lc(1)}))
    return HeisenbergSpec("undeformed", G, 2, kernel, dirs, charge, kstruct)


def sector_undeformed(G, m=0, ta0=None):
    return {"a0": G.lc(m), "ta0": ta0 if ta0 is not None else LC()}
