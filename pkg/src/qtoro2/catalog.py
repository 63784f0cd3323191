"""The deformed operator catalog.

Builders return interned VertexOp/OperatorSum singletons so that application
caches are shared across every suite.  Zero-mode data follows the printed
normal form: charge exponential first, then grading factors; the only
normalization rule is z**h e**Q = z**<h,Q> e**Q z**h.

Conventions for coefficient functions (n > 0 throughout):
  cre[c](n) = coefficient of a_{c,-n} z**n   in the exponent,
  ann[c](n) = coefficient of a_{c,+n} z**-n  in the exponent.
"""

from __future__ import annotations

from fractions import Fraction

from .lincomb import LC, ZForm
from .params import DeformedParams
from .scalars import DomainError
from .series import ExpTerm, ModeFn
from .specs import (sector_decoupled, sector_single, sector_tensor,
                    spec_decoupled, spec_single, spec_tensor)
from .vertex import Factor, OperatorSum, VertexOp, normal_ordered_product, \
    shift_arg

HALF = Fraction(1, 2)


class DeformedCatalog:
    """Interned construction of every deformed-side operator."""

    def __init__(self, P=None):
        self.P = P if P is not None else DeformedParams()
        self.single = spec_single(self.P)
        self.tensor = spec_tensor(self.P)
        self.dec = spec_decoupled(self.P)
        self._cache = {}

    # -- helpers -----------------------------------------------------------------
    def _fn(self, terms, over_n=True):
        return ModeFn([ExpTerm(self.P.tab.one * c, rho, sign, tau)
                       for c, rho, sign, tau in terms], over_n)

    def _mono_key(self, mono):
        ((m, c),) = mono.num.items()
        return (m, str(c))

    def memo(self, key, build):
        op = self._cache.get(key)
        if op is None:
            op = build()
            self._cache[key] = op
        return op

    # =====================================================================
    # single-module representation
    # =====================================================================
    def eta(self, i):
        P = self.P
        return self.memo(("eta", i), lambda: VertexOp(
            self.single, f"eta_{i}",
            cre={i - 1: self._fn([(1, P.tab.one, 0, None)])},
            ann={i - 1: self._fn([(-1, P.tab.one, 0, None)])},
            charge={}, zform=ZForm(), sfactors=(), weight=P.tab.one))

    def xi_vo(self, i):
        P = self.P
        return self.memo(("xi", i), lambda: VertexOp(
            self.single, f"xi_{i}",
            cre={i - 1: self._fn([(-1, P.q, 0, None)])},
            ann={i - 1: self._fn([(1, P.q, 0, None)])},
            charge={}, zform=ZForm(), sfactors=(), weight=P.tab.one))

    def phi(self, sign, i):
        P = self.P
        qh_inv = P.tab.monomial({"q": -HALF})
        qh3 = P.tab.monomial({"q": Fraction(3, 2)})
        if sign == "+":
            return self.memo(("phi+", i), lambda: VertexOp(
                self.single, f"phi+_{i}",
                cre={},
                ann={i - 1: self._fn([(-1, qh_inv, 0, None), (1, qh3, 0, None)])},
                charge={}, zform=ZForm(), sfactors=(), weight=P.tab.one))
        return self.memo(("phi-", i), lambda: VertexOp(
            self.single, f"phi-_{i}",
            cre={i - 1: self._fn([(1, qh_inv, 0, None), (-1, qh3, 0, None)])},
            ann={},
            charge={}, zform=ZForm(), sfactors=(), weight=P.tab.one))

    def E(self, i):
        P = self.P
        s = 1 if i == 1 else -1

        def build():
            base = self.eta(i)
            return VertexOp(
                self.single, f"E_{i}", base.cre, base.ann,
                charge={"chf": P.lc(s)},
                zform=ZForm({"a0": P.lc(s)}, P.lc(1)),
                sfactors=(Factor(("mono", P.q1), ZForm({"e0": P.lc(1)})),),
                weight=P.tab.one)

        return self.memo(("E", i), build)

    def F(self, i):
        P = self.P
        s = 1 if i == 1 else -1

        def build():
            base = self.xi_vo(i)
            return VertexOp(
                self.single, f"F_{i}", base.cre, base.ann,
                charge={"chf": P.lc(-s)},
                zform=ZForm({"a0": P.lc(-s)}, P.lc(1)),
                sfactors=(Factor(("mono", P.q1), ZForm({"e0": P.lc(-1)})),),
                weight=P.tab.one)

        return self.memo(("F", i), build)

    def K(self, sign, i):
        P = self.P
        s = 1 if i == 1 else -1
        qmh = P.tab.monomial({"q": -HALF})

        def build():
            base = shift_arg(self.phi(sign, i), qmh, f"phi{sign}_{i}@q-1/2")
            sf = base.sfactors + (Factor(("mono", P.q),
                                         ZForm({"a0": P.lc(s if sign == "+" else -s)})),)
            return VertexOp(self.single, f"K{sign}_{i}", base.cre, base.ann,
                            dict(base.charge), base.zform, sf, base.weight)

        return self.memo(("K", sign, i), build)

    # =====================================================================
    # tensor-module coproduct images
    # =====================================================================
    def lam_tensor(self, i, k):
        P = self.P
        s = 1 if i == 1 else -1
        cL, cR = i - 1, i + 1

        def build():
            if k == 1:
                return VertexOp(
                    self.tensor, f"Lam_{i},1",
                    cre={cL: self._fn([(1, P.tab.one, 0, None)])},
                    ann={cL: self._fn([(-1, P.tab.one, 0, None)])},
                    charge={"chfL": P.lc(s)},
                    zform=ZForm({"a0L": P.lc(s)}, P.lc(1)),
                    sfactors=(Factor(("mono", P.q1), ZForm({"e0L": P.lc(1)})),),
                    weight=P.tab.one)
            # phi-_i(q^(1/2) z) q^(-a_{i,0}) (x) eta_i(qz) e^chf (qz)^(a+1) q1^a0
            return VertexOp(
                self.tensor, f"Lam_{i},2",
                cre={cL: self._fn([(1, P.tab.one, 0, None), (-1, P.q2, 0, None)]),
                     cR: self._fn([(1, P.q, 0, None)])},
                ann={cR: self._fn([(-1, P.q.inverse(), 0, None)])},
                charge={"chfR": P.lc(s)},
                zform=ZForm({"a0R": P.lc(s)}, P.lc(1)),
                sfactors=(Factor(("mono", P.q), ZForm({"a0L": P.lc(-s)})),
                          Factor(("mono", P.q), ZForm({"a0R": P.lc(s)}, P.lc(1))),
                          Factor(("mono", P.q1), ZForm({"e0R": P.lc(1)})),),
                weight=P.tab.one)

        return self.memo(("lam_tensor", i, k), build)

    def X(self, i):
        return self.memo(("X", i), lambda: OperatorSum(
            f"X_{i}", [self.lam_tensor(i, 1), self.lam_tensor(i, 2)],
            mode_shift=Fraction(0)))

    # =====================================================================
    # decoupled W-current algebra
    # =====================================================================
    def lam(self, sign, i):
        """The two exponential halves of the W currents."""
        P = self.P
        s = 1 if i == 1 else -1
        c = i - 1

        def build():
            if sign == "+":
                return VertexOp(
                    self.dec, f"Lam+_{i}",
                    cre={c: self._fn([(1, P.q.inverse(), 0, None)])},
                    ann={c: self._fn([(-1, P.q, 0, None)])},
                    charge={"cho": P.lc(s)},
                    zform=ZForm({"b0": P.lc(s)}),
                    sfactors=(Factor(("mono", P.q.inverse()), ZForm({"b0": P.lc(s)})),
                              Factor(("mono", P.q1), ZForm({"ze": P.lc(1)}))),
                    weight=P.tab.one, mode_shift=HALF)
            return VertexOp(
                self.dec, f"Lam-_{i}",
                cre={c: self._fn([(-1, P.q, 0, None)])},
                ann={c: self._fn([(1, P.q.inverse(), 0, None)])},
                charge={"cho": P.lc(-s)},
                zform=ZForm({"b0": P.lc(-s)}),
                sfactors=(Factor(("mono", P.q), ZForm({"b0": P.lc(-s)})),
                          Factor(("mono", P.q1), ZForm({"ze": P.lc(-1)}))),
                weight=P.tab.one, mode_shift=HALF)

        return self.memo(("lam", sign, i), build)

    def W(self, i):
        return self.memo(("W", i), lambda: OperatorSum(
            f"W_{i}", [self.lam("+", i), self.lam("-", i)], mode_shift=HALF))

    def lamo(self, i, k):
        """The unnormalized decoupled halves (the q-shifted W halves)."""
        P = self.P
        s = 1 if i == 1 else -1
        c = i - 1

        def build():
            if k == 1:
                return VertexOp(
                    self.dec, f"Lamo_{i},1",
                    cre={c: self._fn([(1, P.tab.one, 0, None)])},
                    ann={c: self._fn([(-1, P.tab.one, 0, None)])},
                    charge={"cho": P.lc(s)},
                    zform=ZForm({"b0": P.lc(s)}),
                    sfactors=(Factor(("mono", P.q1), ZForm({"ze": P.lc(1)})),),
                    weight=P.tab.one, mode_shift=HALF)
            return VertexOp(
                self.dec, f"Lamo_{i},2",
                cre={c: self._fn([(-1, P.q2, 0, None)])},
                ann={c: self._fn([(1, P.q2.inverse(), 0, None)])},
                charge={"cho": P.lc(-s)},
                zform=ZForm({"b0": P.lc(-s)}),
                sfactors=(Factor(("mono", P.q ** -2), ZForm({"b0": P.lc(s)})),
                          Factor(("mono", P.q1), ZForm({"ze": P.lc(-1)}))),
                weight=P.tab.one, mode_shift=HALF)

        return self.memo(("lamo", i, k), build)

    # -- fused currents ------------------------------------------------------------
    def M(self, k, i, j, xi):
        """The four normal-ordered two-point blocks of the fused current."""
        P = self.P
        if i == j:
            raise DomainError("fused current needs i != j")
        key = ("M", k, i, j, self._mono_key(xi))

        def build():
            lp_i = self.lam("+", i)
            lm_i = self.lam("-", i)
            lp_j = self.lam("+", j)
            lm_j = self.lam("-", j)
            if k == 1:
                op = normal_ordered_product(shift_arg(lp_i, xi), lp_j)
                w = P.q
            elif k == 2:
                op = normal_ordered_product(shift_arg(lm_i, xi), lm_j)
                w = P.q.inverse()
            elif k == 3:
                op = normal_ordered_product(shift_arg(lp_i, xi), lm_j)
                w = P.q * (P.tab.one - P.q1 * xi) * (P.tab.one - P.q3 * xi)
            elif k == 4:
                op = normal_ordered_product(shift_arg(lm_i, xi), lp_j)
                w = P.q.inverse() * (P.tab.one - P.q1.inverse() * xi) \
                    * (P.tab.one - P.q3.inverse() * xi)
            else:
                raise DomainError(f"no fused block {k}")
            return VertexOp(self.dec, f"M{k}[{i}{j}]", op.cre, op.ann,
                            dict(op.charge), op.zform, op.sfactors,
                            op.weight * w, Fraction(0))

        return self.memo(key, build)

    def T(self, xi, i=1, j=2):
        """The fused current: M1 + M2 + z^2 M3 + z^2 M4 (vanishing blocks dropped)."""
        P = self.P
        key = ("T", i, j, self._mono_key(xi))

        def build():
            ops = [self.M(1, i, j, xi), self.M(2, i, j, xi)]
            for k in (3, 4):
                mk = self.M(k, i, j, xi)
                if not mk.weight.is_zero():
                    shifted = VertexOp(self.dec, mk.name + "z2", mk.cre, mk.ann,
                                       dict(mk.charge),
                                       ZForm(mk.zform.coeffs,
                                             mk.zform.const + P.lc(2)),
                                       mk.sfactors, mk.weight, Fraction(0))
                    ops.append(shifted)
            return OperatorSum(f"T[{i}{j}](xi)", ops, mode_shift=Fraction(0))

        return self.memo(key, build)

    # -- screening currents ----------------------------------------------------------
    def screening_part(self, pm, k):
        """S^pm_k, one of the two exponential terms of a screening current."""
        P = self.P
        s_par = P.q3 if pm == "+" else P.q1
        tau = LC({(-1, 0): 1}) if pm == "+" else P.lc(-1)
        sh = self.P.mono_pow(s_par, HALF)

        def build():
            base = [(1, sh * P.q.inverse(), -1, s_par ** 2),
                    (1, sh * P.q, -1, s_par ** 2)]
            cfn = self._fn(base)                      # c(n)
            cfn_s = self._fn([(c, rho * s_par, sg, tau_)
                              for c, rho, sg, tau_ in base])  # c(n) s^n
            if k == 1:
                cre = {0: cfn, 1: cfn_s}
                ann = {0: cfn_s, 1: cfn}
                sgn = 1
            else:
                cre = {0: cfn_s, 1: cfn}
                ann = {0: cfn, 1: cfn_s}
                sgn = -1
            return VertexOp(
                self.dec, f"S{pm}_{k}", cre, ann,
                charge={"cho": P.lc(sgn), "zch": tau},
                zform=ZForm({"b0": P.lc(sgn), "ze": tau.scale(2)}),
                sfactors=(), weight=P.tab.one, mode_shift=Fraction(0))

        return self.memo(("Spart", pm, k), build)

    def screening(self, pm):
        def build():
            s1 = self.screening_part(pm, 1)
            s2 = self.screening_part(pm, 2)
            s2n = VertexOp(s2.spec, s2.name + "-", s2.cre, s2.ann,
                           dict(s2.charge), s2.zform, s2.sfactors,
                           -s2.weight, s2.mode_shift)
            return OperatorSum(f"S{pm}", [s1, s2n], mode_shift=Fraction(0))

        return self.memo(("S", pm), build)

    # -- identity --------------------------------------------------------------------
    def identity(self, spec=None):
        spec = spec or self.dec
        return self.memo(("id", spec.name), lambda: VertexOp(
            spec, "1", {}, {}, {}, ZForm(), (), self.P.tab.one))

    # =====================================================================
    # structure functions
    # =====================================================================
    def f_terms(self):
        """Exponent of f(z): -(q1^n + q3^n)/(1 + q2^{-n})."""
        P = self.P
        q2i = P.q2.inverse()
        return [ExpTerm(-P.tab.one, P.q1, 1, q2i),
                ExpTerm(-P.tab.one, P.q3, 1, q2i)]

    def f_series(self, L, shift=None):
        terms = self.f_terms()
        if shift is not None:
            terms = [t.scaled(shift) for t in terms]
        from .series import expand_structure_function
        return expand_structure_function(self.P.tab, terms, L)

    def f_xi_terms(self, xi):
        """Exponent of f(xi; z): xi^n - (q1^n + q3^n)/(1 + q2^{-n})."""
        return [ExpTerm(self.P.tab.one, xi)] + self.f_terms()

    def f_xi_series(self, xi, L, shift=None):
        terms = self.f_xi_terms(xi)
        if shift is not None:
            terms = [t.scaled(shift) for t in terms]
        from .series import expand_structure_function
        return expand_structure_function(self.P.tab, terms, L)

    def g_terms(self, k):
        """Exponent of g^(k)(z): (1 - q_k^{2n})(1 - q2^{-n} q_k^{-2n})/(1 + q2^{-n})."""
        P = self.P
        qk = P.q1 if k == 1 else P.q3
        q2i = P.q2.inverse()
        one = P.tab.one
        return [ExpTerm(one, P.tab.one, 1, q2i),
                ExpTerm(-one, qk ** 2, 1, q2i),
                ExpTerm(-one, q2i * qk ** -2, 1, q2i),
                ExpTerm(one, q2i, 1, q2i)]

    def g_series(self, k, L, shift=None):
        terms = self.g_terms(k)
        if shift is not None:
            terms = [t.scaled(shift) for t in terms]
        from .series import expand_structure_function
        return expand_structure_function(self.P.tab, terms, L)

    def qvir_constant(self, k):
        """The central constant -(1-q_k^2)(1-q2^{-1}q_k^{-2})/(1-q2^{-1})."""
        P = self.P
        qk = P.q1 if k == 1 else P.q3
        one = P.tab.one
        return -(one - qk ** 2) * (one - P.q2.inverse() * qk ** -2) \
            * (one - P.q2.inverse()).inverse()
