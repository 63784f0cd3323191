"""Normal-ordered exponential vertex operators and their exact mode actions.

An operator is

    weight * [dressings] * :exp(creation part) exp(annihilation part):
           * e^{charge} * prod base**(linear form in zero modes)

acting on interned Fock states.  The coefficient of a fixed z-power of
V(z)|state> is always a finite exact computation: annihilation is bounded by
the state degree and the creation degree is then pinned by the target power.
Formal sums of operators (the two-term currents, the four-term fused current,
screening differences) are OperatorSum objects.

`contract` computes the operator-product structure function of a pair by
pairing annihilation coefficients with creation coefficients through the
kernel, both as a truncated series and, when the exponent structure
telescopes, as a recognized product of linear and q-Pochhammer factors.
"""

from __future__ import annotations

from fractions import Fraction
from gmpy2 import mpq

from .fock import FockVector
from .lincomb import LC, ZForm
from .scalars import DomainError, Scalar
from .series import ExpTerm, ModeFn, TruncSeries


class Factor:
    """Grading factor base**form standing right of the charge exponential."""

    __slots__ = ("base", "form")

    def __init__(self, base, form):
        self.base = base  # 'z' | ('mono', Scalar) | ('exp', Scalar log-coefficient)
        self.form = form  # ZForm


class VertexOp:
    __slots__ = ("spec", "name", "cre", "ann", "charge", "zform", "sfactors",
                 "weight", "mode_shift", "dressings",
                 "_acc", "_annent", "_clusters", "_app", "_delta", "_active",
                 "_e0")

    def __init__(self, spec, name, cre, ann, charge, zform, sfactors, weight,
                 mode_shift=Fraction(0), dressings=()):
        self.spec = spec
        self.name = name
        self.cre = dict(cre)            # color -> ModeFn (coeff of a_{c,-n} z^n)
        self.ann = dict(ann)            # color -> ModeFn (coeff of a_{c,+n} z^-n)
        self.charge = tuple(sorted(charge.items())) if isinstance(charge, dict) \
            else tuple(sorted(charge))  # ((conj_name, LC), ...)
        self.zform = zform              # ZForm: exponent of z
        self.sfactors = tuple(sfactors)  # scalar-base Factors
        self.weight = weight
        self.mode_shift = Fraction(mode_shift)
        self.dressings = tuple(dressings)
        self._acc = {}
        self._annent = {}
        self._clusters = {}
        self._app = {}
        self._delta = None
        self._active = tuple(sorted(set(self.cre) | set(self.ann)))
        self._e0 = {}

    # -- zero-mode data -----------------------------------------------------------
    def charge_delta(self):
        """Per-direction eigenvalue shifts of the charge exponential."""
        if self._delta is None:
            spec = self.spec
            delta = [LC() for _ in spec.zero_dirs]
            for conj, coeff in self.charge:
                zd = spec.conj_to_dir[conj]
                k = spec.dir_index[zd.name]
                delta[k] = delta[k] + coeff.mul(zd.bracket, spec.key_mul)
            self._delta = tuple(delta)
        return self._delta

    def charge_lc(self, conj):
        for c, coeff in self.charge:
            if c == conj:
                return coeff
        return LC()

    # -- cached contraction data ---------------------------------------------------
    def acc_value(self, color, n):
        """Sum over own annihilation colors of ann(n) * n * kernel(., color, n)."""
        v = self._acc.get((color, n))
        if v is None:
            spec = self.spec
            v = None
            for c, fn in self.ann.items():
                kern = spec.kernel(c, color, n)
                if kern.is_zero():
                    continue
                t = fn.value(n) * kern * n
                v = t if v is None else v + t
            if v is None:
                v = spec.params.tab.zero
            self._acc[(color, n)] = v
        return v

    def ann_entries(self, state):
        """All annihilation outcomes on a state: (scalar, remaining modes, degree)."""
        ent = self._annent.get(state)
        if ent is None:
            slots = {}
            for cm in state.modes:
                slots[cm] = slots.get(cm, 0) + 1
            ent = [(1, list(state.modes), 0)]
            for (color, k), mult in slots.items():
                v = self.acc_value(color, k)
                if v.is_zero():
                    continue
                new = []
                for sc, modes, a in ent:
                    vp = 1
                    binom = 1
                    for j in range(1, mult + 1):
                        vp = vp * v
                        binom = binom * (mult - j + 1) // j
                        m2 = list(modes)
                        for _ in range(j):
                            m2.remove((color, k))
                        new.append((sc * (vp * binom), m2, a + j * k))
                ent.extend(new)
            ent = [(sc, tuple(modes), a) for sc, modes, a in ent]
            self._annent[state] = ent
        return ent

    def cre_clusters(self, c):
        """Creation clusters of total degree c: list of (scalar, modes tuple).

        Entries enumerate the multisets of created modes with the multinomial
        coefficient prod cre(k)**j / j! of the exponential expansion.
        """
        cl = self._clusters.get(c)
        if cl is None:
            active = [col for col in self._active if col in self.cre]
            types = [(k, col) for k in range(c, 0, -1) for col in active]
            out = []

            def rec(remaining, ti, sc, modes):
                if remaining == 0:
                    out.append((sc, tuple(sorted(modes))))
                    return
                if ti == len(types):
                    return
                rec(remaining, ti + 1, sc, modes)
                k, col = types[ti]
                if k <= remaining:
                    base = self.cre[col].value(k)
                    powj = 1
                    for j in range(1, remaining // k + 1):
                        powj = powj * base
                        rec(remaining - j * k, ti + 1,
                            sc * (powj / _fact(j)), modes + [(col, k)] * j)

            rec(c, 0, 1, [])
            cl = out
            self._clusters[c] = cl
        return cl

    # -- application -----------------------------------------------------------------
    def eval_sfactors(self, state):
        spec = self.spec
        w = self.weight
        env = {zd.name: c for zd, c in zip(spec.zero_dirs, state.charges)}
        for f in self.sfactors:
            ev = f.form.eval(env, spec.key_mul)
            w = w * spec.scalarize(f.base, ev)
        return w

    def z_exponent(self, state):
        e0 = self._e0.get(state.charges)
        if e0 is None:
            spec = self.spec
            env = {zd.name: c for zd, c in zip(spec.zero_dirs, state.charges)}
            e0 = self.zform.eval(env, spec.key_mul)
            self._e0[state.charges] = e0
        return e0

    def apply_at(self, state, power):
        """Coefficient of z**power (an LC) of V(z)|state>, exact."""
        e0 = self.z_exponent(state)
        off = power - e0
        if not off.d:
            return self.apply_at_offset(state, 0)
        unit = self.spec.params.unit_key
        if set(off.d) == {unit} and off.d[unit].denominator == 1:
            return self.apply_at_offset(state, int(off.d[unit]))
        return FockVector()

    def apply_at_offset(self, state, off):
        """Coefficient at z-power (zero-mode exponent + off)."""
        cached = self._app.get((state, off))
        if cached is not None:
            return cached
        if self.dressings:
            out = self._apply_dressed(state, off)
        else:
            out = self._apply_plain(state, off)
        self._app[(state, off)] = out
        return out

    def _apply_plain(self, state, off, extra_scalar=None, extra_modes=()):
        spec = self.spec
        w0 = self.eval_sfactors(state)
        if extra_scalar is not None:
            w0 = w0 * extra_scalar
        if not w0:
            return FockVector()
        delta = self.charge_delta()
        charges = tuple(c + dc for c, dc in zip(state.charges, delta))
        out = FockVector()
        for sa, modesA, a in self.ann_entries(state):
            c = off + a
            if c < 0:
                continue
            for sc, modesC in self.cre_clusters(c):
                st2 = spec.state(charges,
                                 tuple(sorted(modesA + modesC + extra_modes)))
                out.add_scaled(st2, (sa * sc) * w0)
        return out

    def _apply_dressed(self, state, off):
        spec = self.spec
        out = FockVector()
        env = {zd.name: c for zd, c in zip(spec.zero_dirs, state.charges)}
        for d_scalar, d_modes, d_zoff, d_state in _dress_expand(
                spec, self.dressings, state, env):
            part = self._apply_plain(
                d_state, off - d_zoff,
                extra_scalar=d_scalar, extra_modes=tuple(d_modes))
            out.iadd(part)
        return out

    def __repr__(self):
        return f"<op {self.name}>"


def _dress_expand(spec, dressings, state, env):
    """Expand dressing factors: yields (scalar, created modes, z-offset, state)."""
    results = [(1, (), 0, state)]
    for d in dressings:
        results = [(sc * dsc, modes + dmodes, zoff + dzoff, dst)
                   for sc, modes, zoff, st in results
                   for dsc, dmodes, dzoff, dst in d.options(spec, st, env)]
    return results


_FACTS = [1]


def _fact(j):
    while len(_FACTS) <= j:
        _FACTS.append(_FACTS[-1] * len(_FACTS))
    return _FACTS[j]


class OperatorSum:
    """Formal sum of vertex operators sharing a spec and mode convention."""

    __slots__ = ("name", "ops", "mode_shift")

    def __init__(self, name, ops, mode_shift=None):
        self.name = name
        self.ops = tuple(ops)
        self.mode_shift = mode_shift if mode_shift is not None \
            else self.ops[0].mode_shift

    @property
    def spec(self):
        return self.ops[0].spec

    def apply_at(self, state, power):
        out = FockVector()
        for op in self.ops:
            out.iadd(op.apply_at(state, power))
        return out

    def __add__(self, other):
        ops = other.ops if isinstance(other, OperatorSum) else (other,)
        return OperatorSum(f"{self.name}+{getattr(other, 'name', '?')}",
                           self.ops + tuple(ops))

    def __repr__(self):
        return f"<opsum {self.name}>"


def as_ops(x):
    return x.ops if isinstance(x, OperatorSum) else (x,)


def op_scaled(op, scalar, name=None):
    return VertexOp(op.spec, name or op.name, op.cre, op.ann, dict(op.charge),
                    op.zform, op.sfactors, op.weight * scalar, op.mode_shift,
                    op.dressings)


def sum_scaled(x, scalar, name=None):
    return OperatorSum(name or f"{scalar!r}*{x.name}",
                       [op_scaled(o, scalar) for o in as_ops(x)],
                       x.mode_shift)


# ---------------------------------------------------------------------------
# argument shifts and normal-ordered products
# ---------------------------------------------------------------------------

def shift_arg(op, rho, name=None):
    """The operator V(rho * z) as a new VertexOp (rho a monomial scalar)."""
    rho_inv = rho.inverse()
    cre = {c: fn.scaled(rho) for c, fn in op.cre.items()}
    ann = {c: fn.scaled(rho_inv) for c, fn in op.ann.items()}
    sfactors = list(op.sfactors)
    weight = op.weight
    zf = op.zform
    # z**form picks up rho**form; the constant part scalarizes into the weight
    if zf.coeffs:
        sfactors.append(Factor(("mono", rho), ZForm(zf.coeffs)))
    if not zf.const.is_zero():
        weight = weight * op.spec.scalarize(("mono", rho), zf.const)
    return VertexOp(op.spec, name or f"{op.name}@", cre, ann, dict(op.charge),
                    zf, sfactors, weight, op.mode_shift, op.dressings)


def pair_form_charge(spec, form, charge):
    """Bracket pairing <form, charge exponential> as an LC."""
    total = LC()
    for conj, ccoeff in charge:
        zd = spec.conj_to_dir[conj]
        fcoeff = None
        for name, fc in form.coeffs:
            if name == zd.name:
                fcoeff = fc
                break
        if fcoeff is None:
            continue
        total = total + fcoeff.mul(ccoeff, spec.key_mul).mul(zd.bracket,
                                                             spec.key_mul)
    return total


def normal_ordered_product(A, B, name=None):
    """:A(z) B(z): as a single VertexOp (fold argument ratios in beforehand).

    Normal ordering reorders zero modes without exchange factors; the pairing
    scalars and z-powers of the plain product live in `ope.contract`.
    """
    if A.spec is not B.spec:
        raise DomainError("normal-ordered product across different specs")
    spec = A.spec
    cre = dict(A.cre)
    for c, fn in B.cre.items():
        cre[c] = cre[c].plus(fn) if c in cre else fn
    ann = dict(A.ann)
    for c, fn in B.ann.items():
        ann[c] = ann[c].plus(fn) if c in ann else fn
    charge = {}
    for conj, coeff in A.charge + B.charge:
        charge[conj] = charge.get(conj, LC()) + coeff
    charge = {c: v for c, v in charge.items() if not v.is_zero()}
    zf = ZForm(A.zform.coeffs + B.zform.coeffs, A.zform.const + B.zform.const)
    cre = {c: fn for c, fn in cre.items() if not fn.is_empty()}
    ann = {c: fn for c, fn in ann.items() if not fn.is_empty()}
    return VertexOp(spec, name or f":{A.name}{B.name}:", cre, ann, charge,
                    zf, A.sfactors + B.sfactors, A.weight * B.weight,
                    A.mode_shift, A.dressings + B.dressings)
