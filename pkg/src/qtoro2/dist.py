"""Formal-distribution identity checking on truncated Fock modules.

An identity is a signed list of product terms and delta terms in two formal
variables z, w.  A product term is

    coeff * z**dz * w**dw * series(rvar/lvar) * Left(lrho*lvar) Right(rrho*rvar)

applied right-to-left (Right first); the structure-function series is always
expanded in right-variable over left-variable, which makes every coefficient
a finite sum: the right factor is annihilation-bounded on a fixed state, so
the series summation cuts off, and the series is expanded on demand to the
required order.  A delta term is coeff * z**dz * w**dw * delta(a*w/z) *
Op(rho*w).

Verification is vector-level: all coefficients in a bidegree window around
the zero-mode cosets must agree exactly on every test vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .fock import FockVector
from .lincomb import LC
from .scalars import DomainError
from .vertex import as_ops


@dataclass
class ProductTerm:
    coeff: object                 # constant scalar
    left: object                  # VertexOp | OperatorSum (applied second)
    right: object                 # VertexOp | OperatorSum (applied first)
    lvar: str = "z"               # variable of the left factor; right gets the other
    series_fn: object = None      # callable L -> TruncSeries in rvar/lvar
    lrho: object = None           # monomial argument multiplier of left factor
    rrho: object = None
    dz: LC = field(default_factory=LC)
    dw: LC = field(default_factory=LC)
    _ser: object = field(default=None, repr=False)

    def series_coeff(self, ell):
        if self._ser is None or self._ser.L < ell:
            self._ser = self.series_fn(ell + 8)
        return self._ser.c[ell]


@dataclass
class DeltaTerm:
    coeff: object                 # constant scalar
    a: object                     # monomial of delta(a w/z)
    op: object                    # operator at argument rho*w
    rho: object = None
    dz: LC = field(default_factory=LC)
    dw: LC = field(default_factory=LC)


@dataclass
class Identity:
    name: str
    lhs: list
    rhs: list
    anchor: str = ""


def _unit_int(lc, unit):
    """The pure integer value of an LC, or None if it has other parts."""
    if not lc.d:
        return 0
    if set(lc.d) == {unit} and lc.d[unit].denominator == 1:
        return int(lc.d[unit])
    return None


def op_coeff(op, rho, vec, power):
    """Coefficient of var**power of Op(rho*var) applied to a vector."""
    out = FockVector()
    for o in as_ops(op):
        spec = o.spec
        scale = None
        for st, sc in vec.d.items():
            part = o.apply_at(st, power)
            if part.is_zero():
                continue
            if rho is not None:
                if scale is None:
                    scale = spec.scalarize(("mono", rho), power)
                part = part.scaled(scale)
            out.iadd(part, sc)
    return out


def term_coeff(t, state, Pz, Pw, spec):
    """Exact coefficient of z**Pz w**Pw of a product term on a state."""
    unit = spec.params.unit_key
    Pz = Pz - t.dz
    Pw = Pw - t.dw
    Pl, Pr = (Pz, Pw) if t.lvar == "z" else (Pw, Pz)
    vec0 = FockVector({state: spec.params.tab.one})
    out = FockVector()
    if t.series_fn is None:
        right_v = op_coeff(t.right, t.rrho, vec0, Pr)
        if not right_v.is_zero():
            out.iadd(op_coeff(t.left, t.lrho, right_v, Pl))
        return out.scaled(t.coeff) if not out.is_zero() else out
    lmax = -1
    for o in as_ops(t.right):
        k = _unit_int(Pr - o.z_exponent(state), unit)
        if k is not None:
            lmax = max(lmax, k + state.degree)
    for ell in range(0, lmax + 1):
        s_l = t.series_coeff(ell)
        if not s_l:
            continue
        right_v = op_coeff(t.right, t.rrho, vec0, Pr - LC({unit: ell}))
        if not right_v.is_zero():
            out.iadd(op_coeff(t.left, t.lrho, right_v,
                              Pl + LC({unit: ell})), s_l)
    return out.scaled(t.coeff) if not out.is_zero() else out


def delta_coeff(t, state, Pz, Pw, spec):
    """Coefficient of z**Pz w**Pw of coeff * delta(a w/z) * Op(rho w)."""
    unit = spec.params.unit_key
    n = _unit_int(t.dz - Pz, unit)
    if n is None:
        return FockVector()
    vec0 = FockVector({state: spec.params.tab.one})
    wpow = Pw - t.dw - LC({unit: n})
    out = op_coeff(t.op, t.rho, vec0, wpow)
    if out.is_zero():
        return out
    return out.scaled(t.coeff * (t.a ** n))


def eval_side(terms, state, Pz, Pw, spec):
    out = FockVector()
    for t in terms:
        if isinstance(t, ProductTerm):
            out.iadd(term_coeff(t, state, Pz, Pw, spec))
        elif isinstance(t, DeltaTerm):
            out.iadd(delta_coeff(t, state, Pz, Pw, spec))
        else:
            raise DomainError(f"unknown identity term {t!r}")
    return out


@dataclass
class SuiteReport:
    name: str
    status: str = "pass"          # pass | fail | inconclusive
    checked: int = 0
    witnesses: list = field(default_factory=list)
    anchor: str = ""
    elapsed: float = 0.0

    def record_fail(self, where):
        self.status = "fail"
        if len(self.witnesses) < 8:
            self.witnesses.append(where)

    def merge(self, other):
        self.checked += other.checked
        if other.status == "fail":
            self.status = "fail"
            self.witnesses.extend(other.witnesses[:max(0, 8 - len(self.witnesses))])
        elif other.status == "inconclusive" and self.checked == 0 \
                and self.status == "pass":
            self.status = "inconclusive"
        return self


def _strip_unit(lc, unit):
    return LC({k: v for k, v in lc.d.items() if k != unit})


def coset_targets(terms, state, window, spec):
    """Bidegree targets around every term's zero-mode coset."""
    bases = set()
    unit = spec.params.unit_key
    for t in terms:
        if isinstance(t, ProductTerm):
            for o_l in as_ops(t.left):
                el = _strip_unit(o_l.z_exponent(state), unit)
                for o_r in as_ops(t.right):
                    er = _strip_unit(o_r.z_exponent(state), unit)
                    ez, ew = (el, er) if t.lvar == "z" else (er, el)
                    bases.add((ez + _strip_unit(t.dz, unit),
                               ew + _strip_unit(t.dw, unit)))
        else:
            for o in as_ops(t.op):
                ew = _strip_unit(o.z_exponent(state) + t.dw + t.dz, unit)
                bases.add((_strip_unit(t.dz, unit), ew))
    targets = set()
    for bz, bw in bases:
        for i in range(-window, window + 1):
            for j in range(-window, window + 1):
                targets.add((bz + LC({unit: i}), bw + LC({unit: j})))
    return sorted(targets, key=lambda t_: (repr(t_[0]), repr(t_[1])))


def verify_identity(ident, spec, states, window=4, report=None):
    """Check LHS == RHS on each state over the coset bidegree window."""
    rep = report if report is not None else SuiteReport(ident.name,
                                                        anchor=ident.anchor)
    all_terms = list(ident.lhs) + list(ident.rhs)
    for state in states:
        for Pz, Pw in coset_targets(all_terms, state, window, spec):
            lhs = eval_side(ident.lhs, state, Pz, Pw, spec)
            rhs = eval_side(ident.rhs, state, Pz, Pw, spec)
            diff = lhs - rhs
            rep.checked += 1
            if not diff.is_zero():
                rep.record_fail({
                    "identity": ident.name,
                    "state": repr(state),
                    "z_power": repr(Pz),
                    "w_power": repr(Pw),
                    "difference": repr(diff),
                })
    if rep.checked == 0 and rep.status == "pass":
        rep.status = "inconclusive"
    return rep
