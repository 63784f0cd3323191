"""Operator-product contraction: series, prefactors, and product recognition.

For normal-ordered exponentials A(z), B(w) over one spec,

    A(z) B(w) = prefactor * z**zexp * C(w/z) * :A(z)B(w):

where C = exp(sum_n gamma_n x**n), gamma_n pairing A's annihilation
coefficients with B's creation coefficients through the kernel, and the
zero-mode exchange contributes the prefactor and the (possibly beta-valued)
z-exponent record.

Recognition works on the exact exponential-sum structure of gamma: after
normalizing denominators to (1 - tau**n) form and telescoping geometric
ladders, each surviving term c * mu**n        gives (1 - mu x)**(-c) and each
term c * mu**n / (1 - tau**n) gives the q-Pochhammer ((mu x; tau)_oo)**(-c).
If any exponent fails to be an integer the result falls back to the series.
"""

from __future__ import annotations

from fractions import Fraction

from .lincomb import LC
from .scalars import DomainError, Scalar
from .series import TruncSeries
from .vertex import pair_form_charge


class OpeResult:
    """Contraction data of an ordered operator pair."""

    __slots__ = ("prefactor", "zexp", "series", "factors", "recognized")

    def __init__(self, prefactor, zexp, series, factors, recognized):
        self.prefactor = prefactor
        self.zexp = zexp              # LC z-exponent record
        self.series = series          # TruncSeries in x = w/z
        self.factors = factors        # ((a, p_or_None, exponent), ...) or None
        self.recognized = recognized

    def __repr__(self):
        from .canonical import canonical_str
        body = render_factors(self.factors) if self.recognized \
            else f"series {self.series!r}"
        return (f"OPE[pref={canonical_str(self.prefactor)}, "
                f"z^({self.zexp!r}), {body}]")


def render_factors(factors):
    if not factors:
        return "1"
    parts = []
    for a, p, e in factors:
        from .canonical import canonical_str
        a_s = canonical_str(a)
        if p is None:
            base = f"(1 - ({a_s})*x)"
        else:
            base = f"(({a_s})*x; {canonical_str(p)})_oo"
        parts.append(base if e == 1 else f"{base}**{e}")
    return " * ".join(parts)


def gamma_value(A, B, n):
    """Pointwise contraction coefficient gamma_n of the ordered pair."""
    tab = A.spec.params.tab
    total = tab.zero
    for cB, fn in B.cre.items():
        acc = A.acc_value(cB, n)
        if acc.is_zero():
            continue
        total = total + acc * fn.value(n)
    return total


def gamma_struct(A, B):
    """Exact exponential-sum structure of n * gamma_n, normalized so the
    recognition input is gamma_n = struct(n) / n."""
    spec = A.spec
    terms = []
    for cA, fA in A.ann.items():
        for cB, fB in B.cre.items():
            if not (fA.over_n and fB.over_n):
                raise DomainError(
                    "structure recognition requires 1/n-normalized exponents")
            for kc, krho, kdens in spec.kernel_struct(cA, cB):
                for tA in fA.terms:
                    for tB in fB.terms:
                        dens = kdens + _term_dens(tA) + _term_dens(tB)
                        terms.append((tA.coeff * tB.coeff * kc,
                                      tA.rho * tB.rho * krho, dens))
    return terms


def _term_dens(t):
    return ((t.sign, t.tau),) if t.sign else ()


def _normalize_dens(terms):
    """Rewrite 1/(1 + tau**n) = (1 - tau**n)/(1 - tau**2n); only minus-dens remain."""
    out = []
    work = list(terms)
    while work:
        c, rho, dens = work.pop()
        plus = next((k for k, (s, _) in enumerate(dens) if s > 0), None)
        if plus is None:
            out.append((c, rho, dens))
            continue
        s, tau = dens[plus]
        rest = dens[:plus] + dens[plus + 1:]
        newden = rest + ((-1, tau * tau),)
        work.append((c, rho, newden))
        work.append((-c, rho * tau, newden))
    return out


def _mono_vec(tab, mono):
    ((m, c),) = mono.num.items()
    if c != 1:
        raise DomainError("recognition expects coefficient-1 monomials")
    return tab.unpack(m)


def _ladder_pos(vec, rep, tau_vec):
    """Integer k with vec = rep + k*tau, or None."""
    k = None
    for dv, tv in zip((a - b for a, b in zip(vec, rep)), tau_vec):
        if tv:
            kk = Fraction(dv, tv)
            if k is None:
                k = kk
            elif k != kk:
                return None
        elif dv:
            return None
    if k is None or k.denominator != 1:
        return None if k is not None else 0
    return int(k)


def _ladder_divide_rem(numer, tau_vec):
    """Split numer = (1 - tau**n) * quotient + remainder.

    Geometric ladders whose coefficients sum to zero telescope into the
    quotient (prefix sums); the others go unchanged to the remainder.
    """
    classes = []
    for vec, coeff in numer.items():
        for cls in classes:
            k = _ladder_pos(vec, cls[0], tau_vec)
            if k is not None:
                cls[1][k] = (vec, coeff)
                break
        else:
            classes.append((vec, {0: (vec, coeff)}))
    quot = {}
    rem = {}
    for rep, members in classes:
        total = None
        for _, c in members.values():
            total = c if total is None else total + c
        if total is None or not total.is_zero():
            for vec, c in members.values():
                _expoly_add(rem, vec, c)
            continue
        ks = sorted(members)
        run = None
        for k in range(ks[0], ks[-1]):
            entry = members.get(k)
            if entry is not None:
                run = entry[1] if run is None else run + entry[1]
            if run is not None and not run.is_zero():
                qvec = tuple(r + k * t for r, t in zip(rep, tau_vec))
                _expoly_add(quot, qvec, run)
    return quot, rem


def _reduce_expoly(numer, dens):
    """Recursively divide by the (1 - tau**n) factors, splitting remainders."""
    if not numer:
        return []
    if not dens:
        return [(numer, ())]
    tau = dens[0]
    rest = dens[1:]
    quot, rem = _ladder_divide_rem(numer, tau)
    out = list(_reduce_expoly(quot, rest))
    out.extend((n2, d2 + (tau,)) for n2, d2 in _reduce_expoly(rem, rest))
    return out


def _expoly_add(dst, vec, coeff):
    prev = dst.get(vec)
    if prev is None:
        dst[vec] = coeff
    else:
        s = prev + coeff
        if s.is_zero():
            del dst[vec]
        else:
            dst[vec] = s


def _expoly_mul_oneminus(poly, tau_vec):
    """Multiply an exponential polynomial by (1 - tau**n)."""
    out = {}
    for vec, c in poly.items():
        _expoly_add(out, vec, c)
        _expoly_add(out, tuple(a + t for a, t in zip(vec, tau_vec)), -c)
    return out


def recognize(tab, struct_terms):
    """Try to express exp(sum struct(n)/n x^n) as linear/Pochhammer factors.

    All terms are brought over the common denominator multiset before the
    ladder division so that cancellations across kernel and coefficient
    denominators are seen.
    """
    terms = _normalize_dens(struct_terms)
    common = {}
    prepared = []
    for c, rho, dens in terms:
        try:
            rvec = _mono_vec(tab, rho)
            dvecs = [_mono_vec(tab, tau) for _, tau in dens]
        except (DomainError, ValueError):
            return None
        cnt = {}
        for tv in dvecs:
            cnt[tv] = cnt.get(tv, 0) + 1
        for tv, m in cnt.items():
            common[tv] = max(common.get(tv, 0), m)
        prepared.append((c, rvec, cnt))
    numer = {}
    for c, rvec, cnt in prepared:
        poly = {rvec: c}
        for tv, m in common.items():
            for _ in range(m - cnt.get(tv, 0)):
                poly = _expoly_mul_oneminus(poly, tv)
        for vec, cc in poly.items():
            _expoly_add(numer, vec, cc)
    dens = tuple(tv for tv, m in common.items() for _ in range(m))
    factors = []
    for piece, left in _reduce_expoly(numer, dens):
        if len(left) > 1:
            return None
        tau_mono = None if not left else _vec_mono(tab, left[0])
        for vec, coeff in sorted(piece.items()):
            e = _as_int(coeff)
            if e is None:
                return None
            if e:
                factors.append((_vec_mono(tab, vec), tau_mono, -e))
    return tuple(factors)


def _vec_mono(tab, vec):
    return Scalar(tab, {tab.pack(vec): tab.cnum(1)}, ())


def _as_int(coeff):
    c = coeff.reduce()
    if c.bag:
        return None
    if not c.num:
        return 0
    if len(c.num) != 1:
        return None
    ((m, v),) = c.num.items()
    if m != c.tab.bias_total or not hasattr(v, "denominator") \
            or v.denominator != 1:
        return None
    return int(v)


def factors_series(tab, factors, L, var="x"):
    """Expand a recognized factor list back into a truncated series."""
    coeffs = [tab.zero] * (L + 1)
    for a, p, e in factors:
        for n in range(1, L + 1):
            an = a ** n
            if p is None:
                coeffs[n] = coeffs[n] + an * Fraction(-e, n)
            else:
                den = tab.one - p ** n
                coeffs[n] = coeffs[n] + an * den.inverse() * Fraction(-e, n)
    return TruncSeries(var, coeffs).exp()


def no_pair_coeff(A, B, state, Pa, Pb):
    """Coefficient of z**Pa w**Pb of :A(z)B(w):|state>, with no contraction.

    Both annihilation exponentials hit the original state, grading factors
    evaluate on the original charges, charges shift jointly, and each side's
    creation cluster carries its own variable power.
    """
    spec = A.spec
    unit = spec.params.unit_key
    from .fock import FockVector
    from .dist import _unit_int
    offA = _unit_int(Pa - A.z_exponent(state), unit)
    offB = _unit_int(Pb - B.z_exponent(state), unit)
    if offA is None or offB is None:
        return FockVector()
    w0 = A.eval_sfactors(state) * B.eval_sfactors(state)
    if not w0:
        return FockVector()
    deltaA = A.charge_delta()
    deltaB = B.charge_delta()
    charges = tuple(c + da + db for c, da, db in
                    zip(state.charges, deltaA, deltaB))
    out = FockVector()
    for sB, modesB, aB in B.ann_entries(state):
        cB = offB + aB
        if cB < 0:
            continue
        mid = spec.state(state.charges, modesB)
        for sA, modesA, aA in A.ann_entries(mid):
            cA = offA + aA
            if cA < 0:
                continue
            for scB, creB in B.cre_clusters(cB):
                for scA, creA in A.cre_clusters(cA):
                    st2 = spec.state(charges,
                                     tuple(sorted(modesA + creA + creB)))
                    out.add_scaled(st2, (sB * sA) * (scB * scA) * w0)
    return out


def product_via_ope(A, B, state, Pa, Pb, L):
    """A(z)B(w)|state> coefficient reconstructed from the contraction data."""
    from .fock import FockVector
    from .lincomb import LC
    unit = A.spec.params.unit_key
    res = contract(A, B, L)
    out = FockVector()
    for ell in range(0, L + 1):
        if not res.series.c[ell]:
            continue
        part = no_pair_coeff(A, B, state,
                             Pa - res.zexp + LC({unit: ell}),
                             Pb - LC({unit: ell}))
        out.iadd(part, res.series.c[ell])
    return out.scaled(res.prefactor)


def contract(A, B, L):
    """OPE data of the ordered pair A(z) B(w) to series order L."""
    if A.spec is not B.spec:
        raise DomainError("contract needs operators over one spec")
    tab = A.spec.params.tab
    # zero-mode exchange: A's grading factors move right past B's charge
    zexp = pair_form_charge(A.spec, A.zform, B.charge)
    pref = tab.one
    for f in A.sfactors:
        p = pair_form_charge(A.spec, f.form, B.charge)
        if not p.is_zero():
            pref = pref * A.spec.scalarize(f.base, p)
    coeffs = [tab.zero]
    for n in range(1, L + 1):
        coeffs.append(gamma_value(A, B, n))
    series = TruncSeries("x", coeffs).exp()
    factors = None
    recognized = False
    try:
        factors = recognize(tab, gamma_struct(A, B))
    except DomainError:
        factors = None
    if factors is not None:
        if factors_series(tab, factors, L) == series:
            recognized = True
        else:
            factors = None
    return OpeResult(pref, zexp, series, factors, recognized)
