"""Heisenberg algebras with parametrized kernels and their truncated Fock modules.

A spec fixes the color set, the kernel kappa(i,j,n) in
[alpha_{i,n}, alpha_{j,m}] = n * kappa(i,j,n) * delta_{n+m,0}, the independent
zero-mode directions with their conjugates and bracket values, and the
eigenvalue vocabulary (LC keys).  States are interned so vector arithmetic is
identity-hash dict work.
"""

from __future__ import annotations

from bisect import insort
from fractions import Fraction

from .lincomb import LC, ZForm
from .scalars import DomainError


class ZeroDir:
    """One independent zero-mode direction and its conjugate."""

    __slots__ = ("name", "conj", "bracket")

    def __init__(self, name, conj, bracket):
        self.name = name
        self.conj = conj
        self.bracket = bracket  # LC value of [dir, conj]


class HeisenbergSpec:
    def __init__(self, name, params, ncolors, kernel, zero_dirs, color_charge,
                 kernel_struct=None):
        self.name = name
        self.params = params
        self.ncolors = ncolors
        self._kernel = kernel
        self.kernel_struct = kernel_struct
        self.zero_dirs = tuple(zero_dirs)
        self.dir_index = {zd.name: k for k, zd in enumerate(self.zero_dirs)}
        self.conj_to_dir = {zd.conj: zd for zd in self.zero_dirs}
        self.color_charge = tuple(color_charge)  # ZForm per color
        self._kcache = {}
        self._states = {}
        self.key_mul = params.key_mul

    def kernel(self, i, j, n):
        v = self._kcache.get((i, j, n))
        if v is None:
            v = self._kernel(i, j, n)
            self._kcache[(i, j, n)] = v
        return v

    def scalarize(self, base, expo):
        """base**expo for a grading-factor base; overridden on the hbar side."""
        kind, val = base
        if kind == "mono":
            return self.params.scalarize(val, expo)
        raise DomainError(f"factor base {kind} unsupported in this domain")

    # -- states -----------------------------------------------------------------
    def state(self, charges, modes):
        key = (charges, modes)
        st = self._states.get(key)
        if st is None:
            st = FockState(self, charges, modes)
            self._states[key] = st
        return st

    def vacuum(self, sector):
        """Sector is a {dir_name: LC} assignment for every zero direction."""
        charges = tuple(sector[zd.name] for zd in self.zero_dirs)
        return self.state(charges, ())

    def charge_value(self, state, dirname):
        return state.charges[self.dir_index[dirname]]

    def basis(self, sector, max_degree):
        """All states of the sector with mode degree <= max_degree."""
        vac = self.vacuum(sector)
        out = [vac]
        for d in range(1, max_degree + 1):
            out.extend(self.state(vac.charges, m)
                       for m in colored_partitions(d, self.ncolors))
        return out


class FockState:
    __slots__ = ("spec", "charges", "modes", "degree", "_hash")

    def __init__(self, spec, charges, modes):
        self.spec = spec
        self.charges = charges        # tuple of LC, one per zero direction
        self.modes = modes            # sorted tuple of (color, k), alpha_{color,-k}
        self.degree = sum(k for _, k in modes)
        self._hash = hash((charges, modes))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other

    def shifted(self, charge_delta, new_modes=None):
        charges = tuple(c + dc for c, dc in zip(self.charges, charge_delta)) \
            if charge_delta is not None else self.charges
        return self.spec.state(charges, self.modes if new_modes is None else new_modes)

    def with_mode_added(self, color, k):
        m = list(self.modes)
        insort(m, (color, k))
        return self.spec.state(self.charges, tuple(m))

    def __repr__(self):
        mode_s = "".join(f"a[{c},-{k}]" for c, k in self.modes) or "1"
        chg = ",".join(f"{zd.name}={c!r}" for zd, c in
                       zip(self.spec.zero_dirs, self.charges))
        return f"{mode_s}|{chg}>"


class FockVector:
    """Finite scalar-weighted combination of interned states."""

    __slots__ = ("d",)

    def __init__(self, d=None):
        self.d = d if d is not None else {}

    @staticmethod
    def of(state, scalar):
        return FockVector({state: scalar} if scalar else {})

    def add_scaled(self, state, scalar):
        v = self.d.get(state)
        if v is None:
            if scalar:
                self.d[state] = scalar
        else:
            v = v + scalar
            if v:
                self.d[state] = v
            else:
                del self.d[state]

    def iadd(self, other, scale=None):
        for st, sc in other.d.items():
            self.add_scaled(st, sc if scale is None else sc * scale)
        return self

    def scaled(self, scalar):
        if not scalar:
            return FockVector()
        return FockVector({st: sc * scalar for st, sc in self.d.items()})

    def __sub__(self, other):
        out = FockVector(dict(self.d))
        for st, sc in other.d.items():
            out.add_scaled(st, -sc)
        return out

    def is_zero(self):
        return not self.d

    def __eq__(self, other):
        if not isinstance(other, FockVector):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def map_scalars(self, f):
        out = FockVector()
        for st, sc in self.d.items():
            out.add_scaled(st, f(sc))
        return out

    def __repr__(self):
        if not self.d:
            return "0"
        return " + ".join(f"({sc!r})*{st!r}" for st, sc in self.d.items())


def colored_partitions(total, ncolors):
    """All mode multisets {(color, k)} of the given total degree, each once."""

    def rec(remaining, kmax, cmax):
        if remaining == 0:
            yield ()
            return
        for k in range(min(remaining, kmax), 0, -1):
            top = cmax if k == kmax else ncolors - 1
            for c in range(top, -1, -1):
                for rest in rec(remaining - k, k, c):
                    yield ((c, k),) + rest

    return [tuple(sorted(p)) for p in rec(total, total, ncolors - 1)]


def apply_mode(spec, color, n, vec):
    """Action of alpha_{color, n}; n < 0 creates, n > 0 annihilates,
    n = 0 acts diagonally when its eigenvalue is a pure number."""
    if not 0 <= color < spec.ncolors:
        raise DomainError(f"unknown color {color}")
    out = FockVector()
    if n < 0:
        k = -n
        for st, sc in vec.d.items():
            out.add_scaled(st.with_mode_added(color, k), sc)
        return out
    if n == 0:
        form = spec.color_charge[color]
        for st, sc in vec.d.items():
            ev = form.eval(_charge_env(st), spec.key_mul)
            out.add_scaled(st, sc * _lc_as_scalar(spec, ev))
        return out
    for st, sc in vec.d.items():
        seen = set()
        for idx, (c2, k) in enumerate(st.modes):
            if k != n or (c2, k) in seen:
                continue
            seen.add((c2, k))
            mult = st.modes.count((c2, k))
            kern = spec.kernel(color, c2, n)
            if kern.is_zero():
                continue
            reduced = list(st.modes)
            reduced.remove((c2, k))
            out.add_scaled(spec.state(st.charges, tuple(reduced)),
                           sc * kern * (n * mult))
    return out


def apply_charge_exp(spec, conj_coeffs, vec, check_lattice=None):
    """Action of exp(sum coeff * conjugate): shifts zero-mode eigenvalues."""
    delta = [LC() for _ in spec.zero_dirs]
    for conj, coeff in conj_coeffs.items():
        zd = spec.conj_to_dir.get(conj)
        if zd is None:
            raise DomainError(f"unknown conjugate zero mode {conj}")
        k = spec.dir_index[zd.name]
        delta[k] = delta[k] + coeff.mul(zd.bracket, spec.key_mul)
    delta = tuple(delta)
    if check_lattice is not None:
        check_lattice(delta)
    out = FockVector()
    for st, sc in vec.d.items():
        out.add_scaled(st.shifted(delta), sc)
    return out


def _charge_env(state):
    spec = state.spec
    return {zd.name: c for zd, c in zip(spec.zero_dirs, state.charges)}


def _lc_as_scalar(spec, ev):
    return spec.params.lc_to_scalar(ev)
