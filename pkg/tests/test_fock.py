"""Fock-module layer: kernels, basis enumeration, mode and charge-shift actions."""

from fractions import Fraction

import pytest

from qtoro2.fock import FockVector, apply_charge_exp, apply_mode, colored_partitions
from qtoro2.lincomb import LC
from qtoro2.params import DeformedParams, KBETA, KU, KUNIT
from qtoro2.specs import (sector_decoupled, sector_single, spec_decoupled,
                          spec_single, spec_tensor)


@pytest.fixture(scope="module")
def P():
    return DeformedParams()


@pytest.fixture(scope="module")
def single(P):
    return spec_single(P)


@pytest.fixture(scope="module")
def dec(P):
    return spec_decoupled(P)


def vac(spec, sector):
    return FockVector.of(spec.vacuum(sector), spec.params.tab.one)


def test_basis_counts(single, P):
    # degree-d dimension is the t^d coefficient of prod (1-t^n)^(-2)
    sec = sector_single(P)
    per_degree = {}
    for st in single.basis(sec, 5):
        per_degree[st.degree] = per_degree.get(st.degree, 0) + 1
    assert per_degree == {0: 1, 1: 2, 2: 5, 3: 10, 4: 20, 5: 36}
    assert len(colored_partitions(3, 2)) == 10
    assert colored_partitions(0, 2) == [()]


def test_highest_weight_annihilation(single, P):
    v = vac(single, sector_single(P))
    assert apply_mode(single, 0, 1, v).is_zero()


def test_single_kernel_diagonal(single, P):
    # alpha_{1,1} alpha_{1,-1} |0,u> = (1 + q2^{-1}) |0,u>
    v = vac(single, sector_single(P))
    w = apply_mode(single, 0, 1, apply_mode(single, 0, -1, v))
    expect = v.scaled(P.tab.one + P.q2.inverse())
    assert w == expect


def test_single_kernel_cross(single, P):
    # alpha_{1,2} alpha_{2,-2} |0,u> = -2 (q1^2 + q3^2) |0,u>
    v = vac(single, sector_single(P))
    w = apply_mode(single, 0, 2, apply_mode(single, 1, -2, v))
    assert w == v.scaled(-(P.q1 ** 2 + P.q3 ** 2) * 2)


def test_bracket_as_operator_identity(single, P):
    # [alpha_{i,n}, alpha_{j,m}] v = n kappa delta_{n+m,0} v on all basis v
    sec = sector_single(P)
    basis = single.basis(sec, 3)
    for i, j, n, m in ((0, 0, 2, -2), (0, 1, 1, -1), (1, 0, -3, 3), (0, 1, 2, -1)):
        for st in basis:
            v = FockVector.of(st, P.tab.one)
            lhs = apply_mode(single, i, n, apply_mode(single, j, m, v)) \
                - apply_mode(single, j, m, apply_mode(single, i, n, v))
            if n + m == 0:
                assert lhs == v.scaled(single.kernel(i, j, n) * n)
            else:
                assert lhs.is_zero()


def test_charge_shift_single(single, P):
    # e^{chf_1} raises the alpha_{1,0} eigenvalue by 2
    v = vac(single, sector_single(P))
    w = apply_charge_exp(single, {"chf": P.lc(1)}, v)
    (st,) = w.d
    assert single.charge_value(st, "a0") == P.lc(2)
    # e^0 v = v
    assert apply_charge_exp(single, {"chf": LC()}, v) == v


def test_charge_shift_zeo(dec, P):
    # e^{tau_+ zch} shifts the ze eigenvalue by tau_+ * beta/2 = 1/2,
    # e^{tau_- zch} by -beta/2 (a beta-valued shift)
    v = vac(dec, sector_decoupled(P))
    base = dec.vacuum(sector_decoupled(P)).charges[dec.dir_index["ze"]]
    w = apply_charge_exp(dec, {"zch": LC({(-1, 0): 1})}, v)   # tau_+ = 1/beta
    (st,) = w.d
    assert dec.charge_value(st, "ze") == base + P.lc(Fraction(1, 2))
    w2 = apply_charge_exp(dec, {"zch": P.lc(-1)}, v)          # tau_- = -1
    (st2,) = w2.d
    assert dec.charge_value(st2, "ze") == base + LC({KBETA: Fraction(-1, 2)})


def test_decoupled_kernel_antisymmetry(dec, P):
    # kappa(i,j,n) = kappa(j,i,-n) for the signed-kernel algebra
    for n in range(1, 7):
        assert dec.kernel(0, 1, n) == dec.kernel(1, 0, -n)


def test_apply_mode_degree_bookkeeping(single, P):
    sec = sector_single(P)
    for st in single.basis(sec, 3):
        v = FockVector.of(st, P.tab.one)
        for n in (-2, -1, 1, 2):
            for c in (0, 1):
                w = apply_mode(single, c, n, v)
                for st2 in w.d:
                    assert st2.degree == st.degree - n


def test_tensor_kernel_blocks(P):
    tens = spec_tensor(P)
    assert tens.kernel(0, 2, 3).is_zero()
    assert tens.kernel(1, 3, 2).is_zero()
    assert tens.kernel(2, 3, 2) == -(P.q1 ** 2 + P.q3 ** 2)
    assert tens.kernel(2, 2, 5) == P.tab.one + P.q2 ** -5
