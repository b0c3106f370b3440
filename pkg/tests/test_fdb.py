import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gsbench.errors import PreconditionError
from gsbench.fdb import (Jet, compose_jet, enumerate_partitions, faa_di_bruno,
                         identity_lah, identity_two_power,
                         iter_partition_multi_indices, partition_count,
                         single_jet_compose)

# -- independent oracle: polynomial composition -----------------------------

def poly_compose(h_coeffs, psi_coeffs):
    """Coefficients of h(psi(x)) by exact convolution."""
    out = [Fraction(0)]
    power = [Fraction(1)]  # psi^k
    for k, hk in enumerate(h_coeffs):
        if k:
            new = [Fraction(0)] * (len(power) + len(psi_coeffs) - 1)
            for i, a in enumerate(power):
                if a:
                    for jj, b in enumerate(psi_coeffs):
                        new[i + jj] += a * b
            power = new
        if len(out) < len(power):
            out += [Fraction(0)] * (len(power) - len(out))
        for i, a in enumerate(power):
            out[i] += hk * a
    return out


def poly_jet(coeffs, x0, J):
    vals = []
    for j in range(J + 1):
        acc = Fraction(0)
        for i in range(j, len(coeffs)):
            acc += coeffs[i] * (math.factorial(i) // math.factorial(i - j)) * x0 ** (i - j)
        vals.append(acc)
    return Jet.from_rationals(x0, vals)


def poly_eval(coeffs, x0):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x0 + c
    return acc


rational = st.builds(Fraction,
                     st.integers(min_value=-9, max_value=9),
                     st.integers(min_value=1, max_value=9))
coeff_list = st.lists(rational, min_size=1, max_size=6)


# -- partition machinery ----------------------------------------------------

def test_partition_count_against_known_values():
    # OEIS A000041
    known = {1: 1, 2: 2, 3: 3, 4: 5, 5: 7, 10: 42, 20: 627, 30: 5604}
    for j, p in known.items():
        assert partition_count(j) == p


@pytest.mark.parametrize("j", [1, 2, 3, 5, 8, 12, 20])
def test_enumeration_count_matches_pentagonal_oracle(j):
    assert len(enumerate_partitions(j)) == partition_count(j)


def test_multi_index_invariant():
    for mi in iter_partition_multi_indices(7):
        assert sum((l + 1) * kl for l, kl in enumerate(mi.k_vec)) == 7
        assert 1 <= mi.k <= 7


def test_enumeration_deterministic():
    a = [mi.k_vec for mi in iter_partition_multi_indices(9)]
    b = [mi.k_vec for mi in iter_partition_multi_indices(9)]
    assert a == b == sorted(a)


def test_bad_multi_index_rejected():
    from gsbench.fdb import PartitionMultiIndex
    with pytest.raises(PreconditionError):
        PartitionMultiIndex(3, (1, 0, 1))  # 1*1 + 3*1 = 4 != 3


# -- Faa di Bruno vs the polynomial oracle ----------------------------------

@settings(max_examples=60, deadline=None)
@given(coeff_list, coeff_list,
       st.integers(min_value=1, max_value=8), rational)
def test_fdb_equals_polynomial_composition(h_c, psi_c, j, x0):
    comp = poly_compose(h_c, psi_c)
    expect = poly_jet(comp, x0, j).values[j]
    h_jet = poly_jet(h_c, poly_eval(psi_c, x0), j)
    psi_jet = poly_jet(psi_c, x0, j)
    assert faa_di_bruno(h_jet, psi_jet, j) == expect


def test_fdb_log_path_agrees_with_exact():
    h_c = [Fraction(1), Fraction(-2), Fraction(1, 3), Fraction(2)]
    psi_c = [Fraction(0), Fraction(1), Fraction(-1, 2)]
    for j in range(1, 9):
        h_jet = poly_jet(h_c, poly_eval(psi_c, Fraction(1, 2)), j)
        psi_jet = poly_jet(psi_c, Fraction(1, 2), j)
        exact = faa_di_bruno(h_jet, psi_jet, j)
        logv = faa_di_bruno(h_jet.to_log(), psi_jet.to_log(), j)
        assert logv.to_float() == pytest.approx(float(exact), rel=1e-12, abs=1e-300)


def test_order_zero_returns_h_value():
    h = Jet.from_rationals(0, [Fraction(7), Fraction(1)])
    psi = Jet.from_rationals(0, [Fraction(0), Fraction(1)])
    assert faa_di_bruno(h, psi, 0) == 7


def test_mixed_kinds_rejected():
    h = Jet.from_rationals(0, [Fraction(1), Fraction(1)])
    psi = Jet.from_floats(0.0, [0.0, 1.0])
    with pytest.raises(PreconditionError):
        faa_di_bruno(h, psi, 1)


# -- single-jet shortcut ----------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=8), rational, coeff_list)
def test_single_jet_matches_full_fdb(n, a, psi_c):
    psi_jet = poly_jet(psi_c, Fraction(0), n)
    vals = [Fraction(0)] * (n + 1)
    vals[n] = a
    h_jet = Jet.from_rationals(poly_eval(psi_c, Fraction(0)), vals)
    assert single_jet_compose(h_jet, psi_jet, n) == faa_di_bruno(h_jet, psi_jet, n)


def test_single_jet_rejects_nonconcentrated():
    h = Jet.from_rationals(0, [Fraction(1), Fraction(0), Fraction(1)])
    psi = Jet.from_rationals(0, [Fraction(0), Fraction(1), Fraction(0)])
    with pytest.raises(PreconditionError):
        single_jet_compose(h, psi, 2)


def test_compose_jet_chain_rule_order_one():
    h_c = [Fraction(0), Fraction(3), Fraction(1)]
    psi_c = [Fraction(2), Fraction(-1)]
    comp = poly_compose(h_c, psi_c)
    got = compose_jet(poly_jet(h_c, poly_eval(psi_c, Fraction(1)), 3),
                      poly_jet(psi_c, Fraction(1), 3), 3)
    assert list(got.values) == list(poly_jet(comp, Fraction(1), 3).values)


# -- summation identities ---------------------------------------------------

@pytest.mark.parametrize("j", range(1, 26))
def test_two_power_identity(j):
    assert identity_two_power(j) == 2 ** (j - 1)


@pytest.mark.parametrize("j", range(1, 26))
def test_lah_identity(j):
    identity_lah(j)  # raises on mismatch


def test_identity_range_guard():
    with pytest.raises(PreconditionError):
        identity_two_power(0)
    with pytest.raises(PreconditionError):
        identity_lah(31)
