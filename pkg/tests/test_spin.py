import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from cohframe.spin import (
    SpinSystem,
    beta_oracle,
    spin_closure_2d,
    spin_coherent,
    spin_components,
    spin_overlap,
    spin_standard_closure,
    spin_unlike_closure,
)

TWO_J = [1, 2, 3, 4]


def test_system():
    s = SpinSystem(3)
    assert s.j == 1.5 and s.dim == 4
    assert np.allclose(s.m_values(), [1.5, 0.5, -0.5, -1.5])
    with pytest.raises(ValueError):
        SpinSystem(-1)


def test_highest_weight():
    assert np.allclose(spin_coherent(SpinSystem(4), 0).components, np.eye(5)[0])


def test_spin_half_components():
    c = spin_coherent(SpinSystem(1), 1.0).components
    assert np.allclose(c, [1 / math.sqrt(2), 1 / math.sqrt(2)], atol=1e-15)


def test_inner_product_formula():
    s = SpinSystem(2)
    w, w2 = 0.5, -0.3j
    direct = np.vdot(spin_coherent(s, w).components, spin_coherent(s, w2).components)
    formula = (1 + abs(w) ** 2) ** -1 * (1 + abs(w2) ** 2) ** -1 * (1 + np.conj(w) * w2) ** 2
    assert abs(direct - formula) < 1e-12
    assert abs(spin_overlap(s, w, w2) - formula) < 1e-15


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 8), st.complex_numbers(max_magnitude=5), st.complex_numbers(max_magnitude=5))
def test_overlap_bounded(two_j, w, w2):
    s = SpinSystem(two_j)
    c = spin_components(s, w)
    assert abs(np.vdot(c, c) - 1) < 1e-12
    ov = abs(np.vdot(c, spin_components(s, w2)))
    assert ov <= 1 + 1e-12
    if abs(w - w2) > 1e-3 and two_j > 0:
        assert ov < 1


@pytest.mark.parametrize("two_j", TWO_J)
def test_beta_oracle(two_j):
    assert np.max(np.abs(beta_oracle(SpinSystem(two_j)) - 1)) < 1e-12


def test_beta_oracle_by_quadrature():
    # (2j+1) C(2j,n) int_0^inf x^n (1+x)^(-2j-2) dx = 1
    two_j = 3
    for n in range(two_j + 1):
        val, _ = quad(lambda x: x**n * (1 + x) ** (-two_j - 2), 0, math.inf)
        assert (two_j + 1) * math.comb(two_j, n) * val == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("two_j", [1, 4])
def test_standard_closure(two_j):
    rep = spin_standard_closure(SpinSystem(two_j))
    assert rep.dev_max < 1e-10
    off = rep.matrix - np.diag(np.diag(rep.matrix))
    assert np.all(off == 0)


@pytest.mark.parametrize("two_j", TWO_J)
@pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
def test_unlike_closure(two_j, lam):
    rep = spin_unlike_closure(SpinSystem(two_j), lam)
    assert rep.dev_max < 1e-10


def test_unlike_rejects_nonpositive():
    with pytest.raises(ValueError):
        spin_unlike_closure(SpinSystem(1), -1.0)


@pytest.mark.parametrize("two_j", TWO_J)
def test_full_grid_cross_check(two_j):
    s = SpinSystem(two_j)
    reduced = spin_unlike_closure(s, 1.0).matrix
    full = spin_closure_2d(s, 1.0).matrix
    assert np.max(np.abs(full - reduced)) < 1e-8
    full_lam = spin_closure_2d(s, 2.0, n_radial=200).matrix
    assert np.max(np.abs(full_lam - np.eye(s.dim))) < 1e-8
