import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cohframe.fock import FockSpace, coherent_components, ladder_matrices, position_matrix
from cohframe.ladder import A, AD, LadderPolynomial, from_words, harmonic, kerr, normal_order, position, quartic_position


def test_normal_order_basic():
    assert normal_order((A, AD)) == {(1, 1): 1.0, (0, 0): 1.0}
    assert normal_order((AD, A)) == {(1, 1): 1.0}
    # a a a_dagger = a_dagger a a + 2 a
    assert normal_order((A, A, AD)) == {(1, 2): 1.0, (0, 1): 2.0}


def test_kerr_coefficients():
    # (a_dagger a)^2 = a_dagger^2 a^2 + a_dagger a
    assert kerr(1.0).coeffs == {(2, 2): 1.0, (1, 1): 1.0}


def test_hermiticity_flags():
    assert harmonic().is_hermitian()
    assert quartic_position(0.3).is_hermitian()
    assert not LadderPolynomial({(0, 1): 1.0}).is_hermitian()


def test_matrix_matches_operator_products():
    sp = FockSpace(30)
    k = 14
    q = position_matrix(sp)
    want = np.linalg.matrix_power(q, 4)
    got = quartic_position(1.0).matrix(sp)
    # truncation corrupts only the top rows of the product q^4
    assert np.max(np.abs(got[:k, :k] - want[:k, :k])) < 1e-10


def test_truncated_normal_ordered_matrix_is_exact():
    sp = FockSpace(10)
    a, ad = ladder_matrices(FockSpace(40))
    full = ad @ ad @ a @ a + ad @ a
    got = kerr(1.0).matrix(sp)
    assert np.max(np.abs(got - full[:11, :11])) < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.complex_numbers(max_magnitude=1.5), st.complex_numbers(max_magnitude=1.5))
def test_weak_value_closed_form_vs_fock(u, v):
    sp = FockSpace(80)
    H = quartic_position(0.7) + harmonic(1.3)
    bu, kv = coherent_components(u, 80), coherent_components(v, 80)
    fock = np.vdot(bu, H.matrix(sp) @ kv) / np.vdot(bu, kv)
    assert abs(H.weak_value(u, v) - fock) < 1e-8 * max(1.0, abs(fock))


def test_commutators():
    sp = FockSpace(40)
    a, ad = ladder_matrices(sp)
    H = kerr(0.4) + position(1.0)
    M = H.matrix(sp)
    k = 20
    ca = (a @ M - M @ a)[:k, :k]
    cad = (ad @ M - M @ ad)[:k, :k]
    assert np.max(np.abs(H.commutator_with_a().matrix(sp)[:k, :k] - ca)) < 1e-12
    assert np.max(np.abs(H.commutator_with_ad().matrix(sp)[:k, :k] - cad)) < 1e-12


def test_from_words_adds_terms():
    H = from_words([(2.0, (AD, A)), (1.0, (A, AD))])
    assert H.coeffs == {(1, 1): 3.0, (0, 0): 1.0}
    assert H.degree == 2
    assert (H + harmonic()).coeffs[(1, 1)] == pytest.approx(4.0)
