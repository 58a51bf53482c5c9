import math

import numpy as np
import pytest
from scipy.integrate import trapezoid

from cohframe.fock import FockSpace
from cohframe.transforms import (
    PositionWavefunction,
    coherent_bargmann,
    damped_identity,
    damped_identity_symbol,
    dual_bargmann,
    dual_bargmann_path,
    fourier_identity_check,
    hermite_functions,
    momentum_amplitude,
    plane_wave,
    required_window,
    vacuum_symbol,
    weyl_grid,
    weyl_integrands,
    weyl_symbol,
)


def test_hermite_orthonormal():
    x = np.linspace(-15, 15, 6001)
    phi = hermite_functions(12, x, 1.3)
    G = trapezoid(phi[:, None, :] * phi[None, :, :], x)
    assert np.max(np.abs(G - np.eye(13))) < 1e-10


def test_plane_wave_normalization():
    assert abs(plane_wave(0.0, 1.0, 0.5)) == pytest.approx(1 / math.sqrt(math.pi))


def test_integrand_forms_agree_at_random_triples():
    rng = np.random.default_rng(0)
    sp = FockSpace(10, hbar=0.8, alpha=1.2)
    A = rng.normal(size=(11, 11)) + 1j * rng.normal(size=(11, 11))
    q = rng.uniform(-3, 3, 1000)
    p = rng.uniform(-3, 3, 1000)
    x = rng.uniform(-6, 6, 1000)
    first, second = weyl_integrands(A, q, p, x, sp)
    scale = np.max(np.abs(first))
    assert np.max(np.abs(first - second)) <= 1e-12 * scale


@pytest.mark.parametrize("q,p", [(0.0, 0.0), (0.5, -0.3), (1.0, 1.2)])
def test_vacuum_symbol(q, p):
    sp = FockSpace(8, hbar=0.7, alpha=1.3)
    A = np.zeros((9, 9))
    A[0, 0] = 1
    assert abs(weyl_symbol(A, q, p, sp) - vacuum_symbol(q, p, 0.7, 1.3)) < 1e-6


def test_vacuum_symbol_oracle():
    # Gaussian x-integral of phi_0(q+x/2) phi_0(q-x/2) exp(-ipx) with b = 1
    x = np.linspace(-20, 20, 4001)
    q, p = 0.4, 0.7
    f = math.pi ** -0.5 * np.exp(-q * q - x * x / 4) * np.exp(-1j * p * x)
    assert abs(trapezoid(f, x) - vacuum_symbol(q, p)) < 1e-12


def test_damped_identity_symbol():
    sp = FockSpace(150, hbar=0.7, alpha=1.3)
    A = damped_identity(sp, 0.8)
    for q, p in [(0.0, 0.0), (0.6, -0.4)]:
        assert abs(weyl_symbol(A, q, p, sp) - damped_identity_symbol(q, p, 0.8, 0.7, 1.3)) < 1e-10


def test_damped_identity_tends_to_one():
    q, p = np.meshgrid(np.linspace(-1, 1, 5), np.linspace(-1, 1, 5))
    assert np.max(np.abs(damped_identity_symbol(q, p, 1 - 1e-5) - 1)) < 1e-4
    assert damped_identity_symbol(0.0, 0.0, 0.0) == pytest.approx(2.0)


def test_hermitian_symbol_is_real():
    rng = np.random.default_rng(5)
    M = rng.normal(size=(7, 7)) + 1j * rng.normal(size=(7, 7))
    H = M + M.conj().T
    sp = FockSpace(6)
    rows = weyl_grid(H, [-1.0, 0.0, 0.8], [-0.5, 0.3], sp)
    assert len(rows) == 6
    assert max(abs(r[3]) for r in rows) < 1e-10 * max(abs(r[2]) for r in rows)


def test_window_too_small():
    sp = FockSpace(6)
    with pytest.raises(ValueError, match="x-window"):
        weyl_symbol(np.eye(7), 0.5, 0.0, sp, x_max=0.5 * required_window(sp, 0.5))


def test_bargmann_antiderivative():
    z0, w, s = 0.6 - 0.2j, 0.1 + 0.4j, 1.3 + 0.5j
    got = dual_bargmann(coherent_bargmann(z0), w, (0, s))
    want = math.exp(-0.5 * abs(z0) ** 2) * (np.exp(s * (z0 - w)) - 1) / (z0 - w)
    assert abs(got - want) < 1e-10


def test_bargmann_degenerate_direction():
    z0, s = 0.6 - 0.2j, 0.8 + 0.9j
    got = dual_bargmann(coherent_bargmann(z0), z0, (0, s))
    assert abs(got - s * math.exp(-0.5 * abs(z0) ** 2)) < 1e-12


def test_bargmann_path_independence():
    psi = coherent_bargmann(0.3 + 0.5j)
    w = -0.2 + 0.1j
    direct = dual_bargmann(psi, w, (0.1, 1.0 + 1.0j))
    bent = dual_bargmann_path(psi, w, [0.1, -0.7 + 0.4j, 1.0 + 1.0j])
    assert abs(direct - bent) < 1e-10


def test_bargmann_linear_and_conjugate_symmetric():
    f, g = coherent_bargmann(0.4), coherent_bargmann(-0.3j)
    w, seg = 0.2 - 0.1j, (0.0, 0.7 + 0.3j)
    combo = dual_bargmann(lambda u: 2 * f(u) - 1j * g(u), w, seg)
    assert abs(combo - (2 * dual_bargmann(f, w, seg) - 1j * dual_bargmann(g, w, seg))) < 1e-13
    h = coherent_bargmann(0.4 + 0.3j)
    hbar_fn = lambda u: np.conj(h(np.conj(u)))  # noqa: E731
    lhs = dual_bargmann(hbar_fn, np.conj(w), (np.conj(seg[0]), np.conj(seg[1])))
    assert abs(lhs - np.conj(dual_bargmann(h, w, seg))) < 1e-13


def test_bargmann_node_floor():
    with pytest.raises(ValueError):
        dual_bargmann(coherent_bargmann(0), 0, (0, 1), n_nodes=8)


@pytest.fixture(scope="module")
def ground():
    x = np.linspace(-20, 20, 8001)
    return PositionWavefunction.from_fock([1.0], x)


@pytest.mark.parametrize("p", [0.0, 1.0])
def test_fourier_forms(ground, p):
    assert fourier_identity_check(ground, p) < 1e-12


def test_momentum_gaussian(ground):
    for p in (0.0, 1.0, -1.7):
        want = math.pi ** -0.25 * math.exp(-0.5 * p * p)
        assert abs(abs(momentum_amplitude(ground, p)) - want) < 1e-8


def test_first_excited_is_odd_in_p():
    x = np.linspace(-20, 20, 8001)
    psi = PositionWavefunction.from_fock([0.0, 1.0], x, hbar=0.5, alpha=2.0)
    for p in (0.3, 1.1):
        a, b = momentum_amplitude(psi, p), momentum_amplitude(psi, -p)
        assert abs(a + b) < 1e-12 and abs(a) > 1e-3


def test_norm_check():
    x = np.linspace(-10, 10, 2001)
    with pytest.raises(ValueError, match="norm"):
        PositionWavefunction(x, 2 * hermite_functions(0, x)[0])
