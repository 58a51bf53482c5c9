"""Phase-space transforms: Weyl symbols, the dual Bargmann transform, and
the momentum-space Fourier transform in its plane-wave-overlap form.

Plane waves are normalized as ``<x|p> = exp(i p x/hbar)/sqrt(2 pi hbar)``.
Fock states in position space are Hermite functions of width
``b = sqrt(hbar/alpha)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from .fock import FockSpace
from .quadrature import gauss_legendre


def hermite_functions(n_max, x, b=1.0):
    """``phi_n(x)`` for n = 0..n_max, shape ``(n_max+1,) + x.shape``; stable three-term recurrence."""
    xi = np.asarray(x, dtype=float) / b
    out = np.empty((n_max + 1,) + xi.shape)
    out[0] = (math.pi * b * b) ** -0.25 * np.exp(-0.5 * xi**2)
    if n_max >= 1:
        out[1] = math.sqrt(2.0) * xi * out[0]
    for n in range(1, n_max):
        out[n + 1] = math.sqrt(2.0 / (n + 1)) * xi * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return out


def plane_wave(x, p, hbar=1.0):
    """``<x|p>``."""
    return np.exp(1j * p * np.asarray(x) / hbar) / math.sqrt(2 * math.pi * hbar)


def _kernel(A, x1, x2, b):
    """``<x1|A|x2>`` for matching arrays ``x1``, ``x2``."""
    n = A.shape[0] - 1
    f1 = hermite_functions(n, x1, b)
    f2 = hermite_functions(n, x2, b)
    return np.einsum("m...,mn,n...->...", f1, A, f2)


def weyl_integrands(A, q, p, x, space: FockSpace):
    """Both integrands of the Weyl symbol at offsets ``x``.

    First: ``<q+x/2|A|q-x/2> exp(-i p x/hbar)``.
    Second: ``<q+x/2|A|q-x/2> / (2 pi hbar <q+x/2|p><p|q-x/2>)``.
    """
    A = np.asarray(A)
    hbar = space.hbar
    x = np.asarray(x, dtype=float)
    q = np.broadcast_to(q, x.shape)
    p = np.broadcast_to(p, x.shape)
    K = _kernel(A, q + x / 2, q - x / 2, space.b)
    first = K * np.exp(-1j * p * x / hbar)
    second = K / (2 * math.pi * hbar * plane_wave(q + x / 2, p, hbar) * np.conj(plane_wave(q - x / 2, p, hbar)))
    return first, second


def required_window(space: FockSpace, q, digits=16):
    """Half-width of the x-window covering the Hermite functions at ``q +- x/2``."""
    reach = (math.sqrt(2 * space.cutoff + 1) + math.sqrt(2 * digits * math.log(10))) * space.b
    return 2.0 * (abs(q) + reach)


def weyl_symbol(A, q, p, space: FockSpace, x_max=None, n_x=None, check=True):
    """``integral dx <q+x/2|A|q-x/2> exp(-i p x/hbar)`` by Gauss-Legendre in ``x``.

    With ``check`` the plane-wave-overlap form is evaluated at the same nodes and
    must agree pointwise to ``1e-12`` (relative to the kernel size).
    """
    need = required_window(space, q)
    if x_max is None:
        x_max = need
    elif x_max < need:
        raise ValueError(f"x-window {x_max:.3g} is too small; need at least {need:.3g}")
    if n_x is None:
        # oscillations of phi_n plus the plane wave
        n_x = int(2 * x_max * (math.sqrt(2 * space.cutoff + 1) / space.b + abs(p) / space.hbar) + 200)
    x, w = gauss_legendre(n_x, -x_max, x_max)
    first, second = weyl_integrands(A, q, p, x, space)
    if check:
        scale = max(float(np.max(np.abs(first))), 1e-300)
        gap = float(np.max(np.abs(first - second)))
        if gap > 1e-12 * scale:
            raise ArithmeticError(f"Weyl integrand forms disagree by {gap:.2e}")
    return complex(np.sum(w * first))


def weyl_grid(A, qs, ps, space: FockSpace):
    """Rows ``(q, p, Re A_W, Im A_W)`` for a heat map."""
    rows = []
    for q in qs:
        for p in ps:
            v = weyl_symbol(A, q, p, space)
            rows.append((float(q), float(p), v.real, v.imag))
    return rows


def dual_bargmann(psi, w, segment, n_nodes=32):
    """``integral_gamma dz* psi(z*) exp(-z* w)`` along a straight segment.

    ``psi`` is a vectorized function of ``z*``; ``segment = (start, end)``
    are the endpoints in the ``z*`` plane.
    """
    if n_nodes < 16:
        raise ValueError("n_nodes must be at least 16")
    a, b = complex(segment[0]), complex(segment[1])
    s, ws = gauss_legendre(n_nodes, 0.0, 1.0)
    u = a + (b - a) * s
    return complex((b - a) * np.sum(ws * psi(u) * np.exp(-u * w)))


def dual_bargmann_path(psi, w, vertices, n_nodes=32):
    """Same integral along a polyline through ``vertices``."""
    return sum(dual_bargmann(psi, w, (vertices[i], vertices[i + 1]), n_nodes) for i in range(len(vertices) - 1))


def coherent_bargmann(z0):
    """Bargmann function of ``|z0>``: ``psi(z*) = exp(z* z0 - |z0|^2/2)``."""
    z0 = complex(z0)
    return lambda u: np.exp(np.asarray(u) * z0 - 0.5 * abs(z0) ** 2)


@dataclass
class PositionWavefunction:
    x: np.ndarray
    values: np.ndarray
    hbar: float = 1.0
    alpha: float = 1.0

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        norm = trapezoid(np.abs(self.values) ** 2, self.x)
        if abs(norm - 1.0) > 1e-6:
            raise ValueError(f"wavefunction norm {norm:.8f} differs from 1")

    @classmethod
    def from_fock(cls, amplitudes, x, hbar=1.0, alpha=1.0):
        amplitudes = np.asarray(amplitudes, dtype=complex)
        phi = hermite_functions(len(amplitudes) - 1, x, math.sqrt(hbar / alpha))
        return cls(x, amplitudes @ phi, hbar, alpha)


def momentum_amplitude(psi: PositionWavefunction, p):
    """``(2 pi hbar)^(-1/2) integral psi(x) exp(-i p x/hbar) dx``."""
    return complex(trapezoid(psi.values * np.exp(-1j * p * psi.x / psi.hbar), psi.x) / math.sqrt(2 * math.pi * psi.hbar))


def momentum_amplitude_overlap_form(psi: PositionWavefunction, p):
    """``(2 pi hbar)^(-1) integral psi(x) / <x|p> dx``."""
    return complex(trapezoid(psi.values / plane_wave(psi.x, p, psi.hbar), psi.x) / (2 * math.pi * psi.hbar))


def fourier_identity_check(psi: PositionWavefunction, p):
    """Absolute difference between the two momentum-amplitude forms."""
    return abs(momentum_amplitude(psi, p) - momentum_amplitude_overlap_form(psi, p))


def damped_identity(space: FockSpace, t):
    """``t^(a_dagger a)`` on the truncated space, a Gaussian-damped stand-in for ``I``.

    The truncated identity itself has no pointwise limit (its symbol at the
    origin alternates between 0 and 2 with the cutoff); damping restores one.
    """
    return np.diag(float(t) ** np.arange(space.dim))


def damped_identity_symbol(q, p, t, hbar=1.0, alpha=1.0):
    """Closed-form symbol of ``t^(a_dagger a)``; tends to 1 as ``t -> 1``."""
    r2 = (alpha * np.asarray(q) ** 2 + np.asarray(p) ** 2 / alpha) / hbar
    return 2.0 / (1.0 + t) * np.exp(-(1.0 - t) / (1.0 + t) * r2)


def vacuum_symbol(q, p, hbar=1.0, alpha=1.0):
    """``2 exp(-(alpha q^2 + p^2/alpha)/hbar)``, the symbol of ``|0><0|``."""
    return damped_identity_symbol(q, p, 0.0, hbar, alpha)
