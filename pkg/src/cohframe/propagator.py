"""Coherent-state propagator ``K(z', z'', T) = <z''| exp(-i T H/hbar) |z'>``.

Three routes are provided:

* :func:`exact_propagator` -- eigendecomposition of the truncated Hamiltonian;
* :func:`insertion_identity_check` -- one Weyl-offset closure inserted at T/2;
* :func:`discrete_propagator` -- the sliced phase-space integral with
  factors ``F_n exp(-i tau H_n / hbar)`` (nested quadrature for N <= 2,
  seeded Monte Carlo beyond).

:func:`weak_action` evaluates the surface term and generalized action of a
sampled path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.integrate import simpson

from .closure import log_overlap
from .fock import FockSpace, CutoffError, coherent_components, coherent_vector, evolve
from .ladder import LadderPolynomial
from .quadrature import (
    CHUNK,
    angular_count,
    auto_radius,
    build_polar_grid,
    compensated_sum,
    radial_count,
)


class Method(str, Enum):
    EXACT = "exact"
    QUADRATURE = "discrete-quadrature"
    MONTE_CARLO = "monte-carlo"


@dataclass(frozen=True)
class PropagatorResult:
    value: complex
    method: Method
    error_estimate: float
    n_slices: int


def _matrix(H, space):
    if isinstance(H, LadderPolynomial):
        return H.matrix(space)
    H = np.asarray(H)
    if H.shape != (space.dim, space.dim):
        raise ValueError("matrix Hamiltonian does not match the Fock space")
    return H


def _propagate(z1, z2, T, H, space, max_tail):
    U = evolve(space, _matrix(H, space), T)
    ket = coherent_vector(space, z1, max_tail).amplitudes
    bra = coherent_vector(space, z2, max_tail).amplitudes
    return complex(np.vdot(bra, U @ ket))


def exact_propagator(z1, z2, T, H, space: FockSpace = None, cutoff=60, tol=1e-10,
                     max_tail=1e-12) -> PropagatorResult:
    """``<z2| exp(-i T H/hbar) |z1>`` by truncated eigendecomposition.

    For a :class:`LadderPolynomial` the cutoff is doubled once and the change
    is the error estimate; a change above ``tol`` raises :class:`CutoffError`.
    A bare matrix fixes the space, and the estimate is the coherent-state tail.
    """
    if space is None:
        space = FockSpace(cutoff)
    if isinstance(H, LadderPolynomial):
        v = _propagate(z1, z2, T, H, space, max_tail)
        big = FockSpace(2 * space.cutoff + 1, space.hbar, space.alpha)
        v2 = _propagate(z1, z2, T, H, big, max_tail)
        err = abs(v2 - v)
        if err > tol:
            raise CutoffError(f"propagator changed by {err:.1e} when doubling the cutoff", 2 * big.cutoff)
        return PropagatorResult(v2, Method.EXACT, err, 0)
    v = _propagate(z1, z2, T, H, space, max_tail)
    return PropagatorResult(v, Method.EXACT, 2 * max_tail, 0)


def oscillator_propagator(z1, z2, T, omega=1.0):
    """Closed form ``exp(-i w T/2) exp(-|z'|^2/2 - |z''|^2/2 + z''* z' exp(-i w T))``."""
    z1, z2 = complex(z1), complex(z2)
    return complex(
        np.exp(-0.5j * omega * T)
        * np.exp(-0.5 * abs(z1) ** 2 - 0.5 * abs(z2) ** 2 + np.conj(z2) * z1 * np.exp(-1j * omega * T))
    )


def insertion_identity_check(z1, z2, T, zeta, H, space: FockSpace = None, cutoff=60, tol=1e-10,
                             grid=None, return_value=False):
    """``|integral d^2z/pi <z''|U(T/2)|z-zeta><z+zeta|U(T/2)|z'> / <z+zeta|z-zeta> - K|``.

    Only the overlaps with ``U(T/2)|z'>`` and ``<z''|U(T/2)`` enter, so the
    truncated coherent vectors at the grid nodes need no tail control of their own.
    """
    zeta = complex(zeta)
    if abs(zeta) > 1:
        raise ValueError("|zeta| <= 1 required")
    if space is None:
        space = FockSpace(cutoff)
    U = evolve(space, _matrix(H, space), T / 2)
    right = U @ coherent_vector(space, z1, 1e-12).amplitudes
    left = U.conj().T @ coherent_vector(space, z2, 1e-12).amplitudes
    if grid is None:
        # evolved packets stay within max(|z'|, |z''|) of the origin for bounded dynamics
        spread = max(abs(complex(z1)), abs(complex(z2))) + abs(zeta)
        R = auto_radius(tol, 0.5, 2) + spread
        grid = build_polar_grid(R, radial_count(2, 0.5, R), angular_count(2, zeta, R), 0.5)
    z = grid.nodes
    ket_lab = z - zeta
    bra_lab = z + zeta
    vals = np.empty(len(z), dtype=complex)
    for start in range(0, len(z), CHUNK):
        sl = slice(start, start + CHUNK)
        kets = np.stack([coherent_components(k, space.cutoff) for k in ket_lab[sl]])
        bras = np.stack([coherent_components(b, space.cutoff) for b in bra_lab[sl]])
        a = kets @ np.conj(left)  # <z''|U|z-zeta>
        b = np.conj(bras) @ right  # <z+zeta|U|z'>
        vals[sl] = a * b * np.exp(-log_overlap(bra_lab[sl], ket_lab[sl]))
    value = complex(grid.integrate(vals))
    exact = complex(np.vdot(coherent_vector(space, z2, 1e-12).amplitudes,
                            evolve(space, _matrix(H, space), T) @ coherent_vector(space, z1, 1e-12).amplitudes))
    diff = abs(value - exact)
    if return_value:
        return diff, value
    return diff


# --- sliced path integral ----------------------------------------------------


def _log_slice(H, hbar, tau, post, pre, denom_post, denom_pre):
    """``log F_n - i tau H_n / hbar`` for vectors of labels.

    ``F_n = <post|pre> / <denom_post|denom_pre>`` and ``H_n`` is the weak value
    ``<post|H|pre>/<post|pre>`` (closed form for ladder polynomials).
    """
    lf = log_overlap(post, pre) - log_overlap(denom_post, denom_pre)
    hn = H.weak_value(post, pre)
    return lf - 1j * tau * hn / hbar


def _slice_product(H, hbar, tau, z, zeta, zs):
    """Integrand ``prod_n F_n exp(-i tau H_n/hbar)`` with interior nodes ``zs`` (list of arrays)."""
    N = len(zs)
    # labels: z_0 = z', z_{N+1} = z'' - zeta_{N+1}
    full = [np.asarray(z[0], dtype=complex)] + list(zs) + [np.asarray(z[-1], dtype=complex)]
    total = 0
    for n in range(N + 1):
        post = full[n + 1] + zeta[n + 1]
        pre = full[n] - zeta[n]
        total = total + _log_slice(H, hbar, tau, post, pre, full[n] + zeta[n], full[n] - zeta[n])
    return np.exp(total)


def discrete_propagator(z1, z2, T, N, zeta_schedule, H: LadderPolynomial, hbar=1.0, tol=1e-10,
                        grid=None, monte_carlo=False, seed=None, samples=200_000) -> PropagatorResult:
    """Sliced path integral with ``N`` inserted Weyl-offset closures.

    ``zeta_schedule`` holds ``zeta_0..zeta_{N+1}``; ``zeta_0`` must be 0.
    Slices use ``exp(-i tau H_n/hbar)`` with ``tau = T/(N+1)``, which differs
    from the exact propagator at ``O(tau^2)`` per slice.  For ``N <= 2`` the
    integral is a nested polar quadrature; larger ``N`` needs
    ``monte_carlo=True`` and an explicit ``seed``.

    ``error_estimate`` adds the quadrature error (change under grid
    refinement, or the Monte Carlo standard error) to a slicing term
    ``A T^2/(N+1)``.  ``A T^2`` is fitted from one halving of ``tau``: the
    unsliced value (N=0) and the N=1 value differ by about ``A T^2/2``.
    """
    if not isinstance(H, LadderPolynomial):
        raise TypeError("discrete_propagator needs a LadderPolynomial Hamiltonian")
    zeta = np.asarray(zeta_schedule, dtype=complex)
    if zeta.shape != (N + 2,):
        raise ValueError(f"zeta schedule needs {N + 2} entries, got {zeta.shape}")
    if zeta[0] != 0:
        raise ValueError("zeta_0 must be 0")
    if N < 0:
        raise ValueError("N must be nonnegative")
    tau = T / (N + 1)
    ends = (complex(z1), complex(z2) - zeta[-1])
    if N == 0:
        v = complex(_slice_product(H, hbar, tau, ends, zeta, []))
        return PropagatorResult(v, Method.QUADRATURE, 0.0, 1)
    if N > 2 and not monte_carlo:
        raise ValueError("N > 2 requires monte_carlo=True")
    if monte_carlo and seed is None:
        raise ValueError("Monte Carlo mode requires an explicit seed")
    if grid is None:
        grid = _path_grid(ends, zeta, tol, N)
    slicing = _slicing_error(z1, z2, T, H, hbar, tol, N)
    if monte_carlo:
        v, err = _mc_integral(H, hbar, tau, ends, zeta, N, seed, samples)
        return PropagatorResult(v, Method.MONTE_CARLO, err + slicing, N + 1)
    v = _nested(H, hbar, tau, ends, zeta, N, grid)
    fine = grid.refined() if N == 1 else build_polar_grid(
        grid.radius, grid.n_radial + grid.n_radial // 2, grid.n_angular + grid.n_angular // 2,
        grid.kappa, grid.center)
    v_fine = _nested(H, hbar, tau, ends, zeta, N, fine)
    return PropagatorResult(v_fine, Method.QUADRATURE, abs(v_fine - v) + slicing, N + 1)


def _slicing_error(z1, z2, T, H, hbar, tol, N):
    """``A T^2/(N+1)`` with ``A T^2 = 2 |K_0 - K_1|`` (zeta = 0 schedules)."""
    ends = (complex(z1), complex(z2))
    k0 = complex(_slice_product(H, hbar, T, ends, np.zeros(2), []))
    zero = np.zeros(3)
    k1 = _nested(H, hbar, T / 2, ends, zero, 1, _path_grid(ends, zero, tol, 1))
    return 2.0 * abs(k0 - k1) / (N + 1)


def _path_grid(ends, zeta, tol, N):
    centers = [ends[0], ends[1]] + [e + s * d for e in ends for d in zeta for s in (1, -1)]
    osc = float(np.max(np.abs(zeta))) * 2
    c = complex(np.mean(ends))
    spread = max(abs(x - c) for x in centers)
    R = auto_radius(tol, 0.5, 2) + spread
    nr = radial_count(2, 0.5, R) if N == 1 else 32
    na = angular_count(2, osc, R) if N == 1 else 28
    return build_polar_grid(R, nr, na, 0.5, c)


def _nested(H, hbar, tau, ends, zeta, N, grid):
    z, w = grid.nodes, grid.weights
    if N == 1:
        return complex(compensated_sum(w * _slice_product(H, hbar, tau, ends, zeta, [z])))
    # N == 2: outer loop over z_1 in chunks, inner sum over z_2
    partial = np.empty(len(z), dtype=complex)
    for start in range(0, len(z), 64):
        z1 = z[start : start + 64, None]
        vals = _slice_product(H, hbar, tau, ends, zeta, [z1, z[None, :]])
        partial[start : start + 64] = compensated_sum(vals * w[None, :], axis=1)
    return complex(compensated_sum(w * partial))


def _mc_integral(H, hbar, tau, ends, zeta, N, seed, samples):
    """Importance sampling from the Gaussian bridge between ``z'`` and ``z''``.

    The proposal density is proportional to ``prod_n exp(-|z_{n+1} - z_n|^2/2)``,
    the modulus of the chain of overlaps, with the endpoints held fixed.
    Each real coordinate is then normal with covariance ``L^{-1}``, ``L`` the
    Dirichlet path Laplacian.  Batches draw from child seeds of
    :class:`numpy.random.SeedSequence`, so one seed gives one estimate.
    """
    L = 2.0 * np.eye(N) - np.eye(N, k=1) - np.eye(N, k=-1)
    chol = np.linalg.cholesky(np.linalg.inv(L))
    _, logdet = np.linalg.slogdet(L)
    steps = (np.arange(1, N + 1) / (N + 1))[:, None]
    mean = ends[0] + (ends[1] - ends[0]) * steps
    batches = max(1, samples // 20_000)
    m = samples // batches
    vals = []
    for seq in np.random.SeedSequence(seed).spawn(batches):
        rng = np.random.default_rng(seq)
        dx = chol @ rng.standard_normal((N, m))
        dy = chol @ rng.standard_normal((N, m))
        zs = mean + dx + 1j * dy
        quad = np.einsum("im,ij,jm->m", dx, L, dx) + np.einsum("im,ij,jm->m", dy, L, dy)
        log_q = -N * math.log(2 * math.pi) + logdet - 0.5 * quad
        # measure prod d^2z/pi against the proposal density
        vals.append(_slice_product(H, hbar, tau, ends, zeta, list(zs)) * np.exp(-log_q - N * math.log(math.pi)))
    vals = np.concatenate(vals)
    return complex(np.mean(vals)), float(np.std(vals) / math.sqrt(len(vals)))


def slicing_error_fit(z1, z2, T_values, H, exact, N=1, zeta_schedule=None, **kwargs):
    """Fit ``|K_discrete - K_exact| ~ C tau^p`` over several total times at fixed ``N``.

    ``exact(T)`` returns the reference propagator.  Returns ``(p, C, rows)``
    with rows ``(T, tau, |error|)``.
    """
    rows = []
    for T in T_values:
        sched = np.zeros(N + 2, dtype=complex) if zeta_schedule is None else zeta_schedule
        res = discrete_propagator(z1, z2, T, N, sched, H, **kwargs)
        tau = T / (N + 1)
        rows.append((T, tau, abs(res.value - exact(T))))
    taus = np.array([r[1] for r in rows])
    errs = np.array([r[2] for r in rows])
    p, logC = np.polyfit(np.log(taus), np.log(errs), 1)
    return float(p), float(math.exp(logC)), rows


# --- paths and actions -------------------------------------------------------


@dataclass
class PathSpec:
    """Sampled path ``z(t_k)``, ``zeta(t_k)`` on ``t_k = k T/(len-1)``; ``zeta(0) = 0``."""

    z_samples: np.ndarray
    zeta_samples: np.ndarray
    T: float
    H: object
    hbar: float = 1.0
    space: FockSpace = None

    def __post_init__(self):
        self.z_samples = np.asarray(self.z_samples, dtype=complex)
        self.zeta_samples = np.asarray(self.zeta_samples, dtype=complex)
        if self.z_samples.shape != self.zeta_samples.shape:
            raise ValueError("z and zeta sample counts differ")
        if self.zeta_samples[0] != 0:
            raise ValueError("zeta(0) must be 0")
        if not self.T > 0:
            raise ValueError("T must be positive")

    @property
    def times(self):
        return np.linspace(0.0, self.T, len(self.z_samples))

    @property
    def endpoint(self):
        """``z'' = z(T) + zeta(T)``."""
        return self.z_samples[-1] + self.zeta_samples[-1]

    @classmethod
    def from_json(cls, data, H, **kwargs):
        """``data`` has ``z``, ``zeta`` (lists of ``[re, im]``) and ``T``."""
        z = np.array([complex(a, b) for a, b in data["z"]])
        zeta = np.array([complex(a, b) for a, b in data["zeta"]])
        return cls(z, zeta, float(data["T"]), H, **kwargs)

    def to_json(self):
        return {
            "z": [[float(x.real), float(x.imag)] for x in self.z_samples],
            "zeta": [[float(x.real), float(x.imag)] for x in self.zeta_samples],
            "T": self.T,
        }


def _weak_energy(path: PathSpec):
    post = path.z_samples + path.zeta_samples
    pre = path.z_samples - path.zeta_samples
    if isinstance(path.H, LadderPolynomial):
        return path.H.weak_value(post, pre)
    space = path.space or FockSpace(np.asarray(path.H).shape[0] - 1, path.hbar)
    H = np.asarray(path.H)
    out = np.empty(len(post), dtype=complex)
    for k, (u, v) in enumerate(zip(post, pre)):
        bra = coherent_vector(space, u, 1e-10).amplitudes
        ket = coherent_vector(space, v, 1e-10).amplitudes
        out[k] = np.vdot(bra, H @ ket) / np.vdot(bra, ket)
    return out


def time_integral(values, t):
    """Composite Simpson rule on the sample grid (trapezoid for two samples)."""
    return complex(simpson(values, x=t))


def weak_action(path: PathSpec):
    """``(surface, action)`` for a sampled path.

    surface = ``-zeta(T) (z''* + zeta*(T))``;
    action  = ``integral [ i hbar/2 (z+zeta)* (zdot - zetadot)
                           - i hbar/2 (z-zeta) (zdot + zetadot)* - H_zeta ] dt``.
    Derivatives are second-order finite differences (one-sided at the ends).
    """
    if len(path.z_samples) < 3:
        raise ValueError("need at least 3 time samples")
    t = path.times
    z, zeta, hbar = path.z_samples, path.zeta_samples, path.hbar
    zd = np.gradient(z, t, edge_order=2)
    zetad = np.gradient(zeta, t, edge_order=2)
    kinetic = 0.5j * hbar * (np.conj(z + zeta) * (zd - zetad) - (z - zeta) * np.conj(zd + zetad))
    action = time_integral(kinetic - _weak_energy(path), t)
    zT = zeta[-1]
    surface = complex(-zT * (np.conj(path.endpoint) + np.conj(zT)))
    return surface, action
