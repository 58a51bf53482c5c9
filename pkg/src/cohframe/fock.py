"""Truncated Fock-space linear algebra for canonical coherent states.

Operators are plain complex ``numpy`` arrays of shape ``(cutoff+1, cutoff+1)``
with the row index as the bra index.  Coherent-state components are built
from the analytic formula ``<n|z> = exp(-|z|^2/2) z^n / sqrt(n!)`` in
log-magnitude form, so nothing overflows for large ``n``.

Truncation corrupts the top rows of composed operators.  Functions that
compose operators certify only the *trusted block* ``0..cutoff//2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg
from scipy.special import gammainc, gammaln, eval_genlaguerre

# exp(-|z|^2/2) underflows double precision beyond this.
MAX_ABS_Z_SQUARED = 1400.0


class CutoffError(ValueError):
    """Raised when a Fock cutoff is too small for the requested state or accuracy."""

    def __init__(self, message, needed_cutoff):
        super().__init__(f"{message} (increase cutoff to at least {needed_cutoff})")
        self.needed_cutoff = needed_cutoff


@dataclass(frozen=True)
class FockSpace:
    """Fock levels ``0..cutoff`` of an oscillator with scale ``alpha = m*omega``."""

    cutoff: int
    hbar: float = 1.0
    alpha: float = 1.0

    def __post_init__(self):
        if int(self.cutoff) != self.cutoff or self.cutoff < 0:
            raise ValueError(f"cutoff must be a nonnegative integer, got {self.cutoff}")
        if not self.hbar > 0 or not self.alpha > 0:
            raise ValueError("hbar and alpha must be positive")

    @property
    def dim(self) -> int:
        return self.cutoff + 1

    @property
    def b(self) -> float:
        """Oscillator length ``sqrt(hbar/alpha)``."""
        return float(np.sqrt(self.hbar / self.alpha))

    @property
    def trusted(self) -> int:
        """Highest index of the trusted block."""
        return self.cutoff // 2

    def label(self, q, p):
        """Complex label ``z = (q/b + i b p/hbar)/sqrt(2)`` of the phase-space point (q, p)."""
        b = self.b
        return (np.asarray(q) / b + 1j * b * np.asarray(p) / self.hbar) / np.sqrt(2.0)

    def phase_point(self, z):
        """Inverse of :meth:`label`: returns ``(q, p)``."""
        z = np.asarray(z)
        b = self.b
        return np.sqrt(2.0) * b * z.real, np.sqrt(2.0) * self.hbar * z.imag / b


@dataclass(frozen=True)
class StateVector:
    """Fock amplitudes plus a bound on the norm of the discarded ``n > cutoff`` part."""

    amplitudes: np.ndarray
    tail_bound: float = 0.0
    norm_tol: float = 1e-12

    @property
    def norm_deficit(self) -> float:
        """``|1 - (sum |a_n|^2 + tail^2)|``; zero for an exactly normalized state."""
        total = float(np.sum(np.abs(self.amplitudes) ** 2)) + self.tail_bound**2
        return abs(1.0 - total)

    def is_normalized(self) -> bool:
        return self.norm_deficit <= self.norm_tol

    def overlap(self, other: "StateVector") -> complex:
        """``<self|other>``."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))


def log_coherent_components(z, n_max):
    """Log of ``z^n/sqrt(n!)`` for n = 0..n_max, without the Gaussian prefactor.

    Returned as a complex log (real part = log-magnitude, imaginary part = phase).
    ``z == 0`` gives ``-inf`` for ``n >= 1``.
    """
    n = np.arange(n_max + 1)
    z = complex(z)
    with np.errstate(divide="ignore"):
        logz = np.log(z) if z != 0 else -np.inf
    out = np.empty(n_max + 1, dtype=complex)
    out[0] = 0.0
    if n_max > 0:
        out[1:] = n[1:] * logz - 0.5 * gammaln(n[1:] + 1.0)
    return out


def coherent_components(z, n_max):
    """Analytic components ``<n|z>`` for n = 0..n_max as a bare array."""
    z = complex(z)
    if abs(z) ** 2 > MAX_ABS_Z_SQUARED:
        raise CutoffError(f"|z|^2 = {abs(z)**2:.1f} underflows the Gaussian factor", n_max)
    logs = log_coherent_components(z, n_max) - 0.5 * abs(z) ** 2
    return np.exp(logs)


def poisson_tail_norm(mean, cutoff):
    """Norm of the part of a coherent state beyond ``cutoff``.

    The squared norm is the Poisson(mean) probability of exceeding ``cutoff``,
    i.e. the regularized lower incomplete gamma ``P(cutoff+1, mean)``.
    """
    if mean == 0:
        return 0.0
    return float(np.sqrt(gammainc(cutoff + 1, mean)))


def minimal_cutoff(z, max_tail):
    """Smallest cutoff whose coherent-state tail norm is at most ``max_tail``."""
    mean = abs(complex(z)) ** 2
    c = max(0, int(mean))
    while poisson_tail_norm(mean, c) > max_tail:
        c = max(c + 1, int(c * 1.1))
    # step back to the smallest admissible value
    while c > 0 and poisson_tail_norm(mean, c - 1) <= max_tail:
        c -= 1
    return c


def coherent_vector(space: FockSpace, z, max_tail=1e-6) -> StateVector:
    """Coherent state ``|z>`` truncated to ``space``.

    Raises :class:`CutoffError` (carrying the cutoff that would be enough)
    when the discarded tail norm exceeds ``max_tail``.
    """
    z = complex(z)
    mean = abs(z) ** 2
    if mean > MAX_ABS_Z_SQUARED:
        raise CutoffError(f"|z|^2 = {mean:.1f} underflows the Gaussian factor", minimal_cutoff(z, max_tail))
    tail = poisson_tail_norm(mean, space.cutoff)
    if tail > max_tail:
        raise CutoffError(
            f"coherent state |{z}> has tail norm {tail:.2e} > {max_tail:.1e} at cutoff {space.cutoff}",
            minimal_cutoff(z, max_tail),
        )
    return StateVector(coherent_components(z, space.cutoff), tail)


def ladder_matrices(space: FockSpace):
    """Truncated annihilation and creation matrices ``(a, a_dagger)``.

    ``[a, a_dagger]`` equals the identity except at entry ``(cutoff, cutoff)``,
    which is ``-cutoff``.
    """
    a = np.diag(np.sqrt(np.arange(1, space.dim, dtype=float)), k=1).astype(complex)
    return a, a.conj().T.copy()


def number_matrix(space: FockSpace):
    return np.diag(np.arange(space.dim, dtype=float)).astype(complex)


def position_matrix(space: FockSpace):
    """``q = b (a + a_dagger)/sqrt(2)``."""
    a, ad = ladder_matrices(space)
    return space.b * (a + ad) / np.sqrt(2.0)


def momentum_matrix(space: FockSpace):
    """``p = i hbar (a_dagger - a)/(sqrt(2) b)``."""
    a, ad = ladder_matrices(space)
    return 1j * space.hbar * (ad - a) / (np.sqrt(2.0) * space.b)


def _displacement_elements(z, dim):
    """Analytic ``<m|D(z)|n>`` from the generalized-Laguerre closed form."""
    z = complex(z)
    x = abs(z) ** 2
    m = np.arange(dim)[:, None]
    n = np.arange(dim)[None, :]
    lo = np.minimum(m, n)
    k = np.abs(m - n)
    # m >= n: sqrt(n!/m!) z^(m-n) L_n^(m-n)(x); m < n: sqrt(m!/n!) (-z*)^(n-m) L_m^(n-m)(x)
    base = np.where(m >= n, z, -np.conj(z))
    log_pref = 0.5 * (gammaln(lo + 1.0) - gammaln(lo + k + 1.0)) - 0.5 * x
    if z == 0:
        return np.eye(dim, dtype=complex)
    power = np.exp(k * np.log(base.astype(complex)) + log_pref)
    return power * eval_genlaguerre(lo, k, x)


def displacement_matrix(space: FockSpace, z, tol=None):
    """Matrix of ``D(z) = exp(-|z|^2/2) exp(z a_dagger) exp(-z* a)`` on ``space``.

    Elements come from the Laguerre closed form, so every entry with
    ``m, n <= cutoff`` is the exact matrix element of the untruncated
    operator.  With ``tol`` set, the probability leaking out of the trusted
    columns is checked and a :class:`CutoffError` suggests a larger cutoff.
    """
    z = complex(z)
    if abs(z) ** 2 > MAX_ABS_Z_SQUARED:
        raise CutoffError(f"|z|^2 = {abs(z)**2:.1f} too large", space.cutoff * 2)
    D = _displacement_elements(z, space.dim)
    if tol is not None:
        leak = _trusted_leakage(D, space.trusted)
        if leak > tol:
            c = space.cutoff
            while leak > tol:
                c = 2 * c + 2
                leak = _trusted_leakage(_displacement_elements(z, c + 1), space.trusted)
            raise CutoffError(f"D({z}) leaks {leak:.1e} out of the trusted block", c)
    return D


def _trusted_leakage(D, block):
    cols = D[:, : block + 1]
    return float(np.max(np.abs(1.0 - np.sum(np.abs(cols) ** 2, axis=0))))


def hermiticity_defect(H, block=None):
    """Max entry of ``|H - H^dagger|`` on the block ``0..block``."""
    H = np.asarray(H)
    if block is not None:
        H = H[: block + 1, : block + 1]
    return float(np.max(np.abs(H - H.conj().T))) if H.size else 0.0


def unitarity_defect(U, block=None):
    """Max entry of ``|U^dagger U - I|`` on the block ``0..block``."""
    U = np.asarray(U)
    G = U.conj().T @ U
    if block is not None:
        G = G[: block + 1, : block + 1]
    return float(np.max(np.abs(G - np.eye(G.shape[0]))))


def evolve(space: FockSpace, H, T, herm_tol=1e-10, return_defect=False):
    """Propagator ``exp(-i T H / hbar)`` from the eigendecomposition of ``H``.

    ``H`` must be Hermitian on its trusted block within ``herm_tol``; the
    Hermitian part of the full truncated matrix is then diagonalized, which
    keeps the result exactly unitary up to rounding.
    """
    H = np.asarray(H, dtype=complex)
    if H.shape != (space.dim, space.dim):
        raise ValueError(f"H has shape {H.shape}, expected {(space.dim, space.dim)}")
    defect = hermiticity_defect(H, space.trusted)
    if defect > herm_tol * max(1.0, float(np.max(np.abs(H)))):
        raise ValueError(f"H is not Hermitian on the trusted block (defect {defect:.2e})")
    evals, evecs = linalg.eigh(0.5 * (H + H.conj().T))
    U = (evecs * np.exp(-1j * T * evals / space.hbar)) @ evecs.conj().T
    if return_defect:
        return U, unitarity_defect(U, space.trusted)
    return U
