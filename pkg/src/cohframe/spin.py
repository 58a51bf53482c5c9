"""Spin-j coherent states and their closure relations.

Basis order is ``m = j, j-1, ..., -j`` (index ``n = j - m``).  Components are

    <j-n|w> = (1+|w|^2)^(-j) sqrt(C(2j, n)) w^n,

chosen so that ``<w|w'> = (1+|w|^2)^-j (1+|w'|^2)^-j (1 + w* w')^(2j)``
holds exactly.  (Defining the rotation generator with ``J_pm =
(J_1 pm i J_2)/sqrt(2)`` would put extra powers of sqrt(2) into the
components and break that inner product, so the inner product formula is
taken as the convention.)

Closures are checked on the radial variable ``x = r^2`` (or ``lam r^2``),
mapped to ``[0, 1)`` by ``x = t/(1-t)``; the integrand becomes a polynomial
in ``t`` and Gauss-Legendre is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betaln, gammaln

from .closure import ClosureReport, deviation
from .quadrature import gauss_legendre


@dataclass(frozen=True)
class SpinSystem:
    two_j: int

    def __post_init__(self):
        if int(self.two_j) != self.two_j or self.two_j < 0:
            raise ValueError(f"two_j must be a nonnegative integer, got {self.two_j}")

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def dim(self) -> int:
        return self.two_j + 1

    def m_values(self):
        return self.j - np.arange(self.dim)


@dataclass(frozen=True)
class SpinCoherent:
    w: complex
    components: np.ndarray


def _log_binom(two_j):
    n = np.arange(two_j + 1)
    return gammaln(two_j + 1.0) - gammaln(n + 1.0) - gammaln(two_j - n + 1.0)


def spin_components(sys: SpinSystem, w):
    """Components for an array of labels ``w`` (shape ``w.shape + (dim,)``)."""
    w = np.asarray(w, dtype=complex)
    n = np.arange(sys.dim)
    log_mag = -sys.j * np.log1p(np.abs(w) ** 2)[..., None] + 0.5 * _log_binom(sys.two_j)
    with np.errstate(divide="ignore", invalid="ignore"):
        powers = np.where(n == 0, 1.0 + 0j, w[..., None] ** n)
    return np.exp(log_mag) * powers


def spin_coherent(sys: SpinSystem, w) -> SpinCoherent:
    w = complex(w)
    return SpinCoherent(w, spin_components(sys, w))


def spin_overlap(sys: SpinSystem, w, w2):
    """Closed-form ``<w|w2>``."""
    w = np.asarray(w, dtype=complex)
    w2 = np.asarray(w2, dtype=complex)
    return (1 + np.abs(w) ** 2) ** (-sys.j) * (1 + np.abs(w2) ** 2) ** (-sys.j) * (
        1 + np.conj(w) * w2
    ) ** sys.two_j


def beta_oracle(sys: SpinSystem):
    """``(2j+1) C(2j,n) B(n+1, 2j+1-n)`` for each ``n``; all equal to 1."""
    n = np.arange(sys.dim)
    return np.exp(math.log(sys.dim) + _log_binom(sys.two_j) + betaln(n + 1.0, sys.two_j + 1.0 - n))


def _radial_rule(n_radial):
    t, wt = gauss_legendre(n_radial, 0.0, 1.0)
    x = t / (1.0 - t)
    return x, wt / (1.0 - t) ** 2


def _default_radial(sys):
    # integrand is a polynomial of degree 2j in t
    return sys.two_j // 2 + 8


def _report(diag, name, params):
    M = np.diag(diag.astype(complex))
    dmax, dfro = deviation(M)
    return ClosureReport(matrix=M, dev_max=dmax, dev_fro=dfro, convergence=[(params["n_radial"], dmax)],
                         name=name, grid=params)


def spin_unlike_closure(sys: SpinSystem, lam, n_radial=None) -> ClosureReport:
    """``lam (2j+1)/pi integral d^2w (1+lam|w|^2)^-2 |lam w><w| / <w|lam w>``.

    The angular integral is done exactly (off-diagonal entries vanish);
    each diagonal entry is a radial integral in ``x = lam r^2``.
    """
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    n_radial = n_radial or _default_radial(sys)
    x, wx = _radial_rule(n_radial)
    r = np.sqrt(x / lam)
    ket = spin_components(sys, lam * r)
    bra = spin_components(sys, r)
    ratio = ket * np.conj(bra) / spin_overlap(sys, r, lam * r)[:, None]
    # (1/pi) * 2 pi r dr = dx / lam
    density = lam * sys.dim * (1.0 + lam * r**2) ** -2 / lam
    diag = np.sum((wx * density)[:, None] * ratio, axis=0)
    return _report(diag, f"spin j={sys.j:g} lambda={lam:g}", {"n_radial": n_radial, "lambda": lam, "two_j": sys.two_j})


def spin_standard_closure(sys: SpinSystem, n_radial=None) -> ClosureReport:
    """``(2j+1)/pi integral d^2w (1+|w|^2)^-2 |w><w|``."""
    rep = spin_unlike_closure(sys, 1.0, n_radial)
    rep.name = f"spin j={sys.j:g} standard"
    return rep


def spin_closure_2d(sys: SpinSystem, lam=1.0, n_radial=64, n_angular=None) -> ClosureReport:
    """Same closure on a full polar grid in ``w`` (no angular reduction).

    Radial variable ``x = r^2`` (not ``lam r^2``), so for ``lam != 1`` the
    integrand is rational in ``t`` rather than polynomial.
    """
    n_angular = n_angular or 2 * sys.dim + 4
    x, wx = _radial_rule(n_radial)
    r = np.sqrt(x)
    phi = 2 * np.pi * np.arange(n_angular) / n_angular
    w = (r[:, None] * np.exp(1j * phi)[None, :]).ravel()
    # (1/pi) r dr dphi = dx dphi / (2 pi)
    weights = np.repeat(wx / n_angular, n_angular)
    density = lam * sys.dim * (1.0 + lam * np.abs(w) ** 2) ** -2
    ket = spin_components(sys, lam * w)
    bra = spin_components(sys, w)
    s = weights * density / spin_overlap(sys, w, lam * w)
    M = (ket * s[:, None]).T @ np.conj(bra)
    dmax, dfro = deviation(M)
    return ClosureReport(matrix=M, dev_max=dmax, dev_fro=dfro, convergence=[(len(w), dmax)],
                         name=f"spin j={sys.j:g} lambda={lam:g} (2-D)",
                         grid={"n_radial": n_radial, "n_angular": n_angular})
