"""Weak energy values between coherent states.

``H_zeta = <z+zeta|H|z-zeta> / <z+zeta|z-zeta>`` is computed two ways: from
truncated Fock matrices, and in closed form when ``H`` is a
:class:`~cohframe.ladder.LadderPolynomial`.

Note that ``<z(t)|[a, H]|z(t)>`` is *not* ``i hbar dz/dt`` for a general
coherent-state path; nothing here equates the two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import FockSpace, StateVector, coherent_vector, ladder_matrices
from .ladder import LadderPolynomial

OVERLAP_FLOOR = 1e-200


class WeakValueError(ValueError):
    pass


@dataclass(frozen=True)
class WeakValue:
    value: complex
    numerator: complex
    denominator: complex


def weak_value(psi0, psif, H) -> WeakValue:
    """``<psif|H|psi0> / <psif|psi0>``.

    ``psi0``, ``psif`` are :class:`StateVector` or amplitude arrays; ``H`` a matrix.
    """
    a0 = psi0.amplitudes if isinstance(psi0, StateVector) else np.asarray(psi0)
    af = psif.amplitudes if isinstance(psif, StateVector) else np.asarray(psif)
    den = complex(np.vdot(af, a0))
    if abs(den) < OVERLAP_FLOOR:
        raise WeakValueError(f"|<psi_f|psi_0>| = {abs(den):.1e} is below the floor")
    num = complex(np.vdot(af, np.asarray(H) @ a0))
    return WeakValue(num / den, num, den)


@dataclass(frozen=True)
class ZetaPair:
    """Center ``z`` and offset ``zeta``; ``alpha`` and ``hbar`` fix ``b = sqrt(hbar/alpha)``.

    ``zeta = X/(sqrt(2) b) + i b Pi/(sqrt(2) hbar)``.
    """

    z: complex
    zeta: complex
    alpha: float = 1.0
    hbar: float = 1.0

    @property
    def b(self):
        return math.sqrt(self.hbar / self.alpha)

    @classmethod
    def from_offsets(cls, z, X, Pi, alpha=1.0, hbar=1.0):
        b = math.sqrt(hbar / alpha)
        zeta = X / (math.sqrt(2) * b) + 1j * b * Pi / (math.sqrt(2) * hbar)
        return cls(complex(z), complex(zeta), alpha, hbar)

    @property
    def offsets(self):
        """``(X, Pi)`` decoded from ``zeta``."""
        return (
            math.sqrt(2) * self.b * self.zeta.real,
            math.sqrt(2) * self.hbar * self.zeta.imag / self.b,
        )

    @property
    def pre(self):
        return self.z - self.zeta

    @property
    def post(self):
        return self.z + self.zeta


def _space_for(H, pair, space):
    if space is not None:
        return space
    n = np.asarray(H).shape[0]
    return FockSpace(n - 1, pair.hbar, pair.alpha)


def h_zeta(pair: ZetaPair, H, space: FockSpace = None, max_tail=1e-10) -> complex:
    """Weak energy value with pre-state ``|z-zeta>`` and post-state ``|z+zeta>``.

    ``H`` may be a :class:`LadderPolynomial` (closed form) or a truncated matrix.
    """
    if isinstance(H, LadderPolynomial):
        return complex(H.weak_value(pair.post, pair.pre))
    space = _space_for(H, pair, space)
    psi0 = coherent_vector(space, pair.pre, max_tail)
    psif = coherent_vector(space, pair.post, max_tail)
    return weak_value(psi0, psif, H).value


def h_zeta_first_order(pair: ZetaPair, H, space: FockSpace = None, max_tail=1e-10) -> complex:
    """``H_0 + zeta* <z|[a,H]|z> + zeta <z|[a_dagger,H]|z>``."""
    z, zeta = pair.z, pair.zeta
    if isinstance(H, LadderPolynomial):
        return complex(
            H.expectation(z)
            + np.conj(zeta) * H.commutator_with_a().expectation(z)
            + zeta * H.commutator_with_ad().expectation(z)
        )
    space = _space_for(H, pair, space)
    H = np.asarray(H)
    a, ad = ladder_matrices(space)
    psi = coherent_vector(space, z, max_tail).amplitudes
    # truncated commutators are wrong only in the top row/column
    ca = a @ H - H @ a
    cad = ad @ H - H @ ad
    h0 = np.vdot(psi, H @ psi)
    return complex(h0 + np.conj(zeta) * np.vdot(psi, ca @ psi) + zeta * np.vdot(psi, cad @ psi))


def h_quasiclassical(pair: ZetaPair, H_class, qdot, pdot) -> complex:
    """``H_class + i (alpha X qdot + Pi pdot / alpha)``."""
    X, Pi = pair.offsets
    return complex(H_class, pair.alpha * X * qdot + Pi * pdot / pair.alpha)


def expansion_slope(pair_at, H, ts, space=None):
    """Log-log slope of ``|H_zeta - first order|`` against ``|zeta|``.

    ``pair_at(t)`` returns the :class:`ZetaPair` at parameter ``t``.
    Returns ``(slope, |zeta| values, residuals)``.
    """
    mags, res = [], []
    for t in ts:
        pair = pair_at(t)
        mags.append(abs(pair.zeta))
        res.append(abs(h_zeta(pair, H, space) - h_zeta_first_order(pair, H, space)))
    mags, res = np.array(mags), np.array(res)
    slope = np.polyfit(np.log(mags), np.log(res), 1)[0]
    return float(slope), mags, res


def zeta_sweep(z, zetas, H, space=None):
    """Rows ``(Re zeta, Im zeta, Re H_zeta, Im H_zeta, |H_zeta - first order|)``."""
    rows = []
    for zeta in np.asarray(zetas, dtype=complex).ravel():
        pair = ZetaPair(z, zeta)
        hz = h_zeta(pair, H, space)
        rows.append((zeta.real, zeta.imag, hz.real, hz.imag, abs(hz - h_zeta_first_order(pair, H, space))))
    return rows
