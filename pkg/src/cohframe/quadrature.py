"""Quadrature over the complex plane with measure ``d^2z/pi``, plus 1-D helpers.

Polar product rules use Gauss-Legendre in the radius and the trapezoid rule
in the angle (exact for angular harmonics of order below ``n_angular``).
Reductions over nodes go through :func:`compensated_sum`, which is
deterministic for a given node order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_legendre

# summation block size; part of the reduction tree, so fixed
CHUNK = 512


def compensated_sum(terms, axis=0, chunk=CHUNK):
    """Neumaier-compensated sum of ``terms`` along ``axis``.

    Nodes are grouped into fixed-size chunks summed pairwise by numpy; the
    chunk totals are then accumulated with compensation in node order.
    Result depends only on the data and ``chunk``.
    """
    terms = np.moveaxis(np.asarray(terms), axis, 0)
    if terms.shape[0] == 0:
        return np.zeros(terms.shape[1:], dtype=terms.dtype)
    s = np.zeros(terms.shape[1:], dtype=terms.dtype)
    comp = np.zeros_like(s)
    for start in range(0, terms.shape[0], chunk):
        x = terms[start : start + chunk].sum(axis=0)
        t = s + x
        big = np.abs(s) >= np.abs(x)
        comp += np.where(big, (s - t) + x, (x - t) + s)
        s = t
    return s + comp


def gauss_legendre(n, a=-1.0, b=1.0):
    """Gauss-Legendre nodes and weights mapped to ``[a, b]``."""
    x, w = roots_legendre(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


@dataclass(frozen=True)
class PhaseGrid:
    """Nodes and positive weights approximating ``integral d^2z/pi`` over ``|z| <= radius``.

    ``weights`` already include the ``1/pi`` and the polar Jacobian.
    ``est_tail`` bounds the neglected ``|z| > radius`` contribution for an
    integrand bounded by ``exp(-kappa |z|^2)``.
    """

    nodes: np.ndarray
    weights: np.ndarray
    radius: float
    kappa: float
    est_tail: float
    n_radial: int = 0
    n_angular: int = 0
    center: complex = 0j
    params: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.nodes)

    def integrate(self, values):
        """Weighted sum of integrand samples at the nodes (node axis first)."""
        values = np.asarray(values)
        w = self.weights.reshape((-1,) + (1,) * (values.ndim - 1))
        return compensated_sum(w * values)

    def refined(self):
        """Grid with doubled radial and angular orders."""
        return build_polar_grid(self.radius, 2 * self.n_radial, 2 * self.n_angular, self.kappa, self.center)

    def describe(self):
        return {
            "radius": self.radius,
            "n_radial": self.n_radial,
            "n_angular": self.n_angular,
            "kappa": self.kappa,
            "center": [self.center.real, self.center.imag],
            "nodes": len(self),
            "est_tail": self.est_tail,
        }


def gaussian_tail(radius, kappa):
    """``(1/pi) integral_{|z|>R} exp(-kappa |z|^2) d^2z = exp(-kappa R^2)/kappa``."""
    return math.exp(-kappa * radius * radius) / kappa


def build_polar_grid(R, n_radial, n_angular, kappa=1.0, center=0j):
    """Polar product rule on the disk ``|z - center| <= R``."""
    if not R > 0:
        raise ValueError(f"radius must be positive, got {R}")
    if n_radial < 2:
        raise ValueError(f"n_radial must be >= 2, got {n_radial}")
    if n_angular < 4:
        raise ValueError(f"n_angular must be >= 4, got {n_angular}")
    if not kappa > 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    r, wr = gauss_legendre(int(n_radial), 0.0, float(R))
    phi = 2.0 * np.pi * np.arange(n_angular) / n_angular
    nodes = complex(center) + (r[:, None] * np.exp(1j * phi)[None, :]).ravel()
    # (1/pi) r dr dphi with dphi = 2 pi / n_angular
    weights = np.repeat(2.0 * wr * r / n_angular, n_angular)
    return PhaseGrid(
        nodes=nodes,
        weights=weights,
        radius=float(R),
        kappa=float(kappa),
        est_tail=gaussian_tail(R, kappa),
        n_radial=int(n_radial),
        n_angular=int(n_angular),
        center=complex(center),
    )


def build_cartesian_grid(half_width, n, kappa=1.0, center=0j):
    """Gauss-Legendre product rule on the square ``|Re|,|Im| <= half_width``."""
    x, w = gauss_legendre(int(n), -half_width, half_width)
    X, Y = np.meshgrid(x, x, indexing="ij")
    W = np.outer(w, w) / np.pi
    return PhaseGrid(
        nodes=complex(center) + (X + 1j * Y).ravel(),
        weights=W.ravel(),
        radius=float(half_width),
        kappa=float(kappa),
        est_tail=gaussian_tail(half_width, kappa),
        n_radial=int(n),
        n_angular=int(n),
        center=complex(center),
        params={"kind": "cartesian"},
    )


def auto_radius(tol, kappa, degree=0, scale=1.0, max_iter=100):
    """Smallest ``R`` with ``scale * exp(-kappa R^2) R^degree <= tol/10``.

    Solved by the fixed-point iteration ``R = sqrt((log(10 scale/tol) + degree log R)/kappa)``.
    """
    target = math.log(10.0 * scale / tol)
    R = math.sqrt(max(target, 1.0) / kappa)
    for _ in range(max_iter):
        new = math.sqrt(max(target + degree * math.log(max(R, 1.0)), 1e-12) / kappa)
        if abs(new - R) < 1e-12:
            break
        R = new
    return R


def angular_count(degree, oscillation=0.0, radius=0.0):
    """``degree + ceil(4 |oscillation| R) + 8`` angular nodes, rounded up to a multiple of 4."""
    n = degree + math.ceil(4.0 * abs(oscillation) * radius) + 8
    return int(4 * math.ceil(n / 4))


def radial_count(degree, kappa, radius):
    """Gauss-Legendre order for ``r^degree exp(-kappa r^2)`` on ``[0, R]``.

    Heuristic; closure code checks it with one refinement step.
    """
    return int(degree + math.ceil(3.0 * math.sqrt(kappa) * radius) + 24)


def auto_polar_grid(tol, kappa, degree=0, scale=1.0, oscillation=0.0, center=0j):
    R = auto_radius(tol, kappa, degree, scale)
    return build_polar_grid(
        R, radial_count(degree, kappa, R), angular_count(degree, oscillation, R), kappa, center
    )


# --- principal values -------------------------------------------------------


class PVDivergenceError(ArithmeticError):
    """Refinement of a principal-value rule failed to converge."""


@dataclass(frozen=True)
class PVRule:
    """Symmetric-pair rule for ``PV integral_a^b f`` with simple poles at ``poles``.

    Around each pole ``p`` a window ``[p-h, p+h]`` is integrated as
    ``integral_0^h (f(p+t) + f(p-t)) dt`` so the singular parts cancel pairwise;
    the gaps between windows use ordinary Gauss-Legendre panels.
    """

    a: float
    b: float
    poles: tuple
    order: int = 32

    def __post_init__(self):
        if not self.b > self.a:
            raise ValueError("PV interval must have b > a")
        for p in self.poles:
            if not self.a < p < self.b:
                raise ValueError(f"pole {p} is not inside ({self.a}, {self.b})")

    def windows(self):
        """``(pole, half_width)`` pairs; windows never overlap or cross the endpoints."""
        pts = sorted(self.poles)
        out = []
        for i, p in enumerate(pts):
            left = p - (self.a if i == 0 else pts[i - 1])
            right = (self.b if i == len(pts) - 1 else pts[i + 1]) - p
            # half of the gap to a neighbouring pole, all of the gap to an endpoint
            left = left if i == 0 else left / 2
            right = right if i == len(pts) - 1 else right / 2
            out.append((p, min(left, right)))
        return out

    def pieces(self, order=None):
        """``(nodes, weights)`` for the regular panels and ``(pole, t, w)`` for the paired windows."""
        order = order or self.order
        wins = self.windows()
        edges = [self.a]
        for p, h in wins:
            edges += [p - h, p + h]
        edges.append(self.b)
        regular = []
        for lo, hi in zip(edges[0::2], edges[1::2]):
            if hi - lo > 1e-15 * (self.b - self.a):
                regular.append(gauss_legendre(order, lo, hi))
        paired = [(p,) + gauss_legendre(order, 0.0, h) for p, h in wins]
        return regular, paired

    def refined(self):
        return PVRule(self.a, self.b, self.poles, 2 * self.order)


def _pv_apply(f, rule, order):
    regular, paired = rule.pieces(order)
    parts = []
    for x, w in regular:
        parts.append(w * f(x))
    for p, t, w in paired:
        parts.append(w * (f(p + t) + f(p - t)))
    return math.fsum(np.concatenate(parts)) if parts else 0.0


def pv_integrate(f, rule, return_error=False, max_doublings=4, rtol=1e-10):
    """Principal value of ``integral f`` over ``[rule.a, rule.b]``.

    ``f`` must be vectorized.  The error estimate is the change under one
    doubling of the panel order; if repeated doubling does not shrink it
    below ``rtol`` the integrand probably has an undeclared pole and
    :class:`PVDivergenceError` is raised.
    """
    order = rule.order
    prev = _pv_apply(f, rule, order)
    deltas = []
    for _ in range(max_doublings):
        order *= 2
        cur = _pv_apply(f, rule, order)
        deltas.append(abs(cur - prev))
        prev = cur
        if deltas[-1] <= rtol * max(1.0, abs(cur)):
            break
    else:
        if not (len(deltas) >= 2 and deltas[-1] < deltas[0] * 1e-3):
            raise PVDivergenceError(
                f"PV refinement did not converge (deltas {['%.1e' % d for d in deltas]}); "
                "check that every pole is declared"
            )
    if return_error:
        return prev, deltas[-1]
    return prev
