"""Numerical verification of coherent-state resolutions of unity.

A candidate closure is

    sum over grid nodes z of  w(z) W(z) |f(v)><v| / <v|f(v)>,   v = label(z),

evaluated as a ``(block+1) x (block+1)`` matrix in the Fock basis.  All
matrix elements come from analytic coherent components, so the Fock cutoff
never enters.  Weights and the normalizer ``<v|f(v)>`` are combined in log
space before exponentiating.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.special import gammaln

from .fock import MAX_ABS_Z_SQUARED
from .quadrature import (
    CHUNK,
    PhaseGrid,
    angular_count,
    auto_radius,
    build_polar_grid,
    radial_count,
)

# smallest |<v|f(v)>| accepted by the normalizer
OVERLAP_FLOOR = 1e-300


class ClosureError(ValueError):
    pass


def log_overlap(bra, ket):
    """``log <bra|ket>`` for coherent labels (principal branch not implied)."""
    bra = np.asarray(bra, dtype=complex)
    ket = np.asarray(ket, dtype=complex)
    return -0.5 * np.abs(bra) ** 2 - 0.5 * np.abs(ket) ** 2 + np.conj(bra) * ket


def _identity(z):
    return z


@dataclass
class ClosureSpec:
    """A candidate unlike closure on a quadrature grid.

    ``label`` maps the integration variable ``z`` to the bra label ``v``;
    ``pairing`` maps ``v`` to the ket label ``f(v)``.  ``log_weight`` is the
    log of the measure density as a function of ``z``.  With ``normalizer``
    each term is divided by ``<v|f(v)>``.
    """

    pairing: Callable
    grid: PhaseGrid
    block: int
    log_weight: Optional[Callable] = None
    normalizer: bool = False
    label: Callable = _identity
    name: str = ""

    def __post_init__(self):
        if self.block < 0:
            raise ValueError("block must be nonnegative")
        if self.grid.n_angular and self.grid.n_angular <= self.block:
            raise ClosureError(
                f"n_angular={self.grid.n_angular} cannot resolve block {self.block}; "
                f"need more than {self.block}"
            )

    def labels(self, grid=None):
        z = (grid or self.grid).nodes
        v = self.label(z)
        return z, v, self.pairing(v)


@dataclass
class ClosureReport:
    matrix: np.ndarray
    dev_max: float
    dev_fro: float
    convergence: list = field(default_factory=list)
    ratio_to_identity: Optional[complex] = None
    min_log_overlap: Optional[float] = None
    name: str = ""
    grid: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    @property
    def block(self):
        return self.matrix.shape[0] - 1

    def to_dict(self):
        d = {
            "name": self.name,
            "block": self.block,
            "dev_max": self.dev_max,
            "dev_fro": self.dev_fro,
            "matrix": [[[float(x.real), float(x.imag)] for x in row] for row in self.matrix],
            "convergence": [{"nodes": n, "dev_max": d} for n, d in self.convergence],
            "grid": self.grid,
            "notes": list(self.notes),
        }
        if self.extras:
            d["extras"] = dict(self.extras)
        if self.ratio_to_identity is not None:
            r = complex(self.ratio_to_identity)
            d["ratio_to_identity"] = [r.real, r.imag]
        if self.min_log_overlap is not None:
            d["min_log_overlap"] = self.min_log_overlap
        return d

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), sort_keys=True, **kwargs)

    def convergence_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["nodes", "dev_max"])
        for n, d in self.convergence:
            w.writerow([n, repr(float(d))])
        return buf.getvalue()


def deviation(matrix):
    """``(max |M - I|, ||M - I||_F)``."""
    E = matrix - np.eye(matrix.shape[0])
    return float(np.max(np.abs(E))), float(np.linalg.norm(E))


def _powers(labels, block):
    """``label^n / sqrt(n!)`` for n = 0..block, nodes along axis 0."""
    n = np.arange(block + 1)
    inv_sqrt_fact = np.exp(-0.5 * gammaln(n + 1.0))
    return labels[:, None] ** n[None, :] * inv_sqrt_fact[None, :]


def closure_matrix(spec: ClosureSpec, grid: PhaseGrid = None):
    """Closure matrix and ``min log|<v|f(v)>|`` on ``grid`` (default: the spec's grid)."""
    grid = grid or spec.grid
    z, v, u = spec.labels(grid)
    if np.max(np.abs(u)) ** 2 > MAX_ABS_Z_SQUARED or np.max(np.abs(v)) ** 2 > MAX_ABS_Z_SQUARED:
        raise ClosureError("grid reaches labels beyond the overflow-safe range")
    # <m|u><v|n> = u^m v*^n exp(-|u|^2/2 - |v|^2/2)/sqrt(m! n!)
    log_s = -0.5 * np.abs(u) ** 2 - 0.5 * np.abs(v) ** 2
    if spec.log_weight is not None:
        log_s = log_s + spec.log_weight(z)
    min_log = None
    if spec.normalizer:
        lo = log_overlap(v, u)
        i = int(np.argmin(lo.real))
        min_log = float(lo.real[i])
        if min_log < math.log(OVERLAP_FLOOR):
            raise ClosureError(
                f"<v|f(v)> underflows at node {i} (v={v[i]:.4g}, f(v)={u[i]:.4g}, log|.|={min_log:.1f})"
            )
        log_s = log_s - lo
    s = grid.weights * np.exp(log_s)
    K = _powers(u, spec.block) * s[:, None]
    B = _powers(np.conj(v), spec.block)
    total = np.zeros((spec.block + 1, spec.block + 1), dtype=complex)
    comp = np.zeros_like(total)
    for start in range(0, len(z), CHUNK):
        x = K[start : start + CHUNK].T @ B[start : start + CHUNK]
        t = total + x
        big = np.abs(total) >= np.abs(x)
        comp += np.where(big, (total - t) + x, (x - t) + total)
        total = t
    return total + comp, min_log


def evaluate_closure(spec: ClosureSpec, refine=True) -> ClosureReport:
    """Evaluate ``spec`` and, with ``refine``, one refinement step for the convergence table."""
    M, min_log = closure_matrix(spec)
    dmax, dfro = deviation(M)
    conv = [(len(spec.grid), dmax)]
    if refine:
        fine = spec.grid.refined()
        Mf, _ = closure_matrix(spec, fine)
        conv.append((len(fine), deviation(Mf)[0]))
    return ClosureReport(
        matrix=M,
        dev_max=dmax,
        dev_fro=dfro,
        convergence=conv,
        min_log_overlap=min_log,
        name=spec.name,
        grid=spec.grid.describe(),
    )


def standard_spec(block, grid):
    """Ordinary closure ``integral d^2z/pi |z><z|``."""
    return ClosureSpec(pairing=_identity, grid=grid, block=block, name="standard")


def _check_grid(grid, needed_angular):
    if grid.n_angular < needed_angular:
        raise ClosureError(
            f"n_angular={grid.n_angular} under-resolves the oscillatory factor; "
            f"use n_angular >= {needed_angular}"
        )


def default_grid(tol, kappa, block, scale=1.0, oscillation=0.0, center=0j, radius=None,
                 n_radial=None, n_angular=None):
    R = radius or auto_radius(tol, kappa, 2 * block, scale)
    if R * R > MAX_ABS_Z_SQUARED:
        raise ClosureError(f"required radius {R:.1f} exceeds the overflow-safe range")
    nr = n_radial or radial_count(2 * block, kappa, R)
    na = n_angular or angular_count(2 * block, oscillation, R)
    return build_polar_grid(R, nr, na, kappa, center)


def standard_closure(block=12, tol=1e-8, grid=None) -> ClosureReport:
    grid = grid or default_grid(tol, 1.0, block)
    return evaluate_closure(standard_spec(block, grid))


def lambda_specs(lam, block, grid):
    """The scaled closure in its two algebraically equal forms.

    Weighted form: density ``lam exp((1-lam)^2 |z|^2/2)`` on ``|lam z><z|``.
    Normalized form: density ``lam`` on ``|lam z><z| / <z|lam z>``.
    """
    loglam = math.log(lam)
    weighted = ClosureSpec(
        pairing=lambda v: lam * v,
        grid=grid,
        block=block,
        log_weight=lambda z: loglam + 0.5 * (1.0 - lam) ** 2 * np.abs(z) ** 2,
        name=f"lambda={lam:g} weighted",
    )
    normalized = ClosureSpec(
        pairing=lambda v: lam * v,
        grid=grid,
        block=block,
        log_weight=lambda z: np.full(np.shape(z), loglam, dtype=complex),
        normalizer=True,
        name=f"lambda={lam:g}",
    )
    return weighted, normalized


def lambda_weight_agreement(lam, nodes):
    """Max relative difference between ``lam exp((1-lam)^2|z|^2/2)`` and ``lam/<z|lam z>`` at ``nodes``."""
    nodes = np.asarray(nodes, dtype=complex)
    weighted = lam * np.exp(0.5 * (1.0 - lam) ** 2 * np.abs(nodes) ** 2)
    normalized = lam / np.exp(log_overlap(nodes, lam * nodes))
    return float(np.max(np.abs(normalized - weighted) / np.abs(weighted)))


def lambda_closure(lam, block=8, tol=1e-8, grid=None, refine=True) -> ClosureReport:
    """Closure built from ``|lam z><z|`` (``lam > 0``); both weight forms are cross-checked."""
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    scale = lam * max(1.0, lam) ** block
    grid = grid or default_grid(tol, lam, block, scale=scale)
    weighted, normalized = lambda_specs(lam, block, grid)
    agree = lambda_weight_agreement(lam, grid.nodes)
    if agree > 1e-12:
        raise ClosureError(f"weight forms disagree pointwise (rel. diff {agree:.1e})")
    rep = evaluate_closure(normalized, refine=refine)
    rep.notes.append(f"pointwise weight agreement {agree:.2e}")
    return rep


def weyl_spec(zeta, block, grid, form="centered"):
    """Weyl-offset closure ``integral d^2z/pi |z-zeta><z+zeta| / <z+zeta|z-zeta>``.

    ``form="centered"`` integrates over the center ``z``; ``"relabeled"``
    integrates over ``v = z + zeta`` with pairing ``f(v) = v - 2 zeta``.
    """
    zeta = complex(zeta)
    if form == "centered":
        label = lambda z: z + zeta
    elif form == "relabeled":
        label = _identity
    else:
        raise ValueError(f"unknown form {form!r}")
    return ClosureSpec(
        pairing=lambda v: v - 2.0 * zeta,
        grid=grid,
        block=block,
        normalizer=True,
        label=label,
        name=f"weyl zeta={zeta:.4g} ({form})",
    )


def _weyl_grid(zeta, block, tol, grid, n_angular, form):
    zeta = complex(zeta)
    if abs(zeta) > 2:
        raise ValueError(f"|zeta| <= 2 required, got {abs(zeta):.3g}")
    if grid is None:
        center = zeta if form == "relabeled" else 0j
        scale = math.exp(abs(zeta) ** 2) * (1.0 + abs(zeta)) ** (2 * block)
        R = auto_radius(tol, 1.0, 2 * block, scale)
        needed = angular_count(2 * block, zeta, R)
        if n_angular is not None and n_angular < needed:
            raise ClosureError(f"n_angular={n_angular} under-resolves the oscillation; use >= {needed}")
        grid = default_grid(tol, 1.0, block, radius=R, n_angular=n_angular or needed, center=center)
    else:
        _check_grid(grid, angular_count(2 * block, zeta, grid.radius))
    return grid


def weyl_closure(zeta, block=10, tol=1e-8, grid=None, n_angular=None, form="centered",
                 refine=True) -> ClosureReport:
    grid = _weyl_grid(zeta, block, tol, grid, n_angular, form)
    return evaluate_closure(weyl_spec(zeta, block, grid, form), refine=refine)


def b_operator_spec(zeta, block, grid):
    """``integral d^2z/pi exp(-|zeta|^2/2 - zeta* z + zeta z*) |z-zeta><z+zeta|`` with the bare exponential weight."""
    zeta = complex(zeta)
    return ClosureSpec(
        pairing=lambda v: v - 2.0 * zeta,
        grid=grid,
        block=block,
        log_weight=lambda z: -0.5 * abs(zeta) ** 2 - np.conj(zeta) * z + zeta * np.conj(z),
        label=lambda z: z + zeta,
        name=f"B zeta={zeta:.4g}",
    )


def b_operator(zeta, block=8, tol=1e-8, grid=None, n_angular=None, refine=True) -> ClosureReport:
    """Evaluate the Weyl-like outer-product operator with the bare exponential weight.

    The result is measured, not assumed to be the identity: when it is
    proportional to the identity within ``tol`` the constant is stored in
    ``ratio_to_identity``, and a note flags any departure from 1 (the
    normalized Weyl form gives exactly 1).
    """
    grid = _weyl_grid(zeta, block, tol, grid, n_angular, "centered")
    rep = evaluate_closure(b_operator_spec(zeta, block, grid), refine=refine)
    M = rep.matrix
    diag = np.diag(M)
    off = float(np.max(np.abs(M - np.diag(diag)))) if M.shape[0] > 1 else 0.0
    spread = float(np.max(np.abs(diag - diag.mean())))
    rep.notes.append(f"off-diagonal max {off:.2e}, diagonal spread {spread:.2e}")
    if off <= tol and spread <= tol:
        rep.ratio_to_identity = complex(diag.mean())
        if abs(rep.ratio_to_identity - 1.0) > tol:
            rep.notes.append(
                f"proportional to identity with constant {rep.ratio_to_identity.real:.12g}, not 1: "
                "the bare weight is not the normalized Weyl weight 1/<z+zeta|z-zeta>"
            )
    else:
        rep.notes.append("not proportional to the identity within tolerance")
    return rep


def double_closure(block=10, tol=1e-8, grid=None, matrix=None) -> ClosureReport:
    """Square of the standard closure, ``integral integral |z><z|z'><z'|``.

    The single closure is evaluated on an enlarged block so the inner sum of
    the product is not truncated at ``block``.  ``matrix`` bypasses the
    quadrature (used for exact inputs).
    """
    if matrix is None:
        inner = 2 * block + 1
        grid = grid or default_grid(tol, 1.0, inner)
        A_full, _ = closure_matrix(standard_spec(inner, grid))
    else:
        A_full = np.asarray(matrix, dtype=complex)
    A = A_full[: block + 1, : block + 1]
    A2 = (A_full @ A_full)[: block + 1, : block + 1]
    dmax, dfro = deviation(A2)
    single = deviation(A)[0]
    rep = ClosureReport(
        matrix=A2,
        dev_max=dmax,
        dev_fro=dfro,
        convergence=[(len(grid) if grid is not None else 0, dmax)],
        name="double",
        grid=grid.describe() if grid is not None else {},
    )
    rep.notes.append(f"single closure dev_max {single:.3e}")
    rep.extras["single_dev_max"] = single
    return rep
