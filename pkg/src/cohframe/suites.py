"""Verification suites: named checks with value, expected value and tolerance.

Each suite function takes a resolved config dict and returns a list of
:class:`Check`.  The CLI serializes them; the acceptance tests assert on them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import closure, ladder, plane, propagator, spin, transforms, weak
from .fock import FockSpace
from .propagator import PathSpec

DEFAULTS = {
    "tol": 1e-6,
    "block": 12,
    "lambda": [0.5, 1.0, 2.0],
    "zeta": ["0.3+0.2j", "1"],
    "b_zeta": ["0.5", "0.4+0.6j"],
    "two_j": [1, 2, 3, 4],
    "n": 33,
    "large_n": 1_000_000,
    "eps": "sqrt2/35",
    "convention": "uniform",
    "seed": None,
    "radius": None,
    "n_radial": None,
    "n_angular": None,
}


@dataclass
class Check:
    name: str
    value: float
    expected: float
    tolerance: float
    relation: str = "abs"  # "abs": |value - expected| <= tol; "le": value <= tol; "ge": value >= tol
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        if not np.isfinite(self.value):
            return False
        if self.relation == "le":
            return self.value <= self.tolerance
        if self.relation == "ge":
            return self.value >= self.tolerance
        return abs(self.value - self.expected) <= self.tolerance

    def to_dict(self):
        d = {
            "name": self.name,
            "value": float(self.value),
            "expected": float(self.expected),
            "tolerance": float(self.tolerance),
            "pass": bool(self.passed),
        }
        if self.details:
            d["details"] = self.details
        return d


def _complex_list(values):
    if isinstance(values, (str, int, float, complex)):
        values = [values]
    return [complex(str(v).replace(" ", "").replace("i", "j")) for v in values]


def _float_list(values):
    if isinstance(values, (int, float, str)):
        values = [values]
    return [float(v) for v in values]


def _grid_override(cfg, tol, kappa, block):
    if cfg.get("radius") is None and cfg.get("n_radial") is None and cfg.get("n_angular") is None:
        return None
    return closure.default_grid(tol, kappa, block, radius=cfg.get("radius"),
                                n_radial=cfg.get("n_radial"), n_angular=cfg.get("n_angular"))


# --- closure -----------------------------------------------------------------


def closure_suite(cfg):
    tol = cfg["tol"]
    block = cfg["block"]
    out = []
    rep = closure.standard_closure(block, min(tol, 1e-8), _grid_override(cfg, min(tol, 1e-8), 1.0, block))
    out.append(Check("standard closure dev_max", rep.dev_max, 0.0, tol, "le", {"grid": rep.grid}))
    rng = np.random.default_rng(0)
    nodes = rng.uniform(-4, 4, 1000) + 1j * rng.uniform(-4, 4, 1000)
    for lam in _float_list(cfg["lambda"]):
        rep = closure.lambda_closure(lam, block=8, tol=min(tol, 1e-8))
        out.append(Check(f"lambda={lam:g} closure dev_max", rep.dev_max, 0.0, tol, "le", {"grid": rep.grid}))
        agree = closure.lambda_weight_agreement(lam, nodes)
        out.append(Check(f"lambda={lam:g} weight forms pointwise", agree, 0.0, 1e-12, "le"))
    for zeta in _complex_list(cfg["zeta"]):
        rep = closure.weyl_closure(zeta, block=max(6, min(block, 10)), tol=min(tol, 1e-8))
        out.append(Check(f"weyl zeta={zeta:g} closure dev_max", rep.dev_max, 0.0, max(tol, 1e-5), "le",
                         {"grid": rep.grid}))
    out.extend(b_operator_checks(_complex_list(cfg["b_zeta"]), tol))
    rep = closure.double_closure(block=8, tol=min(tol, 1e-8))
    out.append(Check("double closure dev_max", rep.dev_max, 0.0, tol, "le"))
    return out


def b_operator_checks(zetas, tol=1e-6):
    """Measured constants of the bare-weight operator against ``exp(-5|zeta|^2/2)``."""
    out, consts = [], []
    for zeta in zetas:
        rep = closure.b_operator(zeta, block=8, tol=min(tol, 1e-8))
        M = rep.matrix
        diag = np.diag(M)
        off = float(np.max(np.abs(M - np.diag(diag))))
        spread = float(np.max(np.abs(diag - diag.mean())))
        out.append(Check(f"B zeta={zeta:g} off-diagonal", off, 0.0, 1e-6, "le"))
        out.append(Check(f"B zeta={zeta:g} diagonal spread", spread, 0.0, 1e-6, "le"))
        c = float(diag.mean().real)
        consts.append((abs(zeta) ** 2, c))
        out.append(Check(f"B zeta={zeta:g} constant", c, math.exp(-2.5 * abs(zeta) ** 2), 1e-6, "abs",
                         {"notes": rep.notes}))
    (s1, c1), (s2, c2) = consts[:2]
    k = math.log(c1 / c2) / (s1 - s2)
    out.append(Check("B constant exponent k in exp(k|zeta|^2)", k, -2.5, 1e-6, "abs"))
    # the normalized Weyl-offset closure gives 1; the bare weight does not
    out.append(Check("B constant departs from 1", abs(c1 - 1.0), 0.0, 1e-3, "ge"))
    return out


# --- spin --------------------------------------------------------------------


def spin_suite(cfg):
    out = []
    for two_j in cfg["two_j"]:
        sys_ = spin.SpinSystem(int(two_j))
        beta = spin.beta_oracle(sys_)
        out.append(Check(f"j={sys_.j:g} beta oracle", float(np.max(np.abs(beta - 1))), 0.0, 1e-12, "le"))
        for lam in _float_list(cfg["lambda"]):
            rep = spin.spin_unlike_closure(sys_, lam)
            out.append(Check(f"j={sys_.j:g} lambda={lam:g} diagonal deviation", rep.dev_max, 0.0, 1e-10, "le"))
            off = float(np.max(np.abs(rep.matrix - np.diag(np.diag(rep.matrix)))))
            out.append(Check(f"j={sys_.j:g} lambda={lam:g} off-diagonal", off, 0.0, 0.0, "le"))
    return out


# --- weak values -------------------------------------------------------------


def weak_hamiltonians():
    return {
        "harmonic": ladder.harmonic(1.0),
        "kerr": ladder.kerr(0.3),
        "quartic": ladder.quartic_position(0.1),
    }


def weak_suite(cfg):
    out = []
    z = 0.7 - 0.4j
    direction = np.exp(0.6j)
    ts = np.logspace(-3, -1, 9)
    for name, H in weak_hamiltonians().items():
        slope, _, _ = weak.expansion_slope(lambda t: weak.ZetaPair(z, t * direction), H, ts)
        out.append(Check(f"{name} expansion slope", slope, 2.0, 0.1, "abs"))
    H = ladder.harmonic(1.0)
    worst = 0.0
    for zeta in (0.2 + 0.1j, -0.5j, 0.8):
        hz = weak.h_zeta(weak.ZetaPair(z, zeta), H)
        closed = (np.conj(z + zeta) * (z - zeta) + 0.5)
        worst = max(worst, abs(hz - closed))
    out.append(Check("oscillator weak value closed form", worst, 0.0, 1e-10, "le"))
    space = FockSpace(60)
    pair = weak.ZetaPair(z, 0.3 + 0.2j)
    diff = abs(weak.h_zeta(pair, H) - weak.h_zeta(pair, H.matrix(space), space))
    out.append(Check("weak value closed form vs Fock matrix", diff, 0.0, 1e-10, "le"))
    return out


# --- propagator --------------------------------------------------------------


def oscillator_orbit(z0=0.8 + 0.3j, omega=1.0, T=2.0, samples=401):
    t = np.linspace(0.0, T, samples)
    return z0 * np.exp(-1j * omega * t), T


def action_reduction(samples=401):
    """``(|S - S_classical|, |surface|)`` for the zero-offset oscillator orbit.

    The classical side is built from ``q, p`` of the same samples with the
    same difference and integration rules.
    """
    z, T = oscillator_orbit(samples=samples)
    H = ladder.harmonic(1.0)
    path = PathSpec(z, np.zeros_like(z), T, H)
    surface, action = propagator.weak_action(path)
    t = path.times
    q, p = math.sqrt(2) * z.real, math.sqrt(2) * z.imag
    qd = np.gradient(q, t, edge_order=2)
    pd = np.gradient(p, t, edge_order=2)
    # H_0 = <z|H|z> keeps the zero-point term
    h0 = 0.5 * (q**2 + p**2) + 0.5
    classical = propagator.time_integral(0.5 * (p * qd - q * pd) - h0, t)
    return abs(action - classical), abs(surface)


def propagator_suite(cfg):
    out = []
    H = ladder.harmonic(1.0)
    worst = 0.0
    for z1, z2, T in [(0.5, 0.4 - 0.2j, 0.1), (1.5 + 0.5j, -1 + 1j, 2.0), (2.0, 2.0j, math.pi), (0, 1.2, 1.0)]:
        res = propagator.exact_propagator(z1, z2, T, H)
        worst = max(worst, abs(res.value - propagator.oscillator_propagator(z1, z2, T)))
    out.append(Check("exact propagator vs analytic", worst, 0.0, 1e-8, "le"))
    z1, z2, T = 0.5, 0.4 - 0.2j, 1.0
    d0 = propagator.insertion_identity_check(z1, z2, T, 0.0, H)
    out.append(Check("insertion identity zeta=0", d0, 0.0, 1e-8, "le"))
    d1 = propagator.insertion_identity_check(z1, z2, T, 0.2 + 0.1j, H)
    out.append(Check("insertion identity zeta=0.2+0.1i", d1, 0.0, 1e-6, "le"))
    z1, z2 = 0.5, 0.4 - 0.2j
    res = propagator.discrete_propagator(z1, z2, 0.1, 1, np.zeros(3), H)
    err = abs(res.value - propagator.oscillator_propagator(z1, z2, 0.1))
    out.append(Check("discrete propagator N=1 wT=0.1", err, 0.0, 1e-3, "le",
                     {"error_estimate": res.error_estimate}))
    p, _, rows = propagator.slicing_error_fit(z1, z2, [0.4, 0.2, 0.1, 0.05], H,
                                              lambda T: propagator.oscillator_propagator(z1, z2, T))
    out.append(Check("slicing error exponent", p, 2.0, 0.3, "abs",
                     {"rows": [[r[0], r[1], r[2]] for r in rows]}))
    if cfg.get("seed") is not None:
        mc = propagator.discrete_propagator(z1, z2, 0.4, 3, np.zeros(5), H, monte_carlo=True,
                                            seed=int(cfg["seed"]))
        e = abs(mc.value - propagator.oscillator_propagator(z1, z2, 0.4))
        out.append(Check("monte carlo N=3 within 4 error estimates", e, 0.0, 4 * mc.error_estimate, "le"))
    gap, surface = action_reduction()
    out.append(Check("zero-offset action equals classical action", gap, 0.0, 1e-10, "le"))
    out.append(Check("surface term with zeta(T)=0", surface, 0.0, 0.0, "le"))
    return out


# --- plane toy ---------------------------------------------------------------


def plane_suite(cfg):
    eps = plane.parse_epsilon(cfg["eps"])
    out = []
    fr = plane.PlaneFrame(int(cfg["n"]), eps, convention=cfg["convention"])
    I = np.eye(2)
    out.append(Check(f"N={fr.N} min pairwise overlap", fr.min_overlap, 0.0, 1e-8, "ge"))
    B, _ = plane.unlike_operator(fr)
    out.append(Check(f"N={fr.N} |A_N - I|max", float(np.max(np.abs(plane.frame_operator(fr) - I))),
                     0.0, 5 * eps, "le"))
    out.append(Check(f"N={fr.N} |B_N - I|max (reported)", float(np.max(np.abs(B - I))), 0.0, math.inf, "le"))
    big = plane.PlaneFrame(int(cfg["large_n"]), eps)
    out.append(Check(f"N={big.N} min pairwise overlap", big.min_overlap, 0.0, 1e-8, "ge"))
    Bbig, _ = plane.unlike_operator(big)
    out.append(Check(f"N={big.N} |B_N - I|max", float(np.max(np.abs(Bbig - I))), 0.0, 10 * eps, "le"))
    L, Jp, Jm = plane.anisotropy_constants(big.delta_theta)
    L_sum = math.cos(big.delta_theta) / big.delta_theta * plane.sec_midpoint(big.delta_theta)
    out.append(Check("L quadrature vs discrete sum", L, L_sum, 1e-3, "abs"))
    Bpv, _ = plane.unlike_operator(big, "pv")
    out.append(Check(f"N={big.N} regularized B_N vs limit", float(np.max(np.abs(Bpv - plane.limit_operator(big.delta_theta)))),
                     0.0, 1e-3, "le"))
    out.append(Check("|J+|", abs(Jp), 0.0, 10 * eps**2, "le"))
    out.append(Check("|J-|", abs(Jm), 0.0, 10 * eps**2, "le"))
    return out


# --- transforms --------------------------------------------------------------


def transforms_suite(cfg):
    out = []
    space = FockSpace(20)
    rng = np.random.default_rng(1)
    M = rng.normal(size=(space.dim, space.dim)) + 1j * rng.normal(size=(space.dim, space.dim))
    A = M + M.conj().T
    q, p, x = rng.uniform(-2, 2, 1000), rng.uniform(-2, 2, 1000), rng.uniform(-4, 4, 1000)
    f1, f2 = transforms.weyl_integrands(A, q, p, x, space)
    rel = float(np.max(np.abs(f1 - f2)) / np.max(np.abs(f1)))
    out.append(Check("weyl forms pointwise", rel, 0.0, 1e-12, "le"))
    vac = np.zeros((space.dim, space.dim))
    vac[0, 0] = 1.0
    worst = max(abs(transforms.weyl_symbol(vac, qq, pp, space) - transforms.vacuum_symbol(qq, pp))
                for qq, pp in [(0, 0), (0.5, -0.3), (1.2, 0.7), (-2, 1)])
    out.append(Check("vacuum symbol vs Gaussian", worst, 0.0, 1e-6, "le"))
    imag = max(abs(transforms.weyl_symbol(A, qq, pp, space).imag) for qq, pp in [(0.3, 0.1), (-1, 0.8)])
    out.append(Check("hermitian symbol imaginary part", imag, 0.0, 1e-10, "le"))
    z0, w, s = 0.6 + 0.3j, 0.2 - 0.5j, 1.1 + 0.4j
    num = transforms.dual_bargmann(transforms.coherent_bargmann(z0), w, (0, s))
    exact = math.exp(-0.5 * abs(z0) ** 2) * (np.exp(s * (z0 - w)) - 1) / (z0 - w)
    out.append(Check("dual Bargmann segment vs antiderivative", abs(num - exact), 0.0, 1e-10, "le"))
    xs = np.linspace(-20, 20, 4001)
    psi = transforms.PositionWavefunction.from_fock([1.0], xs)
    diff = max(transforms.fourier_identity_check(psi, pp) for pp in (0.0, 1.0))
    out.append(Check("Fourier two-form difference", diff, 0.0, 1e-12, "le"))
    return out


SUITES = {
    "closure": closure_suite,
    "spin": spin_suite,
    "weak": weak_suite,
    "propagator": propagator_suite,
    "plane": plane_suite,
    "transforms": transforms_suite,
}
