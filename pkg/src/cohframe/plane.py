"""Overcomplete unit-vector frames in the plane and their unlike sums.

The frame is ``|Z_n> = cos(theta_n)|U> + sin(theta_n)|V>`` with
``theta_n = n * step``, ``n = 1..N``.  The default step is ``delta_theta/N``;
``convention="endpoint"`` uses ``delta_theta/(N-1)``.  With
``delta_theta = (2 - eps) pi`` and irrational ``eps`` no two frame vectors are
orthogonal.

The unlike sum pairs ``<Z_n|`` with ``|Z_{N-n}>`` and divides by their
overlap.  Its terms blow up near the zeros of ``cos(2 theta - delta_theta)``,
so the plain sum oscillates with ``N`` instead of settling.  The
``prescription="pv"`` variant subtracts each pole and adds back its
principal value, which converges to the anisotropy constants of
:func:`anisotropy_constants`.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .quadrature import PVRule, gauss_legendre, pv_integrate

SQRT2_OVER_35 = math.sqrt(2.0) / 35.0
DENOMINATOR_FLOOR = 1e-12


def parse_epsilon(text):
    """Parse ``"sqrt2/35"``, ``"sqrt(2)/35"`` or a plain float."""
    t = str(text).replace(" ", "").lower()
    for prefix in ("sqrt(2)", "sqrt2"):
        if t.startswith(prefix):
            rest = t[len(prefix):]
            val = math.sqrt(2.0)
            if rest.startswith("/"):
                val /= float(rest[1:])
            elif rest.startswith("*"):
                val *= float(rest[1:])
            elif rest:
                raise ValueError(f"cannot parse epsilon {text!r}")
            return val
    return float(t)


class FrameError(ValueError):
    pass


@dataclass
class PlaneFrame:
    N: int
    epsilon: float = SQRT2_OVER_35
    delta_theta: float = None
    convention: str = "uniform"
    min_overlap: float = field(init=False)

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("N must be at least 2")
        if self.delta_theta is None:
            if not 0 < self.epsilon < 0.5:
                raise ValueError("epsilon must lie in (0, 0.5)")
            self.delta_theta = (2.0 - self.epsilon) * math.pi
        else:
            self.epsilon = 2.0 - self.delta_theta / math.pi
        if self.convention not in ("uniform", "endpoint"):
            raise ValueError(f"unknown convention {self.convention!r}")
        # pairwise overlaps depend only on n - m
        d = np.arange(self.N)
        self.min_overlap = float(np.min(np.abs(np.cos(d * self.step))))

    @property
    def step(self):
        return self.delta_theta / (self.N if self.convention == "uniform" else self.N - 1)

    def angles(self, indices=None):
        n = np.arange(1, self.N + 1) if indices is None else np.asarray(indices)
        return n * self.step

    def vectors(self, indices=None):
        th = self.angles(indices)
        return np.stack([np.cos(th), np.sin(th)], axis=-1)

    def coordinates_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "theta", "x", "y"])
        for n, th in zip(range(1, self.N + 1), self.angles()):
            w.writerow([n, repr(float(th)), repr(float(math.cos(th))), repr(float(math.sin(th)))])
        return buf.getvalue()


def frame_operator(frame: PlaneFrame):
    """``(2/N) sum_n |Z_n><Z_n|``."""
    Z = frame.vectors()
    return 2.0 / frame.N * Z.T @ Z


def unlike_sum(vectors, partners):
    """``(2/N) sum_n |P_n><Z_n| / <Z_n|P_n>`` for explicit vector lists.

    Returns ``(matrix, max |1/<Z_n|P_n>|)``; a vanishing overlap raises
    :class:`FrameError` naming the offending term.
    """
    Z = np.asarray(vectors, dtype=float)
    P = np.asarray(partners, dtype=float)
    ov = np.einsum("ij,ij->i", Z, P)
    bad = np.flatnonzero(np.abs(ov) < DENOMINATOR_FLOOR)
    if bad.size:
        raise FrameError(f"overlap <Z_n|Z_k(n)> vanishes at n={bad[0] + 1} (orthogonal pair)")
    w = 1.0 / ov
    return 2.0 / len(Z) * (P * w[:, None]).T @ Z, float(np.max(np.abs(w)))


def _poles(delta_theta):
    """Zeros of ``cos(2 theta - delta_theta)`` inside ``(0, delta_theta)`` with residues of the secant."""
    out = []
    k = math.ceil((-delta_theta - math.pi / 2) / math.pi)
    while True:
        th = (delta_theta + math.pi / 2 + k * math.pi) / 2
        if th >= delta_theta:
            break
        if th > 0:
            out.append((th, -((-1) ** k) / 2.0))
        k += 1
    return out


def unlike_operator(frame: PlaneFrame, prescription="raw"):
    """``(2/N) sum_n |Z_{N-n}><Z_n| / <Z_n|Z_{N-n}>`` as a 2x2 matrix.

    Returns ``(matrix, stats)``.  ``prescription="pv"`` replaces the
    singular part of every secant pole by its principal value (uniform
    convention only).
    """
    n = np.arange(1, frame.N + 1)
    Z = frame.vectors(n)
    P = frame.vectors(frame.N - n)
    B, amp = unlike_sum(Z, P)
    stats = {"max_weight": amp, "min_overlap": frame.min_overlap}
    if prescription == "raw":
        return B, stats
    if prescription != "pv":
        raise ValueError(f"unknown prescription {prescription!r}")
    if frame.convention != "uniform":
        raise ValueError("the PV prescription is defined for the uniform convention")
    D, N = frame.delta_theta, frame.N
    th = frame.angles(n)
    for tp, res in _poles(D):
        Mp = np.outer([math.cos(D - tp), math.sin(D - tp)], [math.cos(tp), math.sin(tp)])
        # drop the discrete pole sum, add its principal value
        discrete = 2.0 / N * np.sum(1.0 / (th - tp))
        pv = 2.0 / D * math.log(abs((D - tp) / tp))
        B = B + res * Mp * (pv - discrete)
    return B, stats


def sec_pv(delta_theta, order=32):
    """``PV integral_0^dt sec(2 theta - dt) d theta``."""
    rule = PVRule(0.0, delta_theta, tuple(p for p, _ in _poles(delta_theta)), order)
    return pv_integrate(lambda t: 1.0 / np.cos(2 * t - delta_theta), rule)


def tan_pv(delta_theta, order=32):
    """``PV integral_0^dt tan(2 theta - dt) d theta``."""
    rule = PVRule(0.0, delta_theta, tuple(p for p, _ in _poles(delta_theta)), order)
    return pv_integrate(lambda t: np.tan(2 * t - delta_theta), rule)


def anisotropy_constants(delta_theta, form="derived"):
    """``(L, J_plus, J_minus)`` of the large-N unlike sum.

    ``L = cos(dt)/dt * PV int sec``.  The off-diagonal limits are
    ``J_pm = tan(dt) L pm PV int tan / dt`` (``form="derived"``, what the sum
    actually converges to).  ``form="short"`` uses ``tan(dt)/dt * L`` for
    the first term instead; it is smaller by a factor ``dt``.
    """
    D = float(delta_theta)
    if any(abs(math.cos(2 * t - D)) < 1e-300 for t in (0.0, D)):
        raise FrameError("pole at an integration endpoint")
    L = math.cos(D) / D * sec_pv(D)
    if form == "derived":
        first = math.tan(D) * L
    elif form == "short":
        first = math.tan(D) / D * L
    else:
        raise ValueError(f"unknown form {form!r}")
    t = tan_pv(D) / D
    return L, first + t, first - t


def limit_operator(delta_theta, form="derived"):
    """``diag(1+L, 1-L) + J_plus |U><V| + J_minus |V><U|``."""
    L, Jp, Jm = anisotropy_constants(delta_theta, form)
    return np.array([[1.0 + L, Jp], [Jm, 1.0 - L]])


def sweep(Ns, epsilon=SQRT2_OVER_35, convention="uniform"):
    """Rows ``(N, |A-I|max, |B-I|max raw, |B-I|max pv, L, J_plus, J_minus)``."""
    D = (2.0 - epsilon) * math.pi
    L, Jp, Jm = anisotropy_constants(D)
    rows = []
    for N in Ns:
        fr = PlaneFrame(int(N), epsilon, convention=convention)
        I = np.eye(2)
        a = float(np.max(np.abs(frame_operator(fr) - I)))
        b_raw = float(np.max(np.abs(unlike_operator(fr)[0] - I)))
        b_pv = float(np.max(np.abs(unlike_operator(fr, "pv")[0] - I))) if convention == "uniform" else float("nan")
        rows.append((int(N), a, b_raw, b_pv, L, Jp, Jm))
    return rows


def sec_midpoint(delta_theta, m=4096):
    """Discrete-sum estimate of ``PV int_0^dt sec(2 theta - dt) d theta``.

    A midpoint sum on cells of width ``pi/(2m)`` aligned so every pole lies
    on a cell boundary.  The two nodes flanking a pole cancel its singular
    part.  The partial cells at the two ends are smooth and use
    Gauss-Legendre.
    """
    D = float(delta_theta)
    poles = [p for p, _ in _poles(D)]
    h = math.pi / (2 * m)
    # nodes at pole +- (k + 1/2) h; the pole spacing pi/2 is a multiple of h
    k_lo = math.ceil((0.0 - poles[0]) / h - 0.5)
    k_hi = math.floor((D - poles[0]) / h - 0.5)
    k = np.arange(k_lo, k_hi + 1)
    nodes = poles[0] + (k + 0.5) * h
    # keep cells fully inside [0, D]
    nodes = nodes[(nodes - h / 2 >= 0.0) & (nodes + h / 2 <= D)]
    total = math.fsum(h / np.cos(2 * nodes - D))
    x, w = gauss_legendre(16, 0.0, nodes[0] - h / 2)
    total += float(np.sum(w / np.cos(2 * x - D)))
    x, w = gauss_legendre(16, nodes[-1] + h / 2, D)
    total += float(np.sum(w / np.cos(2 * x - D)))
    return total
