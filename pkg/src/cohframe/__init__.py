"""Numerical checks of coherent-state resolutions of unity, unlike outer
products, weak energy values, sliced path integrals and overcomplete
frames in the plane."""

from .closure import (
    ClosureError,
    ClosureReport,
    ClosureSpec,
    b_operator,
    double_closure,
    evaluate_closure,
    lambda_closure,
    standard_closure,
    weyl_closure,
)
from .fock import (
    CutoffError,
    FockSpace,
    StateVector,
    coherent_vector,
    displacement_matrix,
    evolve,
    ladder_matrices,
    number_matrix,
)
from .ladder import LadderPolynomial, harmonic, kerr, quartic_position
from .plane import FrameError, PlaneFrame, anisotropy_constants, frame_operator, unlike_operator
from .propagator import (
    Method,
    PathSpec,
    PropagatorResult,
    discrete_propagator,
    exact_propagator,
    insertion_identity_check,
    oscillator_propagator,
    weak_action,
)
from .quadrature import PhaseGrid, PVRule, build_polar_grid, pv_integrate
from .spin import SpinSystem, spin_coherent, spin_standard_closure, spin_unlike_closure
from .transforms import PositionWavefunction, dual_bargmann, fourier_identity_check, weyl_symbol
from .weak import WeakValue, ZetaPair, h_zeta, h_zeta_first_order, weak_value

__version__ = "0.1.0"
