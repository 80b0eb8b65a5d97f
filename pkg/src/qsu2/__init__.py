"""Numerics for su_q(2) representations on the two-sphere."""
from .qcore import HalfInt, QParam, Regime, SpinTriple, q_bracket, q_factorial
from .qprod import TruncationPolicy, q_real
from .contour import LqEvaluator, l_q
from .vilenkin import (
    VilenkinSpec,
    classical_vilenkin,
    p_vilenkin,
    psi_plane,
    psi_spherical,
    q_function,
)
from .algebra import AngularMode, apply_h3, apply_h_minus, apply_h_plus, psi_mode
from .inner import QPair, gram_matrix, scalar_product

__version__ = "0.1.0"
