"""Certified computation of rigidity constants for cosine sequences."""

__version__ = "0.1.0"

from .angles import IRRATIONAL, RationalAngle, angles_of_order, canonicalize, inverse_totient, order_of, totient
from .certified import CertScalar, ClosedForm, PrecisionExhausted, cos_pi_rational, matches_closed_form
from .cyclic import AngleSet, SupResult, gamma, gamma_zero, reduce_pair, sup_distance, sup_distance_to_triple
from .kconst import KValue, k_of_angle, k_of_order, omega, sigma, theta
from .realsup import order_threshold, taylor_tables, trig_diff_sup

__all__ = [
    "IRRATIONAL",
    "AngleSet",
    "CertScalar",
    "ClosedForm",
    "KValue",
    "PrecisionExhausted",
    "RationalAngle",
    "SupResult",
    "angles_of_order",
    "canonicalize",
    "cos_pi_rational",
    "gamma",
    "gamma_zero",
    "inverse_totient",
    "k_of_angle",
    "k_of_order",
    "matches_closed_form",
    "omega",
    "order_of",
    "order_threshold",
    "reduce_pair",
    "sigma",
    "sup_distance",
    "sup_distance_to_triple",
    "taylor_tables",
    "theta",
    "totient",
    "trig_diff_sup",
]
