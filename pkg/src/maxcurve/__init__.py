"""Maximal curves over F_{q^2} given as Kummer covers w^m = f(z): places,
Riemann-Roch spaces, Weierstrass gaps and Stohr-Voloch invariants."""

from .curve import CurveError, FunctionFieldElement, KummerCurve, LocalChart, Place
from .family import make_family_curve, make_hermitian, reproduce_table, sample_curves
from .ff import FieldElement, FieldSpec, get_field
from .places import Divisor, count_rational_points, is_maximal, principal_divisor, valuation
from .rrspace import canonical_space, rr_basis, semigroup_at
from .sv import LinearSystem, OrderData, canonical_system, order_data, system_D

__version__ = "0.1.0"

__all__ = [
    "CurveError",
    "Divisor",
    "FieldElement",
    "FieldSpec",
    "FunctionFieldElement",
    "KummerCurve",
    "LinearSystem",
    "LocalChart",
    "OrderData",
    "Place",
    "canonical_space",
    "canonical_system",
    "count_rational_points",
    "get_field",
    "is_maximal",
    "make_family_curve",
    "make_hermitian",
    "order_data",
    "principal_divisor",
    "reproduce_table",
    "rr_basis",
    "semigroup_at",
    "system_D",
    "sample_curves",
    "valuation",
]
