from .scalars import GaussRat, QuadraticNumber, I_EXACT, exact_array, to_complex, rational_sqrt, is_zero
from .poly import SpacetimePoly, poly_derive, all_exponents, stack
from .jets import LaurentTaylorJet, JetWindow, JetWindowError, SEQUENCE_WINDOW, jet_mul, jet_invert
from .ode import ODEState, ode_integrate, linear, NonFiniteStateError
from .quadrature import quadrature_line, quadrature_nodes

__all__ = [
    "GaussRat", "QuadraticNumber", "I_EXACT", "exact_array", "to_complex", "rational_sqrt", "is_zero",
    "SpacetimePoly", "poly_derive", "all_exponents", "stack",
    "LaurentTaylorJet", "JetWindow", "JetWindowError", "SEQUENCE_WINDOW", "jet_mul", "jet_invert",
    "ODEState", "ode_integrate", "linear", "NonFiniteStateError",
    "quadrature_line", "quadrature_nodes",
]
