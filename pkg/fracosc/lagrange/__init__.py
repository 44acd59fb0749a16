from .euler_lagrange import (
    FracLagrangian, ExtremalCurve, ThirdOrderExample, total_derivative,
    el_operator, el_operator_frac, el_operator_classical, el_residual_frac,
    el_residual_classical, el_discrepancy, fundamental_tensor_field, fundamental_tensor,
    craig_synge_operator, craig_synge, craig_synge_closed_form, craig_synge_discrepancy,
    extract_spray, action, random_jet_points, sample_operators
)
from .prolongation import (
    RiemannStructure, FinslerStructure, christoffel, riemann_spray, cartan_coefficients,
    prolong_riemann, prolong_finsler, prolong_lagrange, lagrange_spray_components,
    lagrangian_of_metric
)
