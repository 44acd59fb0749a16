from .bundle import (
    JetPoint, FracSpray, liouville_weights, spray_weights, liouville_field,
    tangent_structure, tangent_structure_matrix, spray_field, spray_property_residual,
    ladder_derivation, spray_derivation, jet_transform, jet_roundtrip_residual
)
from .connection import (
    DualCoefficients, PrimalCoefficients, MetricField, MetricalConnection,
    dual_ladder, riemann_ladder, spray_to_dual, primal_to_dual, dual_to_primal,
    adapted_basis, dual_basis, pairing_residual, metrical_connection,
    covariant_derivative_d_tensor, metricity_residual, sasaki_lift, zero_primal
)
