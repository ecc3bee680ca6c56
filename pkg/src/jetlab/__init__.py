"""jetlab: exact power-series verification of a hypersurface stability group.

Sparse truncated multivariate series over the Gaussian rationals, the
closed-form automorphism family of the model hypersurface
w = conj(w) * (i*|z|^2 + sqrt(1 - |z|^4)), invariance residuals, the
parameter group, and jet-based reconstruction.  Everything except the
radius estimate is exact.
"""

from .gaussrat import GaussRat
from .series import MultiSeries, lowest_nonzero, slice_var, variables, w_slice
from .hypersurface import (
    FormalMap,
    defining_series,
    first_defect,
    invariance_residual,
    satisfies_defining_identity,
    sphere_automorphism,
    sphere_residual,
)
from .automorphisms import (
    AutParams,
    GroupElem,
    build_automorphism,
    compose_maps,
    compose_params,
    denominator_series,
    group_compose,
    group_inverse,
    group_to_params,
    inverse_params,
    params_to_group,
    radius_estimate,
    radius_root_sequence,
)
from .jet_solver import (
    JetData,
    JetSeed,
    Reconstruction,
    StepMatrix,
    StepReport,
    UnrealizableJetError,
    extract_jet,
    jets_agree,
    params_from_jet,
    params_from_seed,
    reconstruct,
    residual_vanishes_through_order,
    seed_from_jet,
    seed_from_params,
    step_det_closed_form,
    step_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "AutParams",
    "FormalMap",
    "GaussRat",
    "GroupElem",
    "JetData",
    "JetSeed",
    "MultiSeries",
    "Reconstruction",
    "StepMatrix",
    "StepReport",
    "UnrealizableJetError",
    "build_automorphism",
    "compose_maps",
    "compose_params",
    "defining_series",
    "denominator_series",
    "extract_jet",
    "first_defect",
    "group_compose",
    "group_inverse",
    "group_to_params",
    "invariance_residual",
    "inverse_params",
    "jets_agree",
    "lowest_nonzero",
    "params_from_jet",
    "params_from_seed",
    "params_to_group",
    "radius_estimate",
    "radius_root_sequence",
    "reconstruct",
    "residual_vanishes_through_order",
    "satisfies_defining_identity",
    "seed_from_jet",
    "seed_from_params",
    "slice_var",
    "sphere_automorphism",
    "sphere_residual",
    "step_det_closed_form",
    "step_matrix",
    "variables",
    "w_slice",
]
