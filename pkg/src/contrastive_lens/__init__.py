"""Contrastive dimensionality reduction: directions of high target variance
and low background variance, with automatic contrast-parameter selection,
a kernelized variant, and empirical verification of the sweep's optimality.
"""

from .alpha_select import (
    SelectionResult,
    auto_select,
    log_grid,
    principal_angles,
    spectral_cluster,
    subspace_affinity,
    sweep,
)
from .cpca import (
    CpcaModel,
    contrastive_matrix,
    denoise,
    feature_weights,
    fit,
    fit_infinite,
    transform,
)
from .datasets import (
    LabeledDataset,
    gen_random_pair,
    gen_toy_appendix_a,
    gen_toy_kernel,
)
from .errors import NumericError, ValidationError
from .geometry import (
    BoundarySample,
    VariancePair,
    boundary,
    certify_theorem1,
    more_contrastive,
    sample_unit_sphere,
    simdiag_boundary,
    tangency_check,
)
from .kernel import (
    KernelCpcaModel,
    KernelSpec,
    fit_kernel,
    gram,
    training_projection,
    transform_kernel,
)
from .linalg import (
    Spectrum,
    Subspace,
    center_columns,
    covariance,
    project,
    sym_eigh,
)

__version__ = "0.1.0"

__all__ = [
    "BoundarySample",
    "CpcaModel",
    "KernelCpcaModel",
    "KernelSpec",
    "LabeledDataset",
    "NumericError",
    "SelectionResult",
    "Spectrum",
    "Subspace",
    "ValidationError",
    "VariancePair",
    "auto_select",
    "boundary",
    "center_columns",
    "certify_theorem1",
    "contrastive_matrix",
    "covariance",
    "denoise",
    "feature_weights",
    "fit",
    "fit_infinite",
    "fit_kernel",
    "gen_random_pair",
    "gen_toy_appendix_a",
    "gen_toy_kernel",
    "gram",
    "log_grid",
    "more_contrastive",
    "principal_angles",
    "project",
    "sample_unit_sphere",
    "simdiag_boundary",
    "spectral_cluster",
    "subspace_affinity",
    "sweep",
    "sym_eigh",
    "tangency_check",
    "training_projection",
    "transform",
    "transform_kernel",
]
