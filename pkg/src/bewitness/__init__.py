"""Bound entangled states from unextendible product bases.

Constructions of UPB-generated PPT entangled states and their subset
mixtures, witness operators certifying their entanglement, range-criterion
verification, and a convex-decomposition separability test, with a CLI tying
the pieces into file-based workflows.
"""

from bewitness.backends import BACKEND, using_compiled
from bewitness.kernel import (
    BipartiteDims,
    EigenSystem,
    KernelError,
    NnlsResult,
    SubspaceBasis,
    hermitian_eig,
    kron,
    nnls,
    orthonormal_range,
    partial_transpose,
)
from bewitness.rangecrit import (
    FeasibilityResult,
    ProductStateFindings,
    RcVerdict,
    computational_product_basis,
    convex_decomposition_feasibility,
    find_product_states,
    range_criterion_check,
    six_state_pool,
    tiles_range_product_basis,
)
from bewitness.states import (
    DensityOperator,
    PptReport,
    ppt_report,
    rho_be,
    rho_g,
    spectrum_and_rank,
)
from bewitness.upb import (
    ProductVector,
    SubspaceProjector,
    UnextendibilityCertificate,
    UpbSet,
    min_product_overlap,
    padded_real_upb,
    projector,
    real_grid_overlap_minimum,
    tiles_upb,
    unextendibility_certificate,
)
from bewitness.witness import (
    SchmidtSpectrum,
    WitnessSpec,
    basic_witness,
    better_witness_condition,
    maximally_entangled_complement_state,
    projector_witness,
    schmidt,
    witness_value,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BipartiteDims",
    "DensityOperator",
    "EigenSystem",
    "FeasibilityResult",
    "KernelError",
    "NnlsResult",
    "PptReport",
    "ProductStateFindings",
    "ProductVector",
    "RcVerdict",
    "SchmidtSpectrum",
    "SubspaceBasis",
    "SubspaceProjector",
    "UnextendibilityCertificate",
    "UpbSet",
    "WitnessSpec",
    "basic_witness",
    "better_witness_condition",
    "computational_product_basis",
    "convex_decomposition_feasibility",
    "find_product_states",
    "hermitian_eig",
    "kron",
    "maximally_entangled_complement_state",
    "min_product_overlap",
    "nnls",
    "orthonormal_range",
    "padded_real_upb",
    "partial_transpose",
    "ppt_report",
    "projector",
    "projector_witness",
    "range_criterion_check",
    "real_grid_overlap_minimum",
    "rho_be",
    "rho_g",
    "schmidt",
    "six_state_pool",
    "spectrum_and_rank",
    "tiles_range_product_basis",
    "tiles_upb",
    "unextendibility_certificate",
    "using_compiled",
    "witness_value",
]
