"""Multiparticle singlet subspaces, uniformity diagnostics, and the
counting certificate that keeps the two apart."""

from .states import (
    DEFAULT_TOL,
    LocalOperator,
    MarginalMatrix,
    PureState,
    SupportProfile,
    SystemShape,
    apply_collective,
    apply_local,
    cross_marginal,
    enumerate_support,
    load_state,
    partial_trace,
    permutation_sign,
    permute_particles,
    save_state,
    state_from_dict,
    state_to_dict,
    superpose,
)
from .singlet import (
    PhaseFunctionError,
    PhaseFunctionReport,
    SingletBasis,
    SubspaceRankError,
    basis_from_dict,
    basis_to_dict,
    build_singlet_basis,
    check_sign_relation,
    expected_dimension,
    extract_phase_function,
    haar_unitary,
    load_basis,
    save_basis,
    standard_traceless_generators,
    verify_invariance,
)
from .uniformity import UniformityReport, is_ame, is_k_uniform, pair_deficit, report_to_dict
from .nogo import (
    CertificateCheck,
    CertificateViolationError,
    NoGoCertificate,
    certificate_to_dict,
    certify,
    check_to_dict,
    counting_sum,
    verify_certificate_numerically,
)
from .optimize import (
    OptimizationResult,
    PairDeficitObjective,
    gradient_check,
    minimize_deficit,
    result_to_dict,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL",
    "SystemShape",
    "SupportProfile",
    "PureState",
    "LocalOperator",
    "MarginalMatrix",
    "enumerate_support",
    "apply_local",
    "apply_collective",
    "permute_particles",
    "permutation_sign",
    "partial_trace",
    "cross_marginal",
    "superpose",
    "state_to_dict",
    "state_from_dict",
    "save_state",
    "load_state",
    "SingletBasis",
    "PhaseFunctionReport",
    "PhaseFunctionError",
    "SubspaceRankError",
    "build_singlet_basis",
    "verify_invariance",
    "extract_phase_function",
    "check_sign_relation",
    "expected_dimension",
    "standard_traceless_generators",
    "haar_unitary",
    "basis_to_dict",
    "basis_from_dict",
    "save_basis",
    "load_basis",
    "UniformityReport",
    "is_k_uniform",
    "is_ame",
    "pair_deficit",
    "report_to_dict",
    "NoGoCertificate",
    "CertificateCheck",
    "CertificateViolationError",
    "counting_sum",
    "certify",
    "verify_certificate_numerically",
    "certificate_to_dict",
    "check_to_dict",
    "OptimizationResult",
    "PairDeficitObjective",
    "minimize_deficit",
    "gradient_check",
    "result_to_dict",
    "__version__",
]
