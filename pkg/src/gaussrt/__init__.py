"""Gaussian quantum resource quantification at the covariance-matrix level."""
__version__ = "0.1.0"

from .channels import GaussianChannel, GaussianMap, apply_channel, certify_free, compose, make_channel
from .cones import (
    THEORIES,
    FreeConeSpec,
    ResourceReport,
    cone_spec,
    feasibility_margin,
    kappa,
    membership,
    upsilon,
)
from .errors import GaussrtError, SingularPivotError, SolverError, ValidationError
from .states import GaussianState, coherent_overlap, make_state
from .symplectic import (
    ModePartition,
    nu_min,
    omega,
    partial_transpose,
    schur_complement,
    symplectic_eigenvalues,
    validate_qcm,
    williamson,
)

__all__ = [
    "THEORIES",
    "FreeConeSpec",
    "GaussianChannel",
    "GaussianMap",
    "GaussianState",
    "GaussrtError",
    "ModePartition",
    "ResourceReport",
    "SingularPivotError",
    "SolverError",
    "ValidationError",
    "apply_channel",
    "certify_free",
    "coherent_overlap",
    "compose",
    "cone_spec",
    "feasibility_margin",
    "kappa",
    "make_channel",
    "make_state",
    "membership",
    "nu_min",
    "omega",
    "partial_transpose",
    "schur_complement",
    "symplectic_eigenvalues",
    "upsilon",
    "validate_qcm",
    "williamson",
]
