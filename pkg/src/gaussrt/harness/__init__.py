"""Executable checks of the monotone's properties at desk scale."""
from .config import ExperimentConfig, to_jsonable, write_report
from .fock import FockOracle, FockValue, fock_overlap
from .suites import (
    SUITES,
    run_agreement,
    run_convexity,
    run_duality,
    run_fock,
    run_hierarchy,
    run_monotonicity,
    run_nogo,
    run_suite,
    run_tensorization,
    run_williamson,
)

__all__ = [
    "ExperimentConfig",
    "FockOracle",
    "FockValue",
    "fock_overlap",
    "SUITES",
    "run_suite",
    "run_tensorization",
    "run_nogo",
    "run_monotonicity",
    "run_hierarchy",
    "run_convexity",
    "run_duality",
    "run_agreement",
    "run_williamson",
    "run_fock",
    "to_jsonable",
    "write_report",
]
