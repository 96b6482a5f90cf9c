"""Default numerical tolerances.

``GAUSSRT_TOL`` (environment) overrides the membership tolerance used to
decide ``kappa <= 1 + tol``.
"""
import os

QCM_TOL = 1e-9
MEMBERSHIP_TOL = 1e-7
SYMMETRY_TOL = 1e-12


def membership_tol():
    value = os.environ.get("GAUSSRT_TOL")
    if value is None or value.strip() == "":
        return MEMBERSHIP_TOL
    tol = float(value)
    if not tol > 0:
        raise ValueError(f"GAUSSRT_TOL must be positive, got {value!r}")
    return tol
