"""Symplectic linear algebra on real covariance matrices in xxpp ordering.

Phase-space vectors are ordered ``(x_1, ..., x_n, p_1, ..., p_n)`` and the
vacuum covariance matrix is the identity.  All functions take and return
plain :class:`numpy.ndarray` objects and never modify their inputs.
"""
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .config import QCM_TOL, SYMMETRY_TOL
from .errors import SingularPivotError, ValidationError

__all__ = [
    "ModePartition",
    "QcmReport",
    "omega",
    "momentum_flip",
    "local_omega",
    "phase_indices",
    "validate_qcm",
    "check_qcm",
    "symplectic_eigenvalues",
    "nu_min",
    "nu_min_bisect",
    "williamson",
    "is_symplectic",
    "schur_complement",
    "partial_transpose",
    "direct_sum",
    "partial_trace",
    "reorder_modes",
]


@dataclass(frozen=True)
class ModePartition:
    """Party label for every mode, e.g. ``ModePartition(("A", "B", "A"))``."""

    labels: tuple

    def __post_init__(self):
        labels = tuple(str(lab) for lab in self.labels)
        if not labels:
            raise ValidationError("a partition needs at least one mode")
        if any(lab == "" for lab in labels):
            raise ValidationError("party names must be nonempty")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def single(cls, n, party="A"):
        return cls((party,) * n)

    @classmethod
    def from_sizes(cls, sizes):
        """Build from ``{"A": n_A, "B": n_B}`` (insertion order = mode order)."""
        labels = []
        for party, count in sizes.items():
            labels.extend([party] * int(count))
        return cls(tuple(labels))

    @property
    def n(self):
        return len(self.labels)

    @property
    def parties(self):
        """Distinct parties in order of first appearance."""
        return tuple(dict.fromkeys(self.labels))

    def modes(self, party):
        if party not in self.labels:
            raise ValidationError(f"unknown party {party!r}; partition has {self.parties}")
        return [j for j, lab in enumerate(self.labels) if lab == party]

    def size(self, party):
        return len(self.modes(party))

    def indices(self, party):
        """Phase-space indices (x block then p block) of ``party``'s modes."""
        return phase_indices(self.n, self.modes(party))

    def check_dim(self, V):
        if V.shape != (2 * self.n, 2 * self.n):
            raise ValidationError(
                f"matrix of shape {V.shape} does not match a {self.n}-mode partition"
            )

    def __add__(self, other):
        return ModePartition(self.labels + other.labels)


@dataclass(frozen=True)
class QcmReport:
    """Outcome of :func:`validate_qcm`."""

    valid: bool
    min_eigenvalue: float
    asymmetry: float

    def __bool__(self):
        return self.valid


def omega(n):
    """Symplectic form ``[[0, I], [-I, 0]]`` on ``n`` modes."""
    n = int(n)
    if n < 1:
        raise ValidationError("omega needs n >= 1")
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def momentum_flip(n, modes=None):
    """``diag(I, -I)`` restricted to ``modes`` (all modes when ``None``)."""
    diag = np.ones(2 * n)
    modes = range(n) if modes is None else modes
    for j in modes:
        diag[n + j] = -1.0
    return np.diag(diag)


def local_omega(partition, party):
    """Symplectic form of ``party``'s modes embedded in the full phase space."""
    n = partition.n
    out = np.zeros((2 * n, 2 * n))
    for j in partition.modes(party):
        out[j, n + j] = 1.0
        out[n + j, j] = -1.0
    return out


def phase_indices(n, modes):
    modes = list(modes)
    return modes + [n + j for j in modes]


def _as_square_even(V):
    V = np.asarray(V, dtype=float)
    if V.ndim != 2 or V.shape[0] != V.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {V.shape}")
    if V.shape[0] == 0 or V.shape[0] % 2:
        raise ValidationError(f"covariance matrices have even dimension, got {V.shape[0]}")
    return V


def validate_qcm(V, tol=QCM_TOL):
    """Check the uncertainty relation ``V >= i Omega``.

    Raises :class:`ValidationError` for odd dimension or an asymmetry above
    ``max(tol, 1e-12)``.  The report carries the smallest eigenvalue of the
    Hermitian matrix ``V - i Omega``; boundary (pure) states give ``~0`` and
    are accepted when ``min_eigenvalue >= -tol``.
    """
    V = _as_square_even(V)
    asym = float(np.max(np.abs(V - V.T)))
    if asym > max(tol, SYMMETRY_TOL):
        raise ValidationError(f"matrix is not symmetric (max |V - V^T| = {asym:.3e})")
    n = V.shape[0] // 2
    Vs = 0.5 * (V + V.T)
    lam = float(np.linalg.eigvalsh(Vs - 1j * omega(n))[0])
    return QcmReport(valid=lam >= -tol, min_eigenvalue=lam, asymmetry=asym)


def check_qcm(V, tol=QCM_TOL, what="covariance matrix"):
    """Return ``V`` as a symmetrized float array or raise ``ValidationError``."""
    report = validate_qcm(V, tol)
    if not report.valid:
        raise ValidationError(
            f"{what} violates V >= i*Omega (min eigenvalue {report.min_eigenvalue:.3e})"
        )
    V = np.asarray(V, dtype=float)
    return 0.5 * (V + V.T)


def _check_pd(V):
    V = _as_square_even(V)
    if np.max(np.abs(V - V.T)) > 1e-9 * max(1.0, np.max(np.abs(V))):
        raise ValidationError("matrix is not symmetric")
    V = 0.5 * (V + V.T)
    if np.linalg.eigvalsh(V)[0] <= 0:
        raise ValidationError("matrix is not positive definite")
    return V


def symplectic_eigenvalues(V):
    """Ascending symplectic eigenvalues of a positive definite ``V``.

    Computed as the positive eigenvalues of the Hermitian matrix
    ``V^{1/2} (i Omega) V^{1/2}``, which is similar to ``i Omega V``.
    """
    V = _check_pd(V)
    n = V.shape[0] // 2
    root = sla.sqrtm(V).real
    root = 0.5 * (root + root.T)
    ev = np.linalg.eigvalsh(root @ (1j * omega(n)) @ root)
    return np.sort(ev[n:])


def nu_min(V):
    return float(symplectic_eigenvalues(V)[0])


def nu_min_bisect(V, rtol=1e-12):
    """``max{lam >= 0 : V >= i lam Omega}`` by bisection on Hermitian eigenvalues."""
    V = _check_pd(V)
    n = V.shape[0] // 2
    iom = 1j * omega(n)

    def feasible(lam):
        return np.linalg.eigvalsh(V - lam * iom)[0] >= 0.0

    lo, hi = 0.0, float(np.linalg.eigvalsh(V)[-1])
    while feasible(hi):
        lo, hi = hi, 2.0 * hi
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def is_symplectic(S, tol=1e-9):
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] % 2:
        return False
    Om = omega(S.shape[0] // 2)
    return bool(np.max(np.abs(S @ Om @ S.T - Om)) <= tol)


def williamson(V):
    """Williamson normal form ``S V S^T = diag(D) (+) diag(D)``.

    Uses the real Schur form of the antisymmetric matrix
    ``V^{1/2} Omega V^{1/2}``.  Returns ``(S, D)`` with ``D`` ascending and
    ``S`` symplectic.
    """
    V = _check_pd(V)
    n = V.shape[0] // 2
    Om = omega(n)
    root = sla.sqrtm(V).real
    root = 0.5 * (root + root.T)
    K = root @ Om @ root
    K = 0.5 * (K - K.T)
    T, O = sla.schur(K, output="real")
    # T is block diagonal with 2x2 blocks [[0, d], [-d, 0]]; make every d > 0.
    d = np.empty(n)
    for k in range(n):
        a, b = 2 * k, 2 * k + 1
        if T[a, b] < 0:
            O[:, [a, b]] = O[:, [b, a]]
            T[[a, b], :] = T[[b, a], :]
            T[:, [a, b]] = T[:, [b, a]]
        d[k] = 0.5 * (T[a, b] - T[b, a])
    order = np.argsort(d, kind="stable")
    d = d[order]
    perm = np.concatenate([2 * order, 2 * order + 1])
    O = O[:, perm]
    DD = np.concatenate([d, d])
    S = np.sqrt(DD)[:, None] * (O.T @ np.linalg.solve(root, np.eye(2 * n)))
    return S, d


def schur_complement(M, pivot):
    """Schur complement ``M/P = Q - Y P^{-1} X`` of the block ``P = M[pivot, pivot]``.

    ``pivot`` is a sequence of row/column indices.  The result lives on the
    complementary indices, kept in increasing order.  A numerically singular
    pivot raises :class:`SingularPivotError`; no pseudo-inverse is attempted.
    Hermitian (complex) input is supported.
    """
    M = np.asarray(M)
    dim = M.shape[0]
    pivot = list(pivot)
    if len(set(pivot)) != len(pivot) or any(not 0 <= i < dim for i in pivot):
        raise ValidationError(f"bad pivot index set {pivot}")
    rest = [i for i in range(dim) if i not in set(pivot)]
    if not pivot:
        return M[np.ix_(rest, rest)].copy()
    P = M[np.ix_(pivot, pivot)]
    X = M[np.ix_(pivot, rest)]
    Y = M[np.ix_(rest, pivot)]
    Q = M[np.ix_(rest, rest)]
    sv = np.linalg.svd(P, compute_uv=False)
    smin, smax = float(sv[-1]), float(sv[0])
    if smin <= 1e-13 * max(smax, 1.0):
        cond = np.inf if smin == 0 else smax / smin
        raise SingularPivotError(
            f"Schur pivot is singular (smallest singular value {smin:.3e})", smin, cond
        )
    out = Q - Y @ np.linalg.solve(P, X)
    if np.iscomplexobj(out):
        return 0.5 * (out + out.conj().T)
    return 0.5 * (out + out.T)


def partial_transpose(V, partition, party):
    """``Sigma V Sigma`` with momenta of ``party``'s modes flipped."""
    V = np.asarray(V, dtype=float)
    partition.check_dim(V)
    flip = np.ones(2 * partition.n)
    for j in partition.modes(party):
        flip[partition.n + j] = -1.0
    return flip[:, None] * V * flip[None, :]


def reorder_modes(V, order):
    """Permute modes of ``V``: new mode ``k`` is old mode ``order[k]``."""
    V = np.asarray(V)
    n = V.shape[0] // 2
    idx = phase_indices(n, order)
    return V[np.ix_(idx, idx)]


def direct_sum(V1, partition1, V2, partition2):
    """Covariance matrix of two independent systems, in global xxpp order.

    Modes of the second system follow those of the first; parties with equal
    names are merged simply by sharing a label.
    """
    V1 = np.asarray(V1, dtype=float)
    V2 = np.asarray(V2, dtype=float)
    partition1.check_dim(V1)
    partition2.check_dim(V2)
    n1, n2 = partition1.n, partition2.n
    n = n1 + n2
    V = np.zeros((2 * n, 2 * n))
    i1 = phase_indices(n, range(n1))
    i2 = phase_indices(n, range(n1, n))
    V[np.ix_(i1, i1)] = V1
    V[np.ix_(i2, i2)] = V2
    return V, partition1 + partition2


def partial_trace(V, partition, keep):
    """Reduced covariance matrix on the modes of the parties in ``keep``."""
    V = np.asarray(V, dtype=float)
    partition.check_dim(V)
    if isinstance(keep, str):
        keep = {keep}
    keep = set(keep)
    if not keep:
        raise ValidationError("partial_trace needs a nonempty set of parties to keep")
    unknown = keep - set(partition.labels)
    if unknown:
        raise ValidationError(f"unknown parties {sorted(unknown)}")
    modes = [j for j, lab in enumerate(partition.labels) if lab in keep]
    idx = phase_indices(partition.n, modes)
    return V[np.ix_(idx, idx)].copy(), ModePartition(tuple(partition.labels[j] for j in modes))
