"""Gaussian channels on covariance matrices.

Two representations are used:

* :class:`GaussianMap` -- a direct affine action ``V -> X V X^T + Y`` for
  unitaries, loss, ancillas and random displacements.  Identity and unitary
  channels have no finite Choi covariance matrix, so this is their canonical
  form.
* :class:`GaussianChannel` -- a Choi covariance matrix ``Gamma`` acting via
  the Schur complement ``(Gamma + Sigma V Sigma) / (Gamma_in + Sigma V Sigma)``.

``GaussianMap.to_choi(r)`` builds the Choi matrix from finite two-mode
squeezing ``r`` per input mode; the resulting channel acts as
``V -> X (cV + I)(cI + V)^{-1} X^T + Y`` with ``c = cosh 2r``, which tends
to the direct map as ``r`` grows (error ``O(1/c)``; exact on the vacuum).
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import SingularPivotError, ValidationError
from .symplectic import (
    ModePartition,
    is_symplectic,
    omega,
    phase_indices,
    schur_complement,
    validate_qcm,
)

__all__ = [
    "GaussianMap",
    "GaussianChannel",
    "NoiseKernel",
    "CertificateReport",
    "apply_channel",
    "random_displacement",
    "make_channel",
    "compose",
    "beam_splitter_symplectic",
    "certify_free",
    "default_probes",
]


@dataclass(frozen=True)
class NoiseKernel:
    """PSD covariance ``K`` of a classical random displacement."""

    K: np.ndarray

    def __post_init__(self):
        K = np.asarray(self.K, dtype=float)
        if K.ndim != 2 or K.shape[0] != K.shape[1]:
            raise ValidationError("noise kernel must be square")
        if np.max(np.abs(K - K.T), initial=0.0) > 1e-12 * max(1.0, np.max(np.abs(K))):
            raise ValidationError("noise kernel must be symmetric")
        K = 0.5 * (K + K.T)
        if K.size and np.linalg.eigvalsh(K)[0] < -1e-10:
            raise ValidationError("noise kernel must be positive semidefinite")
        object.__setattr__(self, "K", K)


@dataclass(frozen=True)
class GaussianMap:
    """Direct action ``V -> X V X^T + Y`` between mode partitions."""

    X: np.ndarray
    Y: np.ndarray
    in_partition: ModePartition
    out_partition: ModePartition
    kind: str = "map"

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        Y = np.asarray(self.Y, dtype=float)
        n_in, n_out = self.in_partition.n, self.out_partition.n
        if X.shape != (2 * n_out, 2 * n_in) or Y.shape != (2 * n_out, 2 * n_out):
            raise ValidationError("map matrices do not match the partitions")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", 0.5 * (Y + Y.T))

    @property
    def n_in(self):
        return self.in_partition.n

    @property
    def n_out(self):
        return self.out_partition.n

    def __call__(self, V):
        V = np.asarray(V, dtype=float)
        self.in_partition.check_dim(V)
        out = self.X @ V @ self.X.T + self.Y
        return 0.5 * (out + out.T)

    def to_choi(self, r=5.0):
        """Choi covariance matrix from two-mode squeezing ``r`` on every input mode."""
        n_in, n_out = self.n_in, self.n_out
        c, s = np.cosh(2 * r), np.sinh(2 * r)
        flip = np.diag(np.r_[np.ones(n_in), -np.ones(n_in)])
        ref = c * np.eye(2 * n_in)
        cross = s * flip @ self.X.T
        out = c * self.X @ self.X.T + self.Y
        # local xxpp blocks -> global xxpp over (reference modes, output modes)
        n = n_in + n_out
        i_ref = phase_indices(n, range(n_in))
        i_out = phase_indices(n, range(n_in, n))
        G = np.zeros((2 * n, 2 * n))
        G[np.ix_(i_ref, i_ref)] = ref
        G[np.ix_(i_ref, i_out)] = cross
        G[np.ix_(i_out, i_ref)] = cross.T
        G[np.ix_(i_out, i_out)] = out
        return GaussianChannel(G, n_in, n_out, self.in_partition, self.out_partition)


@dataclass(frozen=True)
class GaussianChannel:
    """Channel given by its Choi covariance matrix (input modes first).

    ``allow_unphysical=True`` accepts any ``Gamma >= 0`` instead of
    ``Gamma >= i Omega``; such maps are not completely positive but the
    monotonicity argument for kappa only needs positivity.
    """

    gamma: np.ndarray
    n_in: int
    n_out: int
    in_partition: ModePartition = None
    out_partition: ModePartition = None
    allow_unphysical: bool = False
    physical: bool = field(init=False, default=True)

    def __post_init__(self):
        G = np.asarray(self.gamma, dtype=float)
        n = self.n_in + self.n_out
        if G.shape != (2 * n, 2 * n):
            raise ValidationError(f"Choi matrix must be {2 * n}x{2 * n}, got {G.shape}")
        report = validate_qcm(G, tol=1e-9)
        if not report.valid:
            if not self.allow_unphysical:
                raise ValidationError(
                    "Choi covariance matrix violates Gamma >= i*Omega "
                    f"(min eigenvalue {report.min_eigenvalue:.3e})"
                )
            if np.linalg.eigvalsh(0.5 * (G + G.T))[0] < -1e-9:
                raise ValidationError("Choi matrix must be at least positive semidefinite")
        object.__setattr__(self, "physical", report.valid)
        object.__setattr__(self, "gamma", 0.5 * (G + G.T))
        if self.in_partition is None:
            object.__setattr__(self, "in_partition", ModePartition.single(self.n_in))
        if self.out_partition is None:
            object.__setattr__(self, "out_partition", ModePartition.single(self.n_out))

    @property
    def input_indices(self):
        return phase_indices(self.n_in + self.n_out, range(self.n_in))

    @property
    def output_indices(self):
        n = self.n_in + self.n_out
        return phase_indices(n, range(self.n_in, n))

    def _flipped_input(self, V):
        """``Gamma + (Sigma V Sigma (+) 0)`` in global ordering."""
        flip = np.r_[np.ones(self.n_in), -np.ones(self.n_in)]
        M = self.gamma.copy()
        idx = self.input_indices
        M[np.ix_(idx, idx)] += flip[:, None] * V * flip[None, :]
        return M

    def __call__(self, V):
        V = np.asarray(V, dtype=float)
        if V.shape != (2 * self.n_in, 2 * self.n_in):
            raise ValidationError(f"channel expects a {self.n_in}-mode input")
        try:
            return schur_complement(self._flipped_input(V), self.input_indices)
        except SingularPivotError as exc:
            raise SingularPivotError(
                f"boundary channel: Gamma_in + Sigma V Sigma is singular "
                f"(smallest singular value {exc.smallest_singular_value:.3e})",
                exc.smallest_singular_value,
                exc.condition,
            ) from exc


def apply_channel(ch, V):
    """Output covariance matrix of ``ch`` (either representation) on input ``V``."""
    return ch(V)


def random_displacement(V, K):
    """``V + K``: Gaussian mixture of displacements with covariance ``K``."""
    if not isinstance(K, NoiseKernel):
        K = NoiseKernel(K)
    V = np.asarray(V, dtype=float)
    if V.shape != K.K.shape:
        raise ValidationError("noise kernel and covariance matrix sizes differ")
    return V + K.K


def beam_splitter_symplectic(n, j, k, theta):
    """Rotation by ``theta`` mixing modes ``j`` and ``k`` (same on x and p).

    ``x_j' = cos(t) x_j - sin(t) x_k``, ``x_k' = sin(t) x_j + cos(t) x_k``.
    """
    S = np.eye(2 * n)
    c, s = np.cos(theta), np.sin(theta)
    for off in (0, n):
        a, b = j + off, k + off
        S[a, a], S[a, b] = c, -s
        S[b, a], S[b, b] = s, c
    return S


def _partition(p, n):
    if p is None:
        return ModePartition.single(n)
    return p if isinstance(p, ModePartition) else ModePartition(tuple(p))


def make_channel(kind, partition=None, **params):
    """Construct a standard channel as a :class:`GaussianMap`.

    Kinds and parameters:

    ``loss``            ``eta`` in [0, 1], ``nbar`` >= 0 (default 0), ``modes``
    ``local_symplectic`` ``S`` symplectic
    ``add_ancilla``     ``W`` (valid QCM), ``labels`` for the ancilla modes
    ``beam_splitter``   ``theta``, ``modes=(j, k)``
    ``identity``        nothing
    ``displacement_noise`` ``K`` PSD
    ``trace_out``       ``modes`` to discard
    """
    if kind == "loss":
        eta = float(params.get("eta"))
        nbar = float(params.get("nbar", 0.0))
        if not 0.0 <= eta <= 1.0:
            raise ValidationError(f"loss transmissivity must lie in [0, 1], got {eta}")
        if nbar < 0:
            raise ValidationError(f"thermal noise nbar must be >= 0, got {nbar}")
        n = _n_from(partition, params)
        p = _partition(partition, n)
        modes = params.get("modes")
        modes = range(n) if modes is None else modes
        X = np.eye(2 * n)
        Y = np.zeros((2 * n, 2 * n))
        for j in modes:
            for a in (j, n + j):
                X[a, a] = np.sqrt(eta)
                Y[a, a] = (1.0 - eta) * (2.0 * nbar + 1.0)
        return GaussianMap(X, Y, p, p, kind="loss")
    if kind == "identity":
        n = _n_from(partition, params)
        p = _partition(partition, n)
        return GaussianMap(np.eye(2 * n), np.zeros((2 * n, 2 * n)), p, p, kind="identity")
    if kind == "local_symplectic":
        S = np.asarray(params["S"], dtype=float)
        if not is_symplectic(S):
            raise ValidationError("matrix is not symplectic within 1e-9")
        n = S.shape[0] // 2
        p = _partition(partition, n)
        return GaussianMap(S, np.zeros_like(S), p, p, kind="local_symplectic")
    if kind == "beam_splitter":
        n = _n_from(partition, params)
        p = _partition(partition, n)
        j, k = params["modes"]
        S = beam_splitter_symplectic(n, j, k, float(params["theta"]))
        return GaussianMap(S, np.zeros_like(S), p, p, kind="beam_splitter")
    if kind == "add_ancilla":
        W = np.asarray(params["W"], dtype=float)
        if not validate_qcm(W).valid:
            raise ValidationError("ancilla covariance matrix is not a valid QCM")
        n_in = _n_from(partition, params)
        p_in = _partition(partition, n_in)
        n_anc = W.shape[0] // 2
        labels = params.get("labels") or (p_in.labels[-1],) * n_anc
        p_out = p_in + ModePartition(tuple(labels))
        n = n_in + n_anc
        X = np.zeros((2 * n, 2 * n_in))
        X[phase_indices(n, range(n_in)), range(2 * n_in)] = 1.0
        Y = np.zeros((2 * n, 2 * n))
        ia = phase_indices(n, range(n_in, n))
        Y[np.ix_(ia, ia)] = W
        return GaussianMap(X, Y, p_in, p_out, kind="add_ancilla")
    if kind == "displacement_noise":
        K = NoiseKernel(params["K"]).K
        n = K.shape[0] // 2
        p = _partition(partition, n)
        return GaussianMap(np.eye(2 * n), K, p, p, kind="displacement_noise")
    if kind == "trace_out":
        n = _n_from(partition, params)
        p = _partition(partition, n)
        drop = set(params["modes"])
        keep = [j for j in range(n) if j not in drop]
        if not keep:
            raise ValidationError("cannot trace out every mode")
        X = np.zeros((2 * len(keep), 2 * n))
        X[range(2 * len(keep)), phase_indices(n, keep)] = 1.0
        p_out = ModePartition(tuple(p.labels[j] for j in keep))
        return GaussianMap(X, np.zeros((2 * len(keep),) * 2), p, p_out, kind="trace_out")
    raise ValidationError(f"unknown channel kind {kind!r}")


def _n_from(partition, params):
    if partition is not None:
        return partition.n if isinstance(partition, ModePartition) else len(partition)
    if "n" in params:
        return int(params["n"])
    raise ValidationError("channel needs a partition or a mode count n")


def compose(*maps):
    """Sequential composition (first argument acts first) of direct maps."""
    X = np.eye(2 * maps[0].n_in)
    Y = np.zeros_like(X)
    for mp in maps:
        if mp.n_in * 2 != X.shape[0]:
            raise ValidationError("mode counts do not chain")
        X = mp.X @ X
        Y = mp.X @ Y @ mp.X.T + mp.Y
    return GaussianMap(X, Y, maps[0].in_partition, maps[-1].out_partition, kind="composite")


@dataclass
class CertificateReport:
    """Outcome of :func:`certify_free` (falsification over probes, not a proof)."""

    passed: bool
    probes_checked: int
    violating_probe: np.ndarray = None
    margins: list = field(default_factory=list)
    schur_route_agrees: bool = True

    @property
    def verdict(self):
        return "PASS" if self.passed else "FAIL"


def certify_free(ch, cone, probes=None, tol=1e-7, choi_r=2.0, schur_check=True, seed=0):
    """Search ``probes`` for a free input mapped outside the free cone.

    For every probe ``V_A`` this decides, by an SDP, whether some ``W_B`` in
    ``cone`` satisfies ``Gamma >= (-Sigma V_A Sigma) (+) W_B``.  ``cone`` is a
    :class:`~gaussrt.cones.FreeConeSpec` on the output modes.  Direct maps
    are converted with ``to_choi(choi_r)``.  With ``schur_check`` the verdict
    per probe is cross-checked against membership of the explicit output.

    Without ``probes`` the input cone of the same theory is sampled: the
    vacuum, 10 boundary members and 10 interior members (``seed`` fixes
    them).  A pass means no violation was found, not that ``ch`` is free.
    """
    from .cones import channel_feasibility_margin, membership

    if probes is None:
        probes = default_probes(cone.theory, ch.in_partition, seed)
    if isinstance(ch, GaussianMap):
        ch = ch.to_choi(choi_r)
    margins = []
    agree = True
    for V in probes:
        margin = channel_feasibility_margin(ch, np.asarray(V, dtype=float), cone)
        margins.append(margin)
        ok = margin >= -tol
        if schur_check:
            agree = agree and (ok == membership(ch(V), cone, tol=max(tol, 1e-6)))
        if not ok:
            return CertificateReport(False, len(margins), np.asarray(V), margins, agree)
    return CertificateReport(True, len(margins), None, margins, agree)


def default_probes(theory, partition, seed=0, count=20):
    """Vacuum plus ``count`` sampled members of ``theory``'s cone on ``partition``."""
    from .harness.sampling import random_cone_member

    rng = np.random.default_rng(seed)
    probes = [np.eye(2 * partition.n)]
    for k in range(count):
        probes.append(random_cone_member(theory, partition, rng, boundary=k % 2 == 0))
    return probes
