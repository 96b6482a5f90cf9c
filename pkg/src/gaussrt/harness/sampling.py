"""Random covariance matrices, symplectics and free channels for the suites.

Covariance matrices are drawn as ``V = S (D (+) D) S^T`` with
``S = expm(Omega H)`` for a random symmetric ``H`` and symplectic
eigenvalues ``D`` uniform in ``[dmin, dmax]``.
"""
import numpy as np
import scipy.linalg as sla

from ..channels import compose, make_channel
from ..cones import cone_spec, kappa
from ..symplectic import ModePartition, omega

__all__ = [
    "random_symplectic",
    "random_qcm",
    "random_passive",
    "random_local_symplectic",
    "random_psd",
    "random_free_channel",
    "random_cone_member",
    "bipartite_partition",
]


def bipartite_partition(na, nb):
    return ModePartition.from_sizes({"A": na, "B": nb})


def random_symplectic(n, rng, scale=0.5):
    H = rng.normal(scale=scale, size=(2 * n, 2 * n))
    return sla.expm(omega(n) @ (0.5 * (H + H.T)))


def random_qcm(n, rng, dmin=1.0, dmax=3.0, scale=0.5):
    S = random_symplectic(n, rng, scale)
    d = rng.uniform(dmin, dmax, size=n)
    V = S @ np.diag(np.r_[d, d]) @ S.T
    return 0.5 * (V + V.T)


def random_passive(n, rng):
    """Orthogonal symplectic ``[[Re U, -Im U], [Im U, Re U]]`` from a Haar-like unitary."""
    Z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    U, R = np.linalg.qr(Z)
    U = U * (np.diag(R) / np.abs(np.diag(R)))
    return np.block([[U.real, -U.imag], [U.imag, U.real]])


def _embed_local(partition, blocks):
    n = partition.n
    S = np.eye(2 * n)
    for party, B in blocks.items():
        idx = partition.indices(party)
        S[np.ix_(idx, idx)] = B
    return S


def random_local_symplectic(partition, rng, scale=0.5):
    return _embed_local(
        partition, {p: random_symplectic(partition.size(p), rng, scale) for p in partition.parties}
    )


def random_psd(d, rng, scale=0.3, rank=None):
    rank = d if rank is None else rank
    G = rng.normal(scale=scale, size=(d, rank))
    return G @ G.T


def _local_loss(partition, rng, party):
    modes = [j for j, lab in enumerate(partition.labels) if lab == party]
    eta = float(rng.uniform(0.2, 1.0))
    return make_channel("loss", partition, eta=eta, nbar=float(rng.uniform(0, 0.5)), modes=modes)


def _free_ancilla_cm(theory, labels, rng):
    """Covariance matrix of a free state on ancilla modes with the given labels."""
    p = ModePartition(tuple(labels))
    if theory == "nonclassicality":
        return np.eye(2 * p.n) + random_psd(2 * p.n, rng)
    if theory == "steering":
        return random_qcm(p.n, rng)
    # product of local states is separable and PPT
    return _embed_local_cm(p, {q: random_qcm(p.size(q), rng) for q in p.parties})


def _embed_local_cm(partition, blocks):
    V = np.zeros((2 * partition.n,) * 2)
    for party, B in blocks.items():
        idx = partition.indices(party)
        V[np.ix_(idx, idx)] = B
    return V


def random_free_channel(theory, partition, rng, depth=3, allow_ancilla=True, allow_trace=True):
    """Random composition of operations that map the free cone of ``theory`` into itself.

    Returns a :class:`GaussianMap` whose output partition may differ from
    ``partition`` (ancillas are appended and modes may be discarded, but every
    party keeps at least one mode).
    """
    steps = []
    p = partition
    for _ in range(depth):
        kinds = ["unitary", "loss", "noise"]
        if allow_ancilla and p.n < 6:
            kinds.append("ancilla")
        if allow_trace and _traceable(theory, p):
            kinds.append("trace")
        kind = kinds[rng.integers(len(kinds))]
        if kind == "unitary":
            if theory == "nonclassicality":
                S = random_passive(p.n, rng)
            else:
                S = random_local_symplectic(p, rng)
            step = make_channel("local_symplectic", p, S=S)
        elif kind == "loss":
            party = p.parties[rng.integers(len(p.parties))]
            step = _local_loss(p, rng, party)
        elif kind == "noise":
            rank = int(rng.integers(1, 2 * p.n + 1))
            step = make_channel("displacement_noise", p, K=random_psd(2 * p.n, rng, rank=rank))
        elif kind == "ancilla":
            label = p.parties[rng.integers(len(p.parties))]
            step = make_channel("add_ancilla", p, W=_free_ancilla_cm(theory, [label], rng), labels=[label])
        else:
            step = make_channel("trace_out", p, modes=[_trace_candidate(theory, p, rng)])
        steps.append(step)
        p = step.out_partition
    return compose(*steps)


def _traceable(theory, p):
    if theory == "nonclassicality":
        return p.n > 1
    return any(p.size(q) > 1 for q in p.parties)


def _trace_candidate(theory, p, rng):
    if theory == "nonclassicality":
        return int(rng.integers(p.n))
    choices = [j for j, lab in enumerate(p.labels) if p.size(lab) > 1]
    return choices[rng.integers(len(choices))]


def random_cone_member(theory, partition, rng, boundary=False, **options):
    """Random element of the free cone: ``kappa(V) V`` (+ a PSD term unless ``boundary``)."""
    spec = cone_spec(theory, partition)
    V = random_qcm(partition.n, rng)
    k = kappa(V, spec, **options).kappa
    W = k * V
    if not boundary:
        W = W + random_psd(2 * partition.n, rng, scale=0.2)
    return W
