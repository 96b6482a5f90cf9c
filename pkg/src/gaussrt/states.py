"""Standard Gaussian states and phase-space formulas.

A Gaussian state is the pair ``(V, s)`` of covariance matrix and first
moments, in xxpp ordering with vacuum covariance ``I``.

Coherent-state convention
-------------------------
``coherent_overlap(state, u)`` returns ``<u|rho|u>`` for the coherent state
``|u>`` whose *first moment is* ``u``, i.e. ``rho_G[I, u]``.  With that
labelling the exponent involves ``w = s - u``.  If one instead labels
coherent states by the Weyl operator, ``|u> = exp(i u^T Omega r)|0>``, that
state has first moment ``-u`` and the exponent involves ``s + u``.  Both
forms are available through ``convention=`` and are checked against an
independent truncated-Fock computation in ``gaussrt.harness.fock``.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .symplectic import ModePartition, check_qcm, omega

__all__ = [
    "GaussianState",
    "make_state",
    "tmsv_cm",
    "squeezed_cm",
    "characteristic_function",
    "coherent_overlap",
    "displace",
]


@dataclass(frozen=True, eq=False)
class GaussianState:
    V: np.ndarray
    s: np.ndarray
    partition: ModePartition = field(default=None)

    def __post_init__(self):
        V = check_qcm(self.V, tol=1e-9, what="state covariance matrix")
        n = V.shape[0] // 2
        s = np.zeros(2 * n) if self.s is None else np.asarray(self.s, dtype=float).ravel()
        if s.shape != (2 * n,) or not np.all(np.isfinite(s)):
            raise ValidationError(f"displacement must be a finite vector of length {2 * n}")
        partition = self.partition or ModePartition.single(n)
        partition.check_dim(V)
        V.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "partition", partition)

    @property
    def n(self):
        return self.V.shape[0] // 2


def squeezed_cm(r, phi=0.0):
    """Single-mode squeezed vacuum; ``phi`` rotates the squeezing axis."""
    base = np.diag([np.exp(-2 * r), np.exp(2 * r)])
    c, s = np.cos(phi / 2), np.sin(phi / 2)
    rot = np.array([[c, -s], [s, c]])
    return rot @ base @ rot.T


def tmsv_cm(r):
    """Two-mode squeezed vacuum: ``+sinh 2r`` x-correlations, ``-sinh 2r`` p-correlations."""
    ch, sh = np.cosh(2 * r), np.sinh(2 * r)
    return np.array(
        [
            [ch, sh, 0.0, 0.0],
            [sh, ch, 0.0, 0.0],
            [0.0, 0.0, ch, -sh],
            [0.0, 0.0, -sh, ch],
        ]
    )


def make_state(kind, partition=None, *, modes=None, u=None, nbar=None, r=None, phi=0.0):
    """Construct a standard Gaussian state.

    ``kind`` is one of ``vacuum``, ``coherent``, ``thermal``, ``squeezed`` or
    ``tmsv``.  The mode count comes from ``partition``, ``modes`` or the
    parameters (``u`` has length ``2n``); single-mode squeezing and the TMSV
    fix it at 1 and 2.  A TMSV gets the partition ``(A, B)`` by default.
    """
    if partition is not None and not isinstance(partition, ModePartition):
        partition = ModePartition(tuple(partition))
    n = partition.n if partition is not None else modes

    if kind == "tmsv":
        if r is None:
            raise ValidationError("tmsv needs a squeezing parameter r")
        V, n_kind = tmsv_cm(float(r)), 2
        partition = partition or ModePartition(("A", "B"))
    elif kind == "squeezed":
        if r is None:
            raise ValidationError("squeezed needs a squeezing parameter r")
        n_kind = n or 1
        one = squeezed_cm(float(r), float(phi))
        V = _on_every_mode(one, n_kind)
    elif kind == "thermal":
        if nbar is None or nbar < 0:
            raise ValidationError(f"thermal needs nbar >= 0, got {nbar}")
        n_kind = n or 1
        V = (2 * float(nbar) + 1) * np.eye(2 * n_kind)
    elif kind == "vacuum":
        n_kind = n or 1
        V = np.eye(2 * n_kind)
    elif kind == "coherent":
        if u is None:
            raise ValidationError("coherent needs a displacement vector u")
        u = np.asarray(u, dtype=float).ravel()
        if u.size % 2:
            raise ValidationError("coherent displacement must have even length")
        n_kind = n or u.size // 2
        if u.size != 2 * n_kind:
            raise ValidationError(f"displacement length {u.size} does not match {n_kind} modes")
        return GaussianState(np.eye(2 * n_kind), u, partition or ModePartition.single(n_kind))
    else:
        raise ValidationError(f"unknown state kind {kind!r}")

    if n is not None and n != n_kind:
        raise ValidationError(f"{kind} state has {n_kind} modes, partition has {n}")
    return GaussianState(V, np.zeros(2 * n_kind), partition or ModePartition.single(n_kind))


def _on_every_mode(one, n):
    V = np.zeros((2 * n, 2 * n))
    for j in range(n):
        idx = [j, n + j]
        V[np.ix_(idx, idx)] = one
    return V


def characteristic_function(state, xi):
    """``chi(xi) = exp(-1/4 xi^T Omega^T V Omega xi + i s^T Omega xi)``."""
    xi = np.asarray(xi, dtype=float).ravel()
    Om = omega(state.n)
    v = Om @ xi
    return complex(np.exp(-0.25 * v @ state.V @ v + 1j * (state.s @ v)))


def coherent_overlap(state, u, convention="mean"):
    """``<u|rho|u> = 2^n exp(-w^T (V+I)^{-1} w) / sqrt(det(V+I))``.

    ``convention="mean"`` (default) labels ``|u>`` by its first moment, so
    ``w = s - u``; ``convention="weyl"`` labels it by the displacement
    operator argument, so ``w = s + u``.
    """
    u = np.asarray(u, dtype=float).ravel()
    if convention == "mean":
        w = state.s - u
    elif convention == "weyl":
        w = state.s + u
    else:
        raise ValidationError(f"unknown convention {convention!r}")
    A = state.V + np.eye(2 * state.n)
    sign, logdet = np.linalg.slogdet(A)
    quad = w @ np.linalg.solve(A, w)
    return float(np.exp(state.n * np.log(2.0) - quad - 0.5 * logdet))


def displace(state, d):
    """Shift first moments by ``d``; the covariance matrix is unchanged."""
    d = np.asarray(d, dtype=float).ravel()
    return GaussianState(state.V, state.s + d, state.partition)
