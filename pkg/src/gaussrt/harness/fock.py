"""Truncated Fock-space oracle for coherent-state overlaps.

The Gaussian state is written through its Williamson form as
``rho = D(-s) U rho_th U^dag D(-s)^dag`` with ``U`` the metaplectic unitary
of the symplectic part and ``rho_th`` a product of thermal states.  Then

    <u|rho|u> = sum_k p_k |<k| U^dag D(s) |u>|^2,

where ``k`` runs over thermal occupation numbers below ``cutoff``.  The
vector ``U^dag D(s)|u>`` is computed by sparse matrix exponentials of
truncated ladder operators on a larger working space, so nothing here relies
on the phase-space formula being checked.

Operators follow ``x = (a + a^dag)/sqrt 2``, ``p = -i (a - a^dag)/sqrt 2`` and
``D(xi) = exp(i xi^T Omega r)``.  Under this displacement operator
``D(xi)^dag r D(xi) = r - xi``, so ``D(xi)|0>`` has first moment ``-xi``.
"""
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from ..errors import ValidationError
from ..symplectic import omega, williamson

__all__ = ["FockOracle", "FockValue", "fock_overlap"]


@dataclass
class FockValue:
    value: float
    truncation_bound: float
    cutoff: int


class FockOracle:
    """Truncated-Fock evaluator for one- and two-mode Gaussian states.

    Parameters
    ----------
    cutoff : int
        Number of thermal occupation numbers kept per mode.
    work_dim : int, optional
        Size of the per-mode working space for the unitaries (default
        ``4 * cutoff`` for one mode, ``2 * cutoff`` for two).
    """

    def __init__(self, cutoff=60, modes=1, work_dim=None):
        if modes not in (1, 2):
            raise ValidationError("the Fock oracle handles one or two modes")
        self.cutoff = int(cutoff)
        self.modes = modes
        self.work_dim = int(work_dim or (4 * cutoff if modes == 1 else 2 * cutoff))
        if self.work_dim < self.cutoff:
            raise ValidationError("working dimension must be at least the cutoff")
        M = self.work_dim
        a = sp.diags(np.sqrt(np.arange(1, M)), 1, format="csr").astype(complex)
        ad = a.conj().T
        x1 = (a + ad) / np.sqrt(2)
        p1 = -1j * (a - ad) / np.sqrt(2)
        eye = sp.identity(M, format="csr", dtype=complex)
        if modes == 1:
            self.r = [x1, p1]
        else:
            self.r = [sp.kron(x1, eye, "csr"), sp.kron(eye, x1, "csr"),
                      sp.kron(p1, eye, "csr"), sp.kron(eye, p1, "csr")]
        self.dim = M ** modes

    def vacuum(self):
        v = np.zeros(self.dim, dtype=complex)
        v[0] = 1.0
        return v

    def _linear(self, xi):
        Oxi = omega(self.modes).T @ xi  # xi^T Omega r = (Omega^T xi) . r
        out = sp.csr_matrix((self.dim, self.dim), dtype=complex)
        for c, r in zip(Oxi, self.r):
            if c != 0:
                out = out + c * r
        return out

    def displace(self, xi, vec):
        """``D(xi) vec``."""
        xi = np.asarray(xi, dtype=float)
        if not np.any(xi):
            return vec
        return expm_multiply(1j * self._linear(xi), vec)

    def _quadratic(self, H):
        out = sp.csr_matrix((self.dim, self.dim), dtype=complex)
        n2 = 2 * self.modes
        for i in range(n2):
            for j in range(n2):
                if H[i, j] != 0:
                    out = out + 0.5 * H[i, j] * (self.r[i] @ self.r[j])
        return out

    def metaplectic_adjoint(self, K, vec):
        """``U^dag vec`` where ``U^dag r U = expm(K) r`` (``K`` Hamiltonian)."""
        H = self._hamiltonian(K)
        if not np.any(H):
            return vec
        return expm_multiply(1j * self._quadratic(H), vec)

    def _hamiltonian(self, K):
        H = -omega(self.modes) @ K
        return 0.5 * (H + H.T)

    def overlap(self, V, s, u, convention="mean"):
        """``<u|rho_G[V, s]|u>`` with the truncation bound.

        ``convention="mean"``: ``|u>`` is the coherent state with first
        moment ``u``; ``"weyl"``: ``|u> = D(u)|0>``.
        """
        V = np.asarray(V, dtype=float)
        s = np.zeros(2 * self.modes) if s is None else np.asarray(s, dtype=float)
        u = np.asarray(u, dtype=float)
        if V.shape != (2 * self.modes, 2 * self.modes):
            raise ValidationError(f"oracle configured for {self.modes} mode(s)")
        if convention == "mean":
            ket = self.displace(-u, self.vacuum())
        elif convention == "weyl":
            ket = self.displace(u, self.vacuum())
        else:
            raise ValidationError(f"unknown convention {convention!r}")
        S, d = williamson(V)
        T = np.linalg.inv(S)  # V = T (D + D) T^T
        # polar split T = O P: both factors have real logarithms generically
        O, P = sla.polar(T, side="right")
        KO = np.real(sla.logm(O))
        KP = np.real(sla.logm(P))
        if not (np.allclose(sla.expm(KO), O, atol=1e-10) and np.allclose(sla.expm(KP), P, atol=1e-10)):
            raise ValidationError("symplectic factor has no real logarithm; perturb the state")
        # U = U_O U_P, so U^dag = U_P^dag U_O^dag
        psi = self.displace(s, ket)
        psi = self.metaplectic_adjoint(KO, psi)
        psi = self.metaplectic_adjoint(KP, psi)
        lost = abs(1.0 - float(np.vdot(psi, psi).real))

        nbar = np.maximum(0.5 * (d - 1.0), 0.0)
        L, M = self.cutoff, self.work_dim
        weights = [self._thermal(nb, M) for nb in nbar]
        probs = np.abs(psi) ** 2
        if self.modes == 1:
            kept = probs[:L] @ weights[0][:L]
            tail = probs[L:] @ weights[0][L:] if M > L else 0.0
            far = weights[0][-1] if M > L else weights[0][L - 1]
        else:
            probs = probs.reshape(M, M)
            W = np.outer(weights[0], weights[1])
            kept = float(np.sum(probs[:L, :L] * W[:L, :L]))
            tail = float(np.sum(probs * W) - kept)
            far = max(weights[0][-1], weights[1][-1])
        # terms beyond the working space: their weight is below the last
        # thermal weight times the norm lost from the working space
        bound = float(tail + lost + far)
        return FockValue(float(kept), bound, L)

    @staticmethod
    def _thermal(nbar, M):
        if nbar == 0:
            w = np.zeros(M)
            w[0] = 1.0
            return w
        q = nbar / (nbar + 1.0)
        return np.exp(np.arange(M) * np.log(q)) / (nbar + 1.0)

    def moments(self, V, s=None, probes=8):
        """First and second moments of the represented state (self-check).

        Uses the first ``probes`` thermal components of each mode, so it is
        exact only up to the thermal tail; meant for low-temperature states.
        """
        V = np.asarray(V, dtype=float)
        s = np.zeros(2 * self.modes) if s is None else np.asarray(s, dtype=float)
        S, d = williamson(V)
        T = np.linalg.inv(S)
        O, P = sla.polar(T, side="right")
        KO, KP = np.real(sla.logm(O)), np.real(sla.logm(P))
        nbar = np.maximum(0.5 * (d - 1.0), 0.0)
        M = self.work_dim
        w = [self._thermal(nb, probes) for nb in nbar]
        mean = np.zeros(2 * self.modes)
        second = np.zeros((2 * self.modes, 2 * self.modes))
        idx = np.ndindex(*([probes] * self.modes))
        for k in idx:
            weight = np.prod([w[j][k[j]] for j in range(self.modes)])
            if weight < 1e-14:
                continue
            basis = np.zeros(self.dim, dtype=complex)
            basis[np.ravel_multi_index(k, (M,) * self.modes)] = 1.0
            # |phi> = D(-s) U |k>, computed with the inverse generators
            phi = expm_multiply(-1j * self._quadratic(self._hamiltonian(KP)), basis)
            phi = expm_multiply(-1j * self._quadratic(self._hamiltonian(KO)), phi)
            phi = self.displace(-s, phi)
            rv = [r @ phi for r in self.r]
            for i in range(2 * self.modes):
                mean[i] += weight * np.vdot(phi, rv[i]).real
                for j in range(2 * self.modes):
                    second[i, j] += weight * np.vdot(rv[i], rv[j]).real
        V_est = 2 * second - 2 * np.outer(mean, mean)
        return mean, V_est


def fock_overlap(state, u, cutoff=60, convention="mean", tol=1e-6):
    """Oracle value of ``<u|rho|u>`` for a 1- or 2-mode :class:`GaussianState`.

    Raises :class:`ValidationError` when the truncation bound exceeds ``tol``.
    """
    oracle = FockOracle(cutoff=cutoff, modes=state.n)
    res = oracle.overlap(state.V, state.s, u, convention=convention)
    if res.truncation_bound > tol:
        raise ValidationError(
            f"cutoff {cutoff} insufficient: truncation bound {res.truncation_bound:.2e} > {tol:.1e}"
        )
    return res
