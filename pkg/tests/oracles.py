"""Independent reference computations used by the tests.

Nothing here calls into gaussrt: each oracle recomputes its quantity from
scratch with a different numerical route than the library.
"""
import numpy as np


def omega(n):
    return np.block([[np.zeros((n, n)), np.eye(n)], [-np.eye(n), np.zeros((n, n))]])


def brute_symplectic_eigenvalues(V):
    """Moduli of the eigenvalues of ``i Omega V`` (a non-Hermitian eigenproblem)."""
    n = V.shape[0] // 2
    ev = np.linalg.eigvals(1j * omega(n) @ V)
    return np.sort(np.abs(ev))[::2]


def flip_momenta(V, modes):
    n = V.shape[0] // 2
    sigma = np.eye(2 * n)
    for j in modes:
        sigma[n + j, n + j] = -1.0
    return sigma @ V @ sigma


def schur_by_inverse(M, rest):
    """``M/P`` as the inverse of the ``rest`` block of ``M^{-1}``."""
    Minv = np.linalg.inv(M)
    return np.linalg.inv(Minv[np.ix_(rest, rest)])


def tmsv(r):
    c, s = np.cosh(2 * r), np.sinh(2 * r)
    V = np.zeros((4, 4))
    V[:2, :2] = [[c, s], [s, c]]
    V[2:, 2:] = [[c, -s], [-s, c]]
    return V


def loss_by_dilation(V, eta, nbar=0.0):
    """Single-mode loss as a beam splitter with a thermal environment, then a partial trace."""
    t, r = np.sqrt(eta), np.sqrt(1 - eta)
    # modes (system, env) in xxpp order
    B = np.array([[t, r], [-r, t]])
    S = np.block([[B, np.zeros((2, 2))], [np.zeros((2, 2)), B]])
    env = (2 * nbar + 1) * np.eye(2)
    joint = np.zeros((4, 4))
    joint[np.ix_([0, 2], [0, 2])] = V
    joint[np.ix_([1, 3], [1, 3])] = env
    out = S @ joint @ S.T
    return out[np.ix_([0, 2], [0, 2])]


def thermal_vacuum_overlap(nbar):
    """``<0|rho_th|0>`` from the photon-number distribution."""
    return 1.0 / (nbar + 1.0)
