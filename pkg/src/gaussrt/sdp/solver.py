"""Primal-dual path-following solver with Nesterov-Todd scaling.

Infeasible-start Mehrotra predictor-corrector on the pair

    (P)  minimize c^T y   s.t.  S_b = F0_b + sum_i y_i F_ib >= 0
    (D)  maximize -<F0, Z> s.t. <F_i, Z> = c_i,  Z >= 0.

Complex Hermitian blocks are handled through their real symmetric
embedding; their dual matrices are mapped back before returning.
"""
import logging
import math

import numpy as np
import scipy.linalg as sla

from ..errors import ValidationError
from ._backend import BlockData, inner_products, schur_accumulate
from .problem import SdpSolution, unembed_dual

log = logging.getLogger(__name__)

__all__ = ["solve", "feasibility_bisect", "DEFAULT_OPTIONS"]

DEFAULT_OPTIONS = {
    "gap_tol": 1e-8,
    "feas_tol": 1e-9,
    "max_iter": 200,
    "step": 0.98,
    "backend": None,
}


def _inner(X, Y):
    return float(np.sum(X * Y))


def _nt_scaling(S, Z):
    """Return ``(R, Rinv, lam)`` with ``R^{-1} S R^{-T} = R^T Z R = diag(lam)``."""
    Ls = np.linalg.cholesky(S)
    Lz = np.linalg.cholesky(Z)
    U, lam, Vt = np.linalg.svd(Lz.T @ Ls)
    Ls_inv = sla.solve_triangular(Ls, np.eye(S.shape[0]), lower=True)
    sq = np.sqrt(lam)
    R = (Ls @ Vt.T) / sq[None, :]
    Rinv = sq[:, None] * (Vt @ Ls_inv)
    return R, Rinv, lam


def _max_step(lam, D):
    """Largest ``a`` with ``diag(lam) + a D >= 0`` (``inf`` if unbounded)."""
    s = 1.0 / np.sqrt(lam)
    emin = np.linalg.eigvalsh(s[:, None] * D * s[None, :])[0]
    return math.inf if emin >= 0 else -1.0 / emin


def _schur_solver(M):
    """Solver for the Schur system with diagonal equilibration and one
    step of iterative refinement (the system becomes ill conditioned as the
    iterates approach the boundary)."""
    m = M.shape[0]
    dg = np.sqrt(np.maximum(np.diag(M), 1e-300))
    Ms = M / dg[:, None] / dg[None, :]
    try:
        fac = sla.cho_factor(Ms, lower=True)
        base = lambda r: sla.cho_solve(fac, r)  # noqa: E731
    except np.linalg.LinAlgError:
        try:
            fac = sla.cho_factor(Ms + 1e-14 * np.eye(m), lower=True)
            base = lambda r: sla.cho_solve(fac, r)  # noqa: E731
        except np.linalg.LinAlgError:
            base = lambda r: np.linalg.lstsq(Ms, r, rcond=None)[0]  # noqa: E731

    def solve_m(r):
        rs = r / dg
        x = base(rs)
        x += base(rs - Ms @ x)
        return x / dg

    return solve_m


def _polish_dual(Z, rd, blocks, feas_tol, backend):
    """Correction putting ``Z`` on ``<F_i, Z> = c_i``.

    The step is ``Z A^*(w) Z``, the least-change correction in the metric
    induced by ``Z``; it keeps ``Z`` positive semidefinite whenever it is
    small relative to ``Z`` on its own range.  Returns ``None`` if the result
    leaves the PSD cone by more than ``feas_tol`` (relative).
    """
    m = rd.size
    G = np.zeros((m, m))
    for b, Zb in zip(blocks, Z):
        schur_accumulate(Zb, b, G, backend)
    try:
        w = _schur_solver(G)(rd)
    except (np.linalg.LinAlgError, ValueError):
        return None
    out = []
    for b, Zb in zip(blocks, Z):
        K = np.tensordot(w, b.F, axes=1)
        Zn = Zb + Zb @ K @ Zb
        Zn = 0.5 * (Zn + Zn.T)
        scale = max(1.0, float(np.linalg.norm(Zb, 2)))
        if np.linalg.eigvalsh(Zn)[0] < -feas_tol * scale:
            return None
        out.append(Zn)
    return out


def _all_pd(mats):
    try:
        for X in mats:
            np.linalg.cholesky(X)
    except np.linalg.LinAlgError:
        return False
    return True


def _initial_point(c, blocks):
    S, Z = [], []
    for blk in blocks:
        d = blk.dim
        fnorms = [np.linalg.norm(Fi) for Fi in blk.F]
        xi = max(10.0, math.sqrt(d))
        if fnorms:
            xi = max(xi, d * max((1.0 + abs(ci)) / (1.0 + fn) for ci, fn in zip(c, fnorms)))
        eta = max(10.0, math.sqrt(d), np.linalg.norm(blk.F0), max(fnorms, default=0.0))
        S.append(eta * np.eye(d))
        Z.append(xi * np.eye(d))
    return S, Z


def solve(problem, gap_tol=None, feas_tol=None, max_iter=None, **options):
    """Solve an :class:`~gaussrt.sdp.SdpProblem`.

    Parameters
    ----------
    problem : SdpProblem
    gap_tol : float, default 1e-8
        Relative duality gap ``|p - d| / (1 + |p| + |d|)`` at termination.
    feas_tol : float, default 1e-9
        Relative primal and dual residual norms at termination.
    max_iter : int, default 200
    **options
        ``step`` (fraction to the boundary, 0.98) and ``backend``
        (``"compiled"`` or ``"python"``; defaults to the import-time choice).

    Returns
    -------
    SdpSolution
        ``status`` is one of ``optimal``, ``infeasible``, ``unbounded`` or
        ``numerical_failure``.  For ``infeasible`` the certificate is a list
        of PSD matrices ``Z`` with ``<F_i, Z> = 0`` and ``<F0, Z> = -1``; for
        ``unbounded`` it is a direction ``d`` with ``sum d_i F_i >= 0`` and
        ``c^T d = -1``.
    """
    opts = dict(DEFAULT_OPTIONS)
    opts.update(options)
    gap_tol = opts["gap_tol"] if gap_tol is None else gap_tol
    feas_tol = opts["feas_tol"] if feas_tol is None else feas_tol
    max_iter = opts["max_iter"] if max_iter is None else max_iter
    backend = opts["backend"]
    step = opts["step"]

    c = problem.c
    m = c.size
    embedded = [b.is_complex for b in problem.blocks]
    blocks = [BlockData(*b.real_form()) for b in problem.blocks]
    norm_F0 = math.sqrt(sum(np.sum(b.F0 ** 2) for b in blocks))
    norm_c = float(np.linalg.norm(c))

    y = np.zeros(m)
    S, Z = _initial_point(c, blocks)
    history = []
    status, message, certificate = "numerical_failure", "iteration limit reached", None
    stalls = 0
    it = 0

    def finish(status, message, certificate=None):
        Zout = [unembed_dual(Zb) if emb else Zb.copy() for Zb, emb in zip(Z, embedded)]
        Sout = [unembed_dual(Sb) / 2.0 if emb else Sb.copy() for Sb, emb in zip(S, embedded)]
        pobj = float(c @ y)
        dobj = -sum(_inner(b.F0, Zb) for b, Zb in zip(blocks, Z))
        return SdpSolution(
            status=status,
            y=y.copy(),
            Z=Zout,
            S=Sout,
            primal_objective=pobj,
            dual_objective=dobj,
            gap=abs(pobj - dobj) / (1.0 + abs(pobj) + abs(dobj)),
            primal_infeasibility=pinf,
            dual_infeasibility=dinf,
            iterations=it,
            certificate=certificate,
            message=message,
            history=history,
        )

    pinf = dinf = math.inf
    for it in range(max_iter + 1):
        rp = [b.F0 + np.tensordot(y, b.F, axes=1) - Sb for b, Sb in zip(blocks, S)]
        AZ = np.zeros(m)
        for b, Zb in zip(blocks, Z):
            inner_products(Zb, b, AZ, backend)
        rd = c - AZ
        pobj = float(c @ y)
        dobj = -sum(_inner(b.F0, Zb) for b, Zb in zip(blocks, Z))
        comp = sum(_inner(Sb, Zb) for Sb, Zb in zip(S, Z))
        nu = sum(b.dim for b in blocks)
        mu = comp / nu
        pinf = math.sqrt(sum(np.sum(r ** 2) for r in rp)) / (1.0 + norm_F0)
        dinf = float(np.linalg.norm(rd)) / (1.0 + norm_c)
        relgap = abs(pobj - dobj) / (1.0 + abs(pobj) + abs(dobj))
        relcomp = comp / (1.0 + abs(pobj) + abs(dobj))
        history.append(
            {"iter": it, "pobj": pobj, "dobj": dobj, "pinf": pinf, "dinf": dinf, "mu": mu}
        )
        log.debug("it %3d pobj %+.10e dobj %+.10e pinf %.2e dinf %.2e mu %.2e",
                  it, pobj, dobj, pinf, dinf, mu)

        if pinf <= feas_tol and dinf <= feas_tol and max(relgap, relcomp) <= gap_tol:
            return finish("optimal", "converged")
        if pinf <= feas_tol and max(relgap, relcomp) <= gap_tol and dinf <= 1e3 * feas_tol:
            Zp = _polish_dual(Z, rd, blocks, feas_tol, backend)
            if Zp is not None:
                AZp = np.zeros(m)
                for b, Zb in zip(blocks, Zp):
                    inner_products(Zb, b, AZp, backend)
                dinf_p = float(np.linalg.norm(c - AZp)) / (1.0 + norm_c)
                dobj_p = -sum(_inner(b.F0, Zb) for b, Zb in zip(blocks, Zp))
                relgap_p = abs(pobj - dobj_p) / (1.0 + abs(pobj) + abs(dobj_p))
                if dinf_p <= feas_tol and relgap_p <= gap_tol:
                    Z, dinf = Zp, dinf_p
                    return finish("optimal", "converged after dual polishing")

        # Farkas-type certificates from the current iterate.
        if dobj > 0:
            ratio = float(np.linalg.norm(AZ)) / dobj
            if ratio <= feas_tol and dobj > 1.0 / feas_tol ** 0.5:
                cert = [Zb / dobj for Zb in Z]
                certificate = [unembed_dual(Zb) if e else Zb for Zb, e in zip(cert, embedded)]
                return finish("infeasible", "primal LMI infeasible (dual ray found)", certificate)
        if pobj < -1.0 / feas_tol ** 0.5 * (1.0 + norm_F0):
            dvec = y / -pobj
            ok = all(
                np.linalg.eigvalsh(np.tensordot(dvec, b.F, axes=1))[0] >= -feas_tol ** 0.5
                for b in blocks
            )
            if ok:
                return finish("unbounded", "objective unbounded below (primal ray found)", dvec)
        if it == max_iter:
            break

        try:
            scal = [_nt_scaling(Sb, Zb) for Sb, Zb in zip(S, Z)]
        except np.linalg.LinAlgError as exc:
            return finish("numerical_failure", f"scaling failed: {exc}")
        winv = [Rinv.T @ Rinv for _, Rinv, _ in scal]
        M = np.zeros((m, m))
        for b, W in zip(blocks, winv):
            schur_accumulate(W, b, M, backend)
        solveM = _schur_solver(M)
        # W^{-1} rp W^{-1} enters every right-hand side.
        wrw = [W @ r @ W for W, r in zip(winv, rp)]

        def direction(Rc):
            rhs = np.zeros(m)
            for b, R_, x in zip(blocks, Rc, wrw):
                inner_products(R_ - x, b, rhs, backend)
            rhs -= rd
            dy = solveM(rhs)
            dS = [r + np.tensordot(dy, b.F, axes=1) for b, r in zip(blocks, rp)]
            dZ = [R_ - W @ ds @ W for R_, W, ds in zip(Rc, winv, dS)]
            return dy, dS, dZ

        def step_lengths(dS, dZ):
            ap = ad = math.inf
            for (R, Rinv, lam), ds, dz in zip(scal, dS, dZ):
                ap = min(ap, _max_step(lam, Rinv @ ds @ Rinv.T))
                ad = min(ad, _max_step(lam, R.T @ dz @ R))
            return ap, ad

        # predictor
        dy, dS, dZ = direction([-Zb for Zb in Z])
        ap, ad = step_lengths(dS, dZ)
        ap, ad = min(1.0, ap), min(1.0, ad)
        comp_aff = sum(_inner(Sb + ap * ds, Zb + ad * dz) for Sb, Zb, ds, dz in zip(S, Z, dS, dZ))
        sigma = min(1.0, max(0.0, comp_aff / comp)) ** 3 if comp > 0 else 0.0

        # corrector
        Rc = []
        for (R, Rinv, lam), ds, dz in zip(scal, dS, dZ):
            dst = Rinv @ ds @ Rinv.T
            dzt = R.T @ dz @ R
            rhs = -np.diag(lam ** 2) + sigma * mu * np.eye(lam.size) - 0.5 * (dst @ dzt + dzt @ dst)
            X = 2.0 * rhs / (lam[:, None] + lam[None, :])
            Rc.append(Rinv.T @ X @ Rinv)
        dy, dS, dZ = direction(Rc)
        ap, ad = step_lengths(dS, dZ)
        ap, ad = min(1.0, step * ap), min(1.0, step * ad)

        if max(ap, ad) < 1e-10:
            stalls += 1
            if stalls >= 3:
                return finish("numerical_failure", "step lengths collapsed")
        else:
            stalls = 0
        # round-off can push a long step just outside the cone; back off
        for _ in range(8):
            S_new = [Sb + ap * ds for Sb, ds in zip(S, dS)]
            Z_new = [Zb + ad * dz for Zb, dz in zip(Z, dZ)]
            S_new = [0.5 * (Sb + Sb.T) for Sb in S_new]
            Z_new = [0.5 * (Zb + Zb.T) for Zb in Z_new]
            if _all_pd(S_new) and _all_pd(Z_new):
                break
            ap, ad = 0.5 * ap, 0.5 * ad
        else:
            return finish("numerical_failure", "iterate left the cone after backtracking")
        y = y + ap * dy
        S, Z = S_new, Z_new

    return finish(status, message, certificate)


def feasibility_bisect(is_feasible, lo, hi, rtol=1e-9, max_iter=200):
    """Smallest ``t`` in ``[lo, hi]`` with ``is_feasible(t)``, by bisection.

    ``is_feasible`` must be monotone (feasible at ``t`` implies feasible above
    ``t``) and true at ``hi``.  When ``lo`` itself is feasible it is returned
    without bisecting.  The returned value is the upper end of the final
    bracket, i.e. a feasible point, within ``rtol * hi`` of the threshold.

    Returns
    -------
    value : float
    brackets : list of (lo, hi)
        The bracket after every iteration; widths halve each step.
    """
    lo, hi = float(lo), float(hi)
    if not lo <= hi:
        raise ValidationError(f"invalid bracket [{lo}, {hi}]")
    if is_feasible(lo):
        return lo, [(lo, lo)]
    if not is_feasible(hi):
        raise ValidationError(f"upper end {hi} of the bracket is not feasible")
    brackets = [(lo, hi)]
    for _ in range(max_iter):
        if hi - lo <= rtol * hi:
            break
        mid = 0.5 * (lo + hi)
        if is_feasible(mid):
            hi = mid
        else:
            lo = mid
        brackets.append((lo, hi))
    return hi, brackets
