"""Free cones of covariance matrices and the kappa / upsilon quantifiers.

A cone is described by linear maps ``f``, ``g`` of a real symmetric matrix
variable ``Q`` and constant Hermitian matrices ``C``, ``D``:

    V  is free   <=>   exists Q:  V >= f(Q) + C,  g(Q) >= D.

``kappa(V) = min{t >= 1 : tV free}`` and
``upsilon(V) = max{zeta : V >= zeta (f(Q) + C), g(Q) >= D}`` satisfy
``kappa = max(1, 1/upsilon)``.  The SDP for upsilon is linearized with the
substitution ``Q' = zeta Q``; its dual variables are second-moment witnesses
``(W, Y)`` with ``<W, C> + <Y, D> = 1`` and ``<W, V> = upsilon``.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from . import sdp
from .config import membership_tol
from .errors import SolverError, ValidationError
from .symplectic import (
    ModePartition,
    local_omega,
    nu_min,
    omega,
    partial_transpose,
    schur_complement,
    symplectic_eigenvalues,
)

__all__ = [
    "THEORIES",
    "FreeConeSpec",
    "ResourceReport",
    "UpsilonResult",
    "cone_spec",
    "membership",
    "kappa",
    "upsilon",
    "analytic_upsilon",
    "kappa_upper_bound",
    "steerability_N",
    "slater_point",
    "check_slater",
    "witness_normalization",
    "channel_feasibility_margin",
    "feasibility_margin",
    "preconditioner",
    "kappa_problem",
    "upsilon_problem",
    "margin_problem",
]

THEORIES = ("nonclassicality", "ppt", "steering", "separability", "separability_simplified")
BIPARTITE = THEORIES[1:]


@dataclass(frozen=True)
class FreeConeSpec:
    """Data ``(f, g, C, D)`` of a free cone on ``partition``.

    ``q_dims`` lists the sizes of the real symmetric blocks making up ``Q``;
    ``f`` maps the list of blocks to a ``2N x 2N`` matrix and ``g`` to a list
    of Hermitian matrices matching ``D``.  ``f``/``g`` may be ``None`` when
    ``Q`` is absent.  ``reference`` is a known member (used for the a-priori
    upper bound on kappa).
    """

    theory: str
    partition: ModePartition
    C: np.ndarray
    q_dims: tuple = ()
    f: object = None
    g: object = None
    D: tuple = ()
    parties: tuple = ()
    reference: np.ndarray = None

    @property
    def dim(self):
        return 2 * self.partition.n

    @property
    def has_q(self):
        return bool(self.q_dims)

    def q_basis(self):
        """Symmetric unit matrices spanning ``Q``, as ``(block, a, b)``."""
        out = []
        for k, d in enumerate(self.q_dims):
            for a in range(d):
                for b in range(a, d):
                    out.append((k, a, b))
        return out

    def _unit(self, k, a, b):
        Qs = [np.zeros((d, d)) for d in self.q_dims]
        Qs[k][a, b] = 1.0
        Qs[k][b, a] = 1.0
        return Qs

    def f_coefficients(self):
        return [self.f(self._unit(*e)) for e in self.q_basis()]

    def g_coefficients(self):
        return [self.g(self._unit(*e)) for e in self.q_basis()]

    def unpack_q(self, q):
        Qs = [np.zeros((d, d)) for d in self.q_dims]
        for val, (k, a, b) in zip(q, self.q_basis()):
            Qs[k][a, b] = val
            Qs[k][b, a] = val
        return Qs

    def check_linearity(self, rng=None, trials=3):
        """Spot-check ``f(aQ1 + Q2) = a f(Q1) + f(Q2)`` (and the same for ``g``)."""
        if not self.has_q:
            return True
        rng = np.random.default_rng(rng)
        for _ in range(trials):
            Q1 = [_rand_sym(rng, d) for d in self.q_dims]
            Q2 = [_rand_sym(rng, d) for d in self.q_dims]
            a = float(rng.normal())
            mix = [a * x + y for x, y in zip(Q1, Q2)]
            if not np.allclose(self.f(mix), a * self.f(Q1) + self.f(Q2), atol=1e-12):
                return False
            if self.g is not None:
                for lhs, r1, r2 in zip(self.g(mix), self.g(Q1), self.g(Q2)):
                    if not np.allclose(lhs, a * r1 + r2, atol=1e-12):
                        return False
        return True


def _rand_sym(rng, d):
    A = rng.normal(size=(d, d))
    return A + A.T


def _embed(n, idx, block):
    out = np.zeros((2 * n, 2 * n), dtype=np.result_type(block, float))
    out[np.ix_(idx, idx)] = block
    return out


def _bipartite(partition, parties):
    parties = tuple(parties) if parties else partition.parties
    if len(parties) != 2 or set(partition.parties) != set(parties):
        raise ValidationError(
            f"theory needs a bipartite partition, got parties {partition.parties}"
        )
    return parties


def cone_spec(theory, partition, parties=None):
    """Free cone for one of :data:`THEORIES`.

    ``parties`` fixes the role order ``(A, B)``: for ``ppt`` the momenta of
    ``B`` are flipped, for ``steering`` ``A`` steers ``B``, and the
    simplified separability cone optimizes over ``A`` only.  Defaults to the
    partition's parties in order of appearance.
    """
    if not isinstance(partition, ModePartition):
        partition = ModePartition(tuple(partition))
    n = partition.n
    N2 = 2 * n
    eye = np.eye(N2)
    if theory == "nonclassicality":
        return FreeConeSpec(theory, partition, C=eye, reference=eye)
    if theory not in BIPARTITE:
        raise ValidationError(f"unknown theory {theory!r}; choose from {THEORIES}")
    A, B = _bipartite(partition, parties)
    iOa = 1j * local_omega(partition, A)
    iOb = 1j * local_omega(partition, B)
    ia, ib = partition.indices(A), partition.indices(B)
    na, nb = partition.size(A), partition.size(B)
    if theory == "ppt":
        return FreeConeSpec(theory, partition, C=iOa - iOb, parties=(A, B), reference=eye)
    if theory == "steering":
        return FreeConeSpec(theory, partition, C=iOb, parties=(A, B), reference=eye)
    if theory == "separability":
        return FreeConeSpec(
            theory,
            partition,
            C=np.zeros((N2, N2)),
            q_dims=(2 * na, 2 * nb),
            f=lambda Q: _embed(n, ia, Q[0]) + _embed(n, ib, Q[1]),
            g=lambda Q: [Q[0], Q[1]],
            D=(1j * omega(na), 1j * omega(nb)),
            parties=(A, B),
            reference=eye,
        )
    # separability_simplified
    return FreeConeSpec(
        theory,
        partition,
        C=iOb,
        q_dims=(2 * na,),
        f=lambda Q: _embed(n, ia, Q[0]),
        g=lambda Q: [Q[0]],
        D=(1j * omega(na),),
        parties=(A, B),
        reference=eye,
    )


# -- analytic fast paths -----------------------------------------------------


def analytic_upsilon(V, spec):
    """Closed-form upsilon, or ``None`` when the theory has none."""
    V = np.asarray(V, dtype=float)
    if spec.theory == "nonclassicality":
        return float(np.linalg.eigvalsh(V)[0])
    if spec.theory == "ppt":
        return nu_min(partial_transpose(V, spec.partition, spec.parties[1]))
    if spec.theory == "steering":
        return nu_min(schur_complement(V, spec.partition.indices(spec.parties[0])))
    return None


def steerability_N(V, partition, parties=None):
    """``N = -sum_k log min(1, nu_k(V / V_A))`` for ``A -> B`` steering."""
    if not isinstance(partition, ModePartition):
        partition = ModePartition(tuple(partition))
    A, _ = _bipartite(partition, parties)
    nus = symplectic_eigenvalues(schur_complement(np.asarray(V, dtype=float), partition.indices(A)))
    return float(-np.sum(np.log(np.minimum(1.0, nus))))


def kappa_upper_bound(V, reference=None):
    """``max(1, ||V^{-1}|| ||W0||)`` for a known member ``W0`` (default ``I``)."""
    V = np.asarray(V, dtype=float)
    W0 = np.eye(V.shape[0]) if reference is None else np.asarray(reference)
    inv_norm = 1.0 / float(np.linalg.eigvalsh(V)[0])
    return max(1.0, inv_norm * float(np.linalg.norm(W0, 2)))


# -- SDP formulations --------------------------------------------------------


def _check_input(V, spec):
    V = np.asarray(V, dtype=float)
    if V.shape != (spec.dim, spec.dim):
        raise ValidationError(f"V has shape {V.shape}, cone expects {spec.dim}x{spec.dim}")
    return 0.5 * (V + V.T)


def _stack(first, coeffs, dim):
    mats = [first] + list(coeffs)
    dtype = np.result_type(*mats) if mats else float
    return np.array(mats, dtype=dtype).reshape(len(mats), dim, dim)


def _g_blocks(spec, lead_coeff):
    """LMI blocks ``g(Q) - (lead) D >= 0``; ``lead_coeff(D_k)`` is the first column."""
    if spec.g is None:
        return []
    gc = spec.g_coefficients()
    blocks = []
    for k, Dk in enumerate(spec.D):
        d = Dk.shape[0]
        F0, first = lead_coeff(Dk)
        coeffs = [gq[k] for gq in gc]
        blocks.append(sdp.LmiBlock(F0, _stack(first, coeffs, d), name=f"g{k}"))
    return blocks


def preconditioner(V):
    """``V^{-1/2}``: congruence by it turns ``xi V`` into ``xi I``.

    Feasibility of ``X >= 0`` is unchanged under ``X -> T X T``, and a dual
    matrix ``Z`` of the transformed block maps back to ``T Z T``.  Without it
    strongly squeezed inputs (condition numbers ~1e5) stall the solver.
    """
    lam, U = np.linalg.eigh(V)
    return (U / np.sqrt(lam)) @ U.T


def _main_block(F0, first, fc, T, dim):
    coeffs = _stack(first, fc, dim)
    if T is not None:
        F0 = T @ F0 @ T
        F0 = 0.5 * (F0 + F0.conj().T)
        coeffs = np.einsum("ij,mjk,kl->mil", T, coeffs, T)
        coeffs = 0.5 * (coeffs + coeffs.conj().transpose(0, 2, 1))
    return sdp.LmiBlock(F0, coeffs, name="main")


def kappa_problem(V, spec, precondition=True):
    """``min xi  s.t.  xi V - f(Q) - C >= 0,  g(Q) - D >= 0,  xi >= 1``.

    With ``precondition`` the first constraint is imposed as
    ``T (xi V - f(Q) - C) T >= 0`` for ``T = V^{-1/2}``.
    """
    V = _check_input(V, spec)
    T = preconditioner(V) if precondition else None
    fc = [-F for F in spec.f_coefficients()] if spec.has_q else []
    main = _main_block(-spec.C, V, fc, T, spec.dim)
    blocks = [main] + _g_blocks(spec, lambda Dk: (-Dk, np.zeros_like(Dk)))
    c = np.zeros(1 + len(fc))
    c[0] = 1.0
    return sdp.SdpProblem(c, blocks).add_bound(0, lower=1.0)


def upsilon_problem(V, spec, precondition=True):
    """``max zeta  s.t.  V - f(Q') - zeta C >= 0,  g(Q') - zeta D >= 0``.

    The dual matrix of the first block is the witness ``W`` (after mapping
    back through the preconditioner, see :func:`upsilon`).
    """
    V = _check_input(V, spec)
    T = preconditioner(V) if precondition else None
    fc = [-F for F in spec.f_coefficients()] if spec.has_q else []
    main = _main_block(V, -spec.C, fc, T, spec.dim)
    blocks = [main] + _g_blocks(spec, lambda Dk: (np.zeros_like(Dk), -Dk))
    c = np.zeros(1 + len(fc))
    c[0] = -1.0
    return sdp.SdpProblem(c, blocks)


def margin_problem(V, spec, xi=1.0, precondition=True):
    """``max t  s.t.  xi V - f(Q) - C >= t M,  g(Q) - D >= t I,  t <= 1``.

    ``M = V`` with ``precondition`` (the default) and ``M = I`` without; the
    sign of the optimum, which is all feasibility tests use, is the same.
    """
    V = _check_input(V, spec)
    T = preconditioner(V) if precondition else None
    fc = [-F for F in spec.f_coefficients()] if spec.has_q else []
    first = -V if precondition else -np.eye(spec.dim)
    main = _main_block(xi * V - spec.C, first, fc, T, spec.dim)
    blocks = [main] + _g_blocks(spec, lambda Dk: (-Dk, -np.eye(Dk.shape[0])))
    c = np.zeros(1 + len(fc))
    c[0] = -1.0
    return sdp.SdpProblem(c, blocks).add_bound(0, upper=1.0)


def _solve(problem, what, **options):
    sol = sdp.solve(problem, **options)
    if not sol.optimal:
        raise SolverError(f"{what}: solver returned {sol.status} ({sol.message})", sol)
    return sol


def feasibility_margin(V, spec, xi=1.0, **options):
    """Optimal ``t`` of :func:`margin_problem`; nonnegative iff ``xi V`` is free."""
    sol = _solve(margin_problem(V, spec, xi), "feasibility margin", **options)
    return -sol.primal_objective


def channel_feasibility_margin(ch, V_in, spec, **options):
    """Largest ``t`` such that some ``W`` in ``spec``'s cone (and ``W >= i Omega``)
    satisfies ``Gamma + (Sigma V Sigma (+) 0) - (0 (+) W) >= t I``.

    Nonnegative iff the channel maps ``V_in`` into the cone (Schur
    variational characterization).
    """
    n_out = ch.n_out
    if spec.partition.n != n_out:
        raise ValidationError("cone and channel output mode counts differ")
    d_out = 2 * n_out
    w_basis = [(a, b) for a in range(d_out) for b in range(a, d_out)]
    q_basis = spec.q_basis()
    m = 1 + len(w_basis) + len(q_basis)

    def unit(a, b, d):
        E = np.zeros((d, d))
        E[a, b] = E[b, a] = 1.0
        return E

    M = ch._flipped_input(np.asarray(V_in, dtype=float))
    dim = M.shape[0]
    out_idx = ch.output_indices
    F = np.zeros((m, dim, dim))
    F[0] = -np.eye(dim)
    for i, (a, b) in enumerate(w_basis):
        F[1 + i][np.ix_(out_idx, out_idx)] = -unit(a, b, d_out)
    blocks = [sdp.LmiBlock(M, F, name="choi")]

    fc = spec.f_coefficients() if spec.has_q else []
    Fc = np.zeros((m, d_out, d_out), dtype=np.result_type(spec.C, float))
    Fc[0] = -np.eye(d_out)
    for i, (a, b) in enumerate(w_basis):
        Fc[1 + i] = unit(a, b, d_out)
    for i, Fq in enumerate(fc):
        Fc[1 + len(w_basis) + i] = -Fq
    blocks.append(sdp.LmiBlock(-spec.C, Fc, name="cone"))

    Fq = np.zeros((m, d_out, d_out))
    Fq[0] = -np.eye(d_out)
    for i, (a, b) in enumerate(w_basis):
        Fq[1 + i] = unit(a, b, d_out)
    blocks.append(sdp.LmiBlock(-1j * omega(n_out), Fq.astype(complex), name="qcm"))

    if spec.g is not None:
        gc = spec.g_coefficients()
        for k, Dk in enumerate(spec.D):
            d = Dk.shape[0]
            G = np.zeros((m, d, d))
            G[0] = -np.eye(d)
            for i, gq in enumerate(gc):
                G[1 + len(w_basis) + i] = gq[k]
            blocks.append(sdp.LmiBlock(-Dk, G, name=f"g{k}"))
    c = np.zeros(m)
    c[0] = -1.0
    problem = sdp.SdpProblem(c, blocks).add_bound(0, upper=1.0)
    return -_solve(problem, "channel certification", **options).primal_objective


# -- witnesses and strong duality ---------------------------------------------


def slater_point(spec):
    """Strictly feasible point ``(W, [Y_k])`` of the witness (dual) program.

    Built from ``I + (i / 2N) Omega``-type matrices; ``None`` for cones
    without a known construction.
    """
    n = spec.partition.n
    N2 = 2 * n
    eye = np.eye(N2)
    t = spec.theory
    if t == "nonclassicality":
        return eye / N2, []
    A, B = spec.parties if spec.parties else (None, None)
    if t == "ppt":
        Oa, Ob = local_omega(spec.partition, A), local_omega(spec.partition, B)
        return eye + 1j / N2 * (Oa - Ob), []
    if t == "steering":
        nb = spec.partition.size(B)
        return eye + 1j / (2 * nb) * local_omega(spec.partition, B), []
    if t == "separability":
        na, nb = spec.partition.size(A), spec.partition.size(B)
        return eye.astype(complex), [
            np.eye(2 * na) + 1j / N2 * omega(na),
            np.eye(2 * nb) + 1j / N2 * omega(nb),
        ]
    if t == "separability_simplified":
        na = spec.partition.size(A)
        return eye + 1j / N2 * omega(n), [np.eye(2 * na) + 1j / N2 * omega(na)]
    return None


def witness_normalization(spec, W, Y):
    """``<W, C> + sum_k <Y_k, D_k>`` (equals 1 for a feasible witness)."""
    val = sdp.hermitian_inner(W, spec.C)
    for Yk, Dk in zip(Y, spec.D):
        val += sdp.hermitian_inner(Yk, Dk)
    return val


def adjoint_residual(spec, W, Y):
    """``max |f^dag(W) - g^dag(Y)|`` over the Q basis (0 when Q is absent)."""
    if not spec.has_q:
        return 0.0
    fW = np.array([sdp.hermitian_inner(Fq, W) for Fq in spec.f_coefficients()])
    gY = np.array(
        [sum(sdp.hermitian_inner(Gk, Yk) for Gk, Yk in zip(gq, Y)) for gq in spec.g_coefficients()]
    )
    return float(np.max(np.abs(fW - gY)))


def check_slater(spec, tol=1e-10):
    """``True`` when :func:`slater_point` is strictly feasible for the witness program,
    ``None`` when no point is known (no strong-duality claim is made then)."""
    point = slater_point(spec)
    if point is None:
        return None
    W, Y = point
    pd = np.linalg.eigvalsh(W)[0] > tol and all(np.linalg.eigvalsh(Yk)[0] > tol for Yk in Y)
    norm_ok = abs(witness_normalization(spec, W, Y) - 1.0) <= 1e-12
    return bool(pd and norm_ok and adjoint_residual(spec, W, Y) <= 1e-12)


# -- quantifiers --------------------------------------------------------------


@dataclass
class UpsilonResult:
    value: float
    W: np.ndarray
    Y: list
    gap: float
    normalization: float
    adjoint_residual: float
    witness_value: float
    solution: object = field(default=None, repr=False)

    @property
    def certifies_resource(self):
        """``<W, V> < 1``: the witness detects a resource state."""
        return self.witness_value < 1.0


@dataclass
class ResourceReport:
    theory: str
    kappa: float
    upsilon: float
    member: bool
    method: str
    xi: float = None
    Q: list = None
    W: np.ndarray = None
    Y: list = None
    strong_duality: bool = None
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self):
        out = {
            "theory": self.theory,
            "kappa": self.kappa,
            "upsilon": self.upsilon,
            "member": self.member,
            "method": self.method,
            "strong_duality": self.strong_duality,
            "diagnostics": self.diagnostics,
        }
        if self.W is not None:
            out["W"] = self.W
            out["Y"] = self.Y
        return out


def upsilon(V, spec, scale=1.0, **options):
    """Solve the upsilon SDP; the dual matrices are the witness ``(W, Y)``.

    The dual feasible set does not depend on ``V``, so the program may be
    solved for ``scale * V`` (``upsilon`` scales linearly) without changing
    the witness.  Passing ``scale ~ kappa`` keeps the optimum near 1, which
    preserves absolute accuracy of ``1/upsilon`` for strongly resourceful
    inputs.
    """
    V = _check_input(V, spec)
    sol = _solve(upsilon_problem(scale * V, spec), "upsilon", **options)
    T = preconditioner(scale * V)
    W = T @ sol.Z[0] @ T
    W = 0.5 * (W + W.conj().T)
    Y = sol.Z[1:1 + len(spec.D)]
    return UpsilonResult(
        value=-sol.primal_objective / scale,
        W=W,
        Y=Y,
        gap=sol.gap,
        normalization=witness_normalization(spec, W, Y),
        adjoint_residual=adjoint_residual(spec, W, Y),
        witness_value=sdp.hermitian_inner(W, V),
        solution=sol,
    )


def _kappa_sdp(V, spec, **options):
    """Solve the kappa SDP; on numerical failure fall back to the upsilon SDP
    (``xi = 1/zeta``, ``Q = Q'/zeta``), which is better conditioned for
    strongly squeezed inputs."""
    sol = sdp.solve(kappa_problem(V, spec), **options)
    if sol.optimal:
        xi = float(sol.y[0])
        Q = spec.unpack_q(sol.y[1:]) if spec.has_q else []
        return xi, Q, sol, None
    fallback = _solve(upsilon_problem(V, spec), "kappa (upsilon fallback)", **options)
    zeta = float(fallback.y[0])
    if zeta <= 0:
        raise SolverError("kappa: upsilon fallback returned a nonpositive value", fallback)
    Q = [q / zeta for q in spec.unpack_q(fallback.y[1:])] if spec.has_q else []
    return max(1.0, 1.0 / zeta), Q, fallback, sol.message


def _kappa_bisect(V, spec, **options):
    V = _check_input(V, spec)
    hi = kappa_upper_bound(V, spec.reference)
    # boundary points have margin 0 up to the solver's feasibility tolerance
    slack = options.get("feas_tol", sdp.DEFAULT_OPTIONS["feas_tol"])
    value, brackets = sdp.feasibility_bisect(
        lambda xi: feasibility_margin(V, spec, xi, **options) >= -slack, 1.0, hi * (1 + 1e-6)
    )
    return value, len(brackets) - 1


def kappa(V, spec, method="auto", witness=False, tol=None, **options):
    """Resource quantifier ``kappa_F(V)``.

    Parameters
    ----------
    method : {"auto", "analytic", "sdp", "bisect", "both"}
        ``auto`` uses the closed form when the theory has one, else the SDP.
        ``both`` computes analytic and SDP values and records their difference.
    witness : bool
        Also solve the upsilon SDP and attach the dual witness ``(W, Y)``.
    tol : float
        Membership tolerance on ``kappa - 1`` (default from ``GAUSSRT_TOL``).
    """
    V = _check_input(V, spec)
    tol = membership_tol() if tol is None else tol
    ups = analytic_upsilon(V, spec)
    diag = {}
    xi, Q = None, None
    if method == "analytic" and ups is None:
        raise ValidationError(f"no analytic formula for {spec.theory}")
    if method == "auto":
        method = "analytic" if ups is not None else "sdp"

    if method == "analytic":
        value = max(1.0, 1.0 / ups)
    elif method in ("sdp", "both"):
        xi, Q, sol, failed = _kappa_sdp(V, spec, **options)
        value = xi
        diag.update(iterations=sol.iterations, gap=sol.gap)
        if failed:
            diag.update(fallback="upsilon", kappa_sdp_failure=failed)
        if method == "both":
            if ups is None:
                raise ValidationError(f"no analytic formula for {spec.theory}")
            analytic_value = max(1.0, 1.0 / ups)
            diag.update(kappa_analytic=analytic_value, kappa_sdp=xi,
                        agreement=abs(analytic_value - xi))
    elif method == "bisect":
        value, steps = _kappa_bisect(V, spec, **options)
        diag.update(bisection_steps=steps)
    else:
        raise ValidationError(f"unknown method {method!r}")

    report = ResourceReport(
        theory=spec.theory,
        kappa=float(value),
        upsilon=ups,
        member=bool(value <= 1.0 + tol),
        method=method,
        xi=xi,
        Q=Q,
        strong_duality=check_slater(spec),
        diagnostics=diag,
    )
    if witness:
        res = upsilon(V, spec, scale=max(1.0, report.kappa), **options)
        report.W, report.Y = res.W, res.Y
        if report.upsilon is None:
            report.upsilon = res.value
        diag.update(
            upsilon_sdp=res.value,
            upsilon_gap=res.gap,
            witness_value=res.witness_value,
            witness_normalization=res.normalization,
            adjoint_residual=res.adjoint_residual,
            duality_residual=abs(report.kappa - max(1.0, 1.0 / res.value)),
        )
    return report


def membership(V, spec, tol=None, **options):
    """Is ``V`` in the free cone?  Boundary points count as members."""
    V = _check_input(V, spec)
    tol = membership_tol() if tol is None else tol
    ups = analytic_upsilon(V, spec)
    if ups is not None:
        return bool(max(1.0, 1.0 / ups) <= 1.0 + tol)
    return bool(feasibility_margin(V, spec, 1.0, **options) >= -tol)
