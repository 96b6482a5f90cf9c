import numpy as np
import pytest

from gaussrt import ModePartition, ValidationError, cone_spec
from gaussrt.cones import kappa_problem, upsilon_problem
from gaussrt.harness.sampling import bipartite_partition, random_qcm
from gaussrt.sdp import (
    BACKEND,
    LmiBlock,
    SdpProblem,
    dumps_problem,
    embed_hermitian,
    feasibility_bisect,
    hermitian_inner,
    loads_problem,
    solve,
    unembed_dual,
)

from oracles import tmsv


def scalar_problem():
    # minimize xi  s.t.  xi I - I >= 0,  xi >= 1
    F = np.array([np.eye(2)])
    prob = SdpProblem(np.array([1.0]), [LmiBlock(-np.eye(2), F, name="main")])
    return prob.add_bound(0, lower=1.0)


def test_trivial_problem():
    sol = solve(scalar_problem())
    assert sol.optimal
    # relative gap 1e-8 on 1 + |p| + |d| ~ 3
    assert sol.y[0] == pytest.approx(1.0, abs=5e-8)


def test_squeezed_nonclassicality_problem():
    r = 0.3
    V = np.diag([np.exp(-2 * r), np.exp(2 * r)])
    sol = solve(kappa_problem(V, cone_spec("nonclassicality", ModePartition.single(1))))
    assert sol.optimal
    assert sol.y[0] == pytest.approx(np.exp(0.6), abs=1e-7)


def test_ppt_problem_and_witness():
    spec = cone_spec("ppt", ModePartition(("A", "B")))
    sol = solve(kappa_problem(tmsv(0.5), spec))
    assert sol.y[0] == pytest.approx(np.e, abs=1e-6)
    usol = solve(upsilon_problem(tmsv(0.5), spec))
    assert -usol.primal_objective == pytest.approx(np.exp(-1), abs=1e-7)


def test_infeasible_and_unbounded():
    # y >= 1 and y <= 0
    prob = SdpProblem(np.array([1.0]), [LmiBlock(np.array([[-1.0]]), np.array([[[1.0]]]))])
    prob.add_bound(0, upper=0.0)
    assert solve(prob).status == "infeasible"
    # minimize -y subject to y >= 0
    prob = SdpProblem(np.array([-1.0]), [LmiBlock(np.zeros((1, 1)), np.array([[[1.0]]]))])
    assert solve(prob).status == "unbounded"


def test_embedding():
    H = np.array([[2.0, 1.0], [1.0, 3.0]])
    assert np.array_equal(embed_hermitian(H), np.block([[H, 0 * H], [0 * H, H]]))
    C = np.array([[1.0, 0.5j], [-0.5j, 2.0]])
    E = embed_hermitian(C)
    ev_c = np.linalg.eigvalsh(C)
    assert np.allclose(np.sort(np.linalg.eigvalsh(E)), np.sort(np.r_[ev_c, ev_c]))
    with pytest.raises(ValidationError):
        embed_hermitian(np.array([[1.0, 1j], [1j, 1.0]]))


def test_unembed_preserves_pairing(rng):
    G = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    H = G + G.conj().T
    A = rng.normal(size=(8, 8))
    Z = A @ A.T
    W = unembed_dual(Z)
    assert hermitian_inner(H, W) == pytest.approx(float(np.sum(embed_hermitian(H) * Z)))
    assert np.linalg.eigvalsh(W)[0] >= -1e-10


def test_weak_duality_on_feasible_iterates(rng):
    spec = cone_spec("separability", bipartite_partition(1, 1))
    for _ in range(5):
        sol = solve(kappa_problem(random_qcm(2, rng), spec))
        assert sol.optimal
        for h in sol.history:
            if h["pinf"] <= 1e-9 and h["dinf"] <= 1e-9:
                assert h["pobj"] >= h["dobj"] - 1e-8 * (1 + abs(h["pobj"]))


def test_determinism(rng):
    spec = cone_spec("separability", bipartite_partition(2, 1))
    prob = kappa_problem(random_qcm(3, rng), spec)
    a, b = solve(prob), solve(prob)
    assert np.array_equal(a.y, b.y) and a.iterations == b.iterations


def test_dump_load_roundtrip(rng):
    spec = cone_spec("steering", bipartite_partition(1, 2))
    prob = kappa_problem(random_qcm(3, rng), spec)
    back = loads_problem(dumps_problem(prob))
    assert np.array_equal(back.c, prob.c)
    for x, y in zip(back.blocks, prob.blocks):
        assert np.array_equal(x.F0, y.F0) and np.array_equal(x.F, y.F)
        assert x.name == y.name
    assert solve(back).y[0] == solve(prob).y[0]
    with pytest.raises(ValidationError):
        loads_problem("not an lmi file\n")


@pytest.mark.skipif(BACKEND != "compiled", reason="compiled extension not built")
def test_backends_agree(rng):
    from gaussrt.sdp._backend import BlockData, inner_products, schur_accumulate

    spec = cone_spec("separability", bipartite_partition(1, 2))
    prob = kappa_problem(random_qcm(3, rng), spec)
    for blk in prob.blocks:
        data = BlockData(*blk.real_form())
        data.dense = False  # exercise the sparse compiled loop on every block
        A = rng.normal(size=(data.dim, data.dim))
        W = A @ A.T
        out = {}
        for backend in ("python", "compiled"):
            M, g = np.zeros((prob.m, prob.m)), np.zeros(prob.m)
            schur_accumulate(W, data, M, backend)
            inner_products(W, data, g, backend)
            out[backend] = (M, g)
        assert np.allclose(out["python"][0], out["compiled"][0], atol=1e-10)
        assert np.allclose(out["python"][1], out["compiled"][1], atol=1e-10)
    a = solve(prob, backend="python")
    b = solve(prob, backend="compiled")
    assert a.y[0] == pytest.approx(b.y[0], abs=1e-9)


def test_feasibility_bisect():
    value, brackets = feasibility_bisect(lambda t: t >= np.exp(0.6), 1.0, 3.0, rtol=1e-10)
    assert value == pytest.approx(np.exp(0.6), abs=1e-9)
    widths = [hi - lo for lo, hi in brackets]
    assert all(w1 == pytest.approx(w0 / 2) for w0, w1 in zip(widths, widths[1:]))
    assert feasibility_bisect(lambda t: True, 1.0, 3.0)[0] == 1.0
    with pytest.raises(ValidationError):
        feasibility_bisect(lambda t: False, 1.0, 3.0)


def test_pure_python_switch():
    import os
    import subprocess
    import sys

    env = dict(os.environ, GAUSSRT_PURE_PYTHON="1")
    proc = subprocess.run([sys.executable, "-c", "import gaussrt.sdp as s; print(s.BACKEND)"],
                          capture_output=True, text=True, env=env)
    assert proc.stdout.strip() == "python"


def test_embedding_of_i_omega():
    E = embed_hermitian(1j * np.array([[0.0, 1.0], [-1.0, 0.0]]))
    assert np.allclose(np.linalg.eigvalsh(E), [-1, -1, 1, 1])


def test_embedding_preserves_lowest_eigenvalue(rng):
    for _ in range(100):
        d = int(rng.integers(1, 6))
        G = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        H = G + G.conj().T
        assert np.linalg.eigvalsh(embed_hermitian(H))[0] == pytest.approx(np.linalg.eigvalsh(H)[0], abs=1e-10)


@pytest.mark.parametrize("theory", ["nonclassicality", "ppt", "steering", "separability"])
def test_bisection_agrees_with_direct_solve(theory, rng):
    from gaussrt import kappa

    p = bipartite_partition(1, 1)
    spec = cone_spec(theory, p)
    for V in (tmsv(0.5), random_qcm(2, rng, dmin=1.0, dmax=1.5, scale=0.6)):
        direct = kappa(V, spec, method="sdp").kappa
        assert kappa(V, spec, method="bisect").kappa == pytest.approx(direct, abs=1e-6)
