import numpy as np
import pytest

from gaussrt import (
    GaussianChannel,
    ModePartition,
    SingularPivotError,
    ValidationError,
    apply_channel,
    certify_free,
    compose,
    cone_spec,
    make_channel,
    membership,
)
from gaussrt.channels import random_displacement
from gaussrt.harness.sampling import (
    bipartite_partition,
    random_cone_member,
    random_local_symplectic,
    random_qcm,
)
from gaussrt.symplectic import direct_sum

from oracles import loss_by_dilation, tmsv

ONE = ModePartition(("A",))
AB = ModePartition(("A", "B"))


def test_identity_choi_limit_on_vacuum():
    ch = make_channel("identity", ONE).to_choi(r=5.0)
    assert np.allclose(apply_channel(ch, np.eye(2)), np.eye(2), atol=1e-6)


def test_pure_loss_fixes_vacuum():
    loss = make_channel("loss", ONE, eta=0.5)
    assert np.allclose(loss(np.eye(2)), np.eye(2))


def test_loss_on_thermal_matches_dilation():
    V = 3.0 * np.eye(2)
    out = make_channel("loss", ONE, eta=0.5)(V)
    assert np.allclose(out, loss_by_dilation(V, 0.5))
    assert np.allclose(out, 2.0 * np.eye(2))


def test_thermal_loss_matches_dilation(rng):
    V = random_qcm(1, rng)
    out = make_channel("loss", ONE, eta=0.3, nbar=0.7)(V)
    assert np.allclose(out, loss_by_dilation(V, 0.3, 0.7))


def test_choi_form_converges_to_direct_map(rng):
    # finite squeezing adds noise that decays like exp(-2r)
    loss = make_channel("loss", ONE, eta=0.6, nbar=0.2)
    V = random_qcm(1, rng)
    errs = [np.max(np.abs(loss.to_choi(r=r)(V) - loss(V))) for r in (1.0, 3.0, 10.0)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-6


def test_loss_parameter_checks():
    with pytest.raises(ValidationError):
        make_channel("loss", ONE, eta=1.5)
    with pytest.raises(ValidationError):
        make_channel("loss", ONE, eta=0.5, nbar=-1)


def test_random_displacement():
    V = np.eye(2)
    assert np.array_equal(random_displacement(V, np.zeros((2, 2))), V)
    assert np.allclose(random_displacement(V, np.eye(2)), 2 * np.eye(2))
    with pytest.raises(ValidationError):
        random_displacement(V, -np.eye(2))


def test_local_symplectic_identity_and_check():
    ch = make_channel("local_symplectic", AB, S=np.eye(4))
    V = tmsv(0.3)
    assert np.allclose(ch(V), V)
    with pytest.raises(ValidationError):
        make_channel("local_symplectic", AB, S=2 * np.eye(4))


def test_beam_splitter_on_vacuum():
    bs = make_channel("beam_splitter", AB, theta=np.pi / 4, modes=(0, 1))
    assert np.allclose(bs(np.eye(4)), np.eye(4))


def test_beam_splitter_mixes_as_midpoint(rng):
    V, W = random_qcm(1, rng), random_qcm(1, rng)
    U, p = direct_sum(V, ONE, W, ONE)
    out = make_channel("beam_splitter", p, theta=np.pi / 4, modes=(0, 1))(U)
    idx = [0, 2, 1, 3]  # regroup as (mode 0 | mode 1)
    expected = 0.5 * np.block([[V + W, V - W], [V - W, V + W]])
    assert np.allclose(out[np.ix_(idx, idx)], expected)


def test_ancilla_and_trace_out_roundtrip():
    add = make_channel("add_ancilla", ONE, W=3 * np.eye(2), labels=["B"])
    assert add.out_partition.labels == ("A", "B")
    drop = make_channel("trace_out", add.out_partition, modes=[1])
    V = np.diag([0.5, 2.0])
    assert np.allclose(compose(add, drop)(V), V)
    with pytest.raises(ValidationError):
        make_channel("trace_out", ONE, modes=[0])


def test_choi_matrix_validation():
    with pytest.raises(ValidationError):
        GaussianChannel(np.zeros((4, 4)), 1, 1)
    with pytest.raises(ValidationError):
        GaussianChannel(np.eye(6), 1, 1)


def test_singular_pivot_on_boundary_channel():
    # pure loss with eta = 1 has an infinitely squeezed Choi state: at finite
    # squeezing the input block is invertible, so build the singular case by hand
    G = np.zeros((4, 4))
    G[np.ix_([1, 3], [1, 3])] = np.eye(2)
    ch = GaussianChannel(G + 0.0, 1, 1, allow_unphysical=True)
    with pytest.raises(SingularPivotError):
        ch(np.zeros((2, 2)))


def test_certify_local_symplectic_on_separable_probes(rng):
    p = bipartite_partition(1, 1)
    spec = cone_spec("separability", p)
    ch = make_channel("local_symplectic", p, S=random_local_symplectic(p, rng))
    probes = [random_cone_member("separability", p, rng) for _ in range(20)]
    rep = certify_free(ch, spec, probes)
    assert rep.passed and rep.verdict == "PASS" and rep.probes_checked == 20
    assert rep.schur_route_agrees


def test_certify_entangling_ancilla_fails_on_vacuum():
    # A-mode input, append a TMSV on (A, B): output is entangled across A|B
    add = make_channel("add_ancilla", ONE, W=tmsv(0.5), labels=["A", "B"])
    out_spec = cone_spec("separability", add.out_partition)
    rep = certify_free(add, out_spec, [np.eye(2)])
    assert not rep.passed and rep.verdict == "FAIL"
    assert np.allclose(rep.violating_probe, np.eye(2))
    assert not membership(add(np.eye(2)), out_spec)


def test_certify_displacement_noise_passes(rng):
    for theory in ("nonclassicality", "ppt", "steering", "separability"):
        spec = cone_spec(theory, AB)
        ch = make_channel("displacement_noise", AB, K=0.2 * np.eye(4))
        probes = [random_cone_member(theory, AB, rng) for _ in range(3)]
        assert certify_free(ch, spec, probes).passed


def test_certify_default_probes():
    p = bipartite_partition(1, 1)
    loss = make_channel("loss", p, eta=0.7)
    rep = certify_free(loss, cone_spec("steering", p))
    assert rep.passed and rep.probes_checked == 21
