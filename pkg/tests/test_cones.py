import numpy as np
import pytest

from gaussrt import THEORIES, ModePartition, ValidationError, cone_spec, kappa, membership, upsilon
from gaussrt.cones import (
    check_slater,
    kappa_problem,
    kappa_upper_bound,
    steerability_N,
    witness_normalization,
)
from gaussrt.harness.sampling import bipartite_partition, random_cone_member, random_psd, random_qcm
from gaussrt.symplectic import direct_sum, nu_min, omega

from oracles import brute_symplectic_eigenvalues, flip_momenta, schur_by_inverse, tmsv

AB = ModePartition(("A", "B"))


def test_nonclassicality_cone_is_v_above_identity():
    spec = cone_spec("nonclassicality", ModePartition.single(2))
    assert np.array_equal(spec.C, np.eye(4))
    assert not spec.has_q
    assert membership(np.eye(4), spec)
    assert not membership(np.diag([0.9, 1, 1.2, 1]), spec)


def test_steering_constant_has_one_block():
    spec = cone_spec("steering", AB)
    expected = np.zeros((4, 4), dtype=complex)
    expected[np.ix_([1, 3], [1, 3])] = 1j * omega(1)
    assert np.allclose(spec.C, expected)


def test_ppt_constant():
    spec = cone_spec("ppt", AB)
    iOa = np.zeros((4, 4), dtype=complex)
    iOa[np.ix_([0, 2], [0, 2])] = 1j * omega(1)
    iOb = np.zeros((4, 4), dtype=complex)
    iOb[np.ix_([1, 3], [1, 3])] = 1j * omega(1)
    assert np.allclose(spec.C, iOa - iOb)


def test_separability_structure():
    spec = cone_spec("separability", AB)
    assert np.array_equal(spec.C, np.zeros((4, 4)))
    assert spec.q_dims == (2, 2)
    assert len(spec.D) == 2
    simple = cone_spec("separability_simplified", AB)
    assert simple.q_dims == (2,)


@pytest.mark.parametrize("theory", THEORIES)
def test_maps_are_linear_and_slater_holds(theory):
    spec = cone_spec(theory, bipartite_partition(2, 1))
    spec.check_linearity(np.random.default_rng(0))
    assert check_slater(spec)


def test_unknown_theory_and_single_party():
    with pytest.raises(ValidationError):
        cone_spec("magic", AB)
    with pytest.raises(ValidationError):
        cone_spec("ppt", ModePartition.single(2))


def test_closed_form_values():
    r = 0.3
    sq = np.diag([np.exp(-2 * r), np.exp(2 * r)])
    assert kappa(sq, cone_spec("nonclassicality", ModePartition.single(1))).kappa == pytest.approx(
        np.exp(0.6), abs=1e-12
    )
    V = tmsv(0.5)
    # eigensolver oracle on the flipped matrix, Schur oracle via the inverse
    kp = 1 / brute_symplectic_eigenvalues(flip_momenta(V, [1]))[0]
    kt = 1 / brute_symplectic_eigenvalues(schur_by_inverse(V, [1, 3]))[0]
    assert kp == pytest.approx(np.e) and kt == pytest.approx(np.cosh(1.0))
    assert kappa(V, cone_spec("ppt", AB)).kappa == pytest.approx(kp, abs=1e-9)
    assert kappa(V, cone_spec("steering", AB)).kappa == pytest.approx(kt, abs=1e-9)


@pytest.mark.parametrize("theory,expected", [("ppt", np.e), ("steering", np.cosh(1.0))])
def test_sdp_matches_closed_form(theory, expected):
    rep = kappa(tmsv(0.5), cone_spec(theory, AB), method="both")
    assert rep.diagnostics["agreement"] <= 1e-6
    assert rep.diagnostics["kappa_sdp"] == pytest.approx(expected, abs=1e-6)


def test_separability_of_tmsv():
    spec = cone_spec("separability", AB)
    assert not membership(tmsv(0.5), spec)
    # for the symmetric TMSV separability and PPT coincide
    assert kappa(tmsv(0.5), spec).kappa == pytest.approx(np.e, abs=1e-6)


def test_product_states_are_separable(rng):
    spec = cone_spec("separability", AB)
    for _ in range(5):
        V, _ = direct_sum(random_qcm(1, rng), ModePartition(("A",)), random_qcm(1, rng), ModePartition(("B",)))
        assert membership(V, spec)
        assert kappa(V, spec).kappa == pytest.approx(1.0, abs=1e-7)


def test_bisection_and_sdp_agree():
    r = 0.3
    sq = np.diag([np.exp(-2 * r), np.exp(2 * r)])
    spec = cone_spec("nonclassicality", ModePartition.single(1))
    b = kappa(sq, spec, method="bisect").kappa
    assert b == pytest.approx(np.exp(0.6), abs=1e-7)
    assert kappa(np.eye(2), spec, method="bisect").kappa == 1.0


def test_steerability_N():
    assert steerability_N(tmsv(0.5), AB) == pytest.approx(np.log(np.cosh(1.0)), abs=1e-12)
    assert steerability_N(np.eye(4), AB) == 0.0


def test_upper_bound(rng):
    assert kappa_upper_bound(np.eye(2)) == 1.0
    r = 0.3
    assert kappa_upper_bound(np.diag([np.exp(-2 * r), np.exp(2 * r)])) == pytest.approx(np.exp(0.6))
    for theory in ("nonclassicality", "ppt", "steering", "separability"):
        spec = cone_spec(theory, AB)
        for _ in range(5):
            V = random_qcm(2, rng)
            assert kappa_upper_bound(V, spec.reference) >= kappa(V, spec).kappa - 1e-9


def test_upsilon_witness_steering():
    spec = cone_spec("steering", AB)
    res = upsilon(tmsv(0.5), spec)
    assert res.value == pytest.approx(1 / np.cosh(1.0), abs=1e-7)
    assert res.witness_value == pytest.approx(1 / np.cosh(1.0), abs=1e-6)
    assert res.normalization == pytest.approx(1.0, abs=1e-7)
    assert res.certifies_resource


def test_ppt_witness_value():
    rep = kappa(tmsv(0.5), cone_spec("ppt", AB), witness=True)
    assert rep.diagnostics["witness_value"] == pytest.approx(np.exp(-1), abs=1e-6)
    assert np.all(np.linalg.eigvalsh(rep.W) >= -1e-9)


def test_free_state_upsilon_at_least_one():
    for theory in ("ppt", "steering", "separability"):
        res = upsilon(np.eye(4), cone_spec(theory, AB))
        assert res.value >= 1 - 1e-7
        assert not res.certifies_resource


def test_witness_normalization_identity():
    spec = cone_spec("separability", AB)
    rep = kappa(tmsv(0.4), spec, witness=True)
    assert witness_normalization(spec, rep.W, rep.Y) == pytest.approx(1.0, abs=1e-7)
    assert rep.diagnostics["adjoint_residual"] < 1e-7
    assert rep.diagnostics["duality_residual"] < 1e-6


@pytest.mark.parametrize("theory", ["nonclassicality", "ppt", "steering", "separability"])
def test_faithfulness(theory, rng):
    spec = cone_spec(theory, AB)
    for _ in range(8):
        W = random_cone_member(theory, AB, rng)
        assert kappa(W, spec).kappa == pytest.approx(1.0, abs=1e-7)
        V = random_qcm(2, rng, dmin=1.0, dmax=1.2, scale=0.8)
        k = kappa(V, spec).kappa
        assert (k > 1 + 1e-7) == (not membership(V, spec))


@pytest.mark.parametrize("theory", ["nonclassicality", "ppt", "steering", "separability"])
def test_scaling_and_upward_monotonicity(theory, rng):
    spec = cone_spec(theory, AB)
    for _ in range(5):
        V = random_qcm(2, rng, dmin=1.0, dmax=1.2, scale=0.8)
        k = kappa(V, spec).kappa
        for s in (1.0, 1.2, 3.0):
            ks = kappa(s * V, spec).kappa
            assert ks >= k / s - 1e-6
            if ks > 1 + 1e-6:
                assert ks == pytest.approx(k / s, abs=1e-6)
        W = V + random_psd(4, rng)
        assert kappa(W, spec).kappa <= k + 1e-6


def test_hierarchy(rng):
    for _ in range(10):
        V = random_qcm(2, rng, dmin=1.0, dmax=1.5, scale=0.6)
        ks = kappa(V, cone_spec("separability", AB)).kappa
        assert ks >= kappa(V, cone_spec("ppt", AB)).kappa - 1e-6
        assert ks >= kappa(V, cone_spec("steering", AB)).kappa - 1e-6


def test_shape_mismatch():
    with pytest.raises(ValidationError):
        kappa(np.eye(2), cone_spec("ppt", AB))


def test_analytic_method_unavailable_for_separability():
    with pytest.raises(ValidationError):
        kappa(np.eye(4), cone_spec("separability", AB), method="analytic")


def test_problem_is_deterministic():
    spec = cone_spec("separability", AB)
    p1, p2 = kappa_problem(tmsv(0.3), spec), kappa_problem(tmsv(0.3), spec)
    assert all(np.array_equal(a.F, b.F) for a, b in zip(p1.blocks, p2.blocks))
