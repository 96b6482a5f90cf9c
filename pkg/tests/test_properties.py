"""Property-based checks; hypothesis draws seeds and sizes, numpy builds the matrices."""
import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussrt import GaussianState, ModePartition, coherent_overlap, cone_spec, kappa
from gaussrt.harness.sampling import (
    bipartite_partition,
    random_local_symplectic,
    random_passive,
    random_qcm,
    random_symplectic,
)
from gaussrt.symplectic import direct_sum, symplectic_eigenvalues, validate_qcm

seeds = st.integers(0, 2**32 - 1)
party_sizes = st.tuples(st.integers(1, 3), st.integers(1, 3))
analytic = st.sampled_from(["nonclassicality", "ppt", "steering"])
fast = settings(max_examples=30, deadline=None)


@fast
@given(seeds, st.integers(1, 4))
def test_symplectic_spectrum_is_congruence_invariant(seed, n):
    rng = np.random.default_rng(seed)
    V = random_qcm(n, rng)
    S = random_symplectic(n, rng, scale=0.3)
    assert np.allclose(symplectic_eigenvalues(S @ V @ S.T), symplectic_eigenvalues(V), rtol=1e-7)


@fast
@given(seeds, st.integers(1, 4))
def test_random_qcms_are_physical(seed, n):
    assert validate_qcm(random_qcm(n, np.random.default_rng(seed))).valid


@fast
@given(seeds, party_sizes, analytic)
def test_kappa_at_least_one_and_unitarily_invariant(seed, sizes, theory):
    rng = np.random.default_rng(seed)
    p = bipartite_partition(*sizes)
    spec = cone_spec(theory, p)
    V = random_qcm(p.n, rng)
    S = random_passive(p.n, rng) if theory == "nonclassicality" else random_local_symplectic(p, rng)
    k = kappa(V, spec).kappa
    assert k >= 1.0
    assert abs(kappa(S @ V @ S.T, spec).kappa - k) <= 1e-6 * k


@fast
@given(seeds, party_sizes, party_sizes, analytic)
def test_tensorization(seed, s1, s2, theory):
    rng = np.random.default_rng(seed)
    p1, p2 = bipartite_partition(*s1), bipartite_partition(*s2)
    V, W = random_qcm(p1.n, rng), random_qcm(p2.n, rng)
    VW, p = direct_sum(V, p1, W, p2)
    k = lambda M, q: kappa(M, cone_spec(theory, q)).kappa
    assert abs(k(VW, p) - max(k(V, p1), k(W, p2))) <= 1e-6


@fast
@given(seeds, st.integers(1, 3))
def test_coherent_overlap_is_a_probability(seed, n):
    rng = np.random.default_rng(seed)
    state = GaussianState(random_qcm(n, rng), rng.normal(size=2 * n), ModePartition.single(n))
    value = coherent_overlap(state, rng.normal(size=2 * n))
    assert 0.0 <= value <= 1.0
