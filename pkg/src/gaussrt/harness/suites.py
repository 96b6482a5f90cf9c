"""Verification suites.  Each returns a JSON-ready report dictionary.

A report has ``suite``, ``config``, ``passed``, ``summary``, ``instances``
and ``failures``.  Reports contain no timings, so equal seeds give equal
reports.
"""
import numpy as np

from ..channels import GaussianChannel, compose, make_channel
from ..cones import cone_spec, kappa, membership
from ..errors import ValidationError
from ..states import coherent_overlap, make_state, GaussianState
from ..symplectic import (
    ModePartition,
    direct_sum,
    is_symplectic,
    nu_min,
    nu_min_bisect,
    symplectic_eigenvalues,
    williamson,
)
from .config import ANALYTIC_THEORIES, MAIN_THEORIES, SDP_THEORIES, ExperimentConfig
from .fock import FockOracle
from .sampling import (
    bipartite_partition,
    random_cone_member,
    random_free_channel,
    random_local_symplectic,
    random_qcm,
)

__all__ = [
    "SUITES",
    "run_suite",
    "run_tensorization",
    "run_nogo",
    "run_monotonicity",
    "run_hierarchy",
    "run_convexity",
    "run_duality",
    "run_agreement",
    "run_williamson",
    "run_fock",
]

ALL_THEORIES = MAIN_THEORIES + ("separability_simplified",)

# squeezing-heavy draws: most samples are resourceful in every theory
RESOURCE_DRAW = {"dmin": 1.0, "dmax": 1.5, "scale": 0.6}


def _k(V, theory, partition):
    return kappa(V, cone_spec(theory, partition)).kappa


def _report(suite, config, instances, failures, summary, **extra):
    out = {
        "suite": suite,
        "config": config.to_dict(),
        "passed": not failures,
        "summary": summary,
        "checks": len(instances),
        "failures": failures,
        "instances": instances,
    }
    out.update(extra)
    return out


def _state_cm(desc):
    desc = dict(desc)
    kind = desc.pop("kind")
    st = make_state(kind, **desc)
    return st.V, st.partition


def _copies(V, p, n):
    out, q = V, p
    for _ in range(n - 1):
        out, q = direct_sum(out, q, V, p)
    return out, q


# -- tensorization -----------------------------------------------------------

_TMSV_PAIRS = [(0.5, 0.5), (0.3, 0.8), (0.1, 1.0), (0.7, 0.2)]
_SIZES = [((1, 1), (1, 1)), ((1, 1), (2, 1)), ((2, 1), (1, 2)), ((1, 1), (2, 2)), ((2, 2), (1, 1))]


def run_tensorization(config=None):
    """``kappa(V (+) W) = max(kappa(V), kappa(W))`` over a grid of pairs."""
    config = config or ExperimentConfig()
    per_theory = config.samples or 10
    instances, failures = [], []
    for theory in config.theories():
        rng = config.rng("tensorization", theory)
        for i in range(per_theory):
            if i % 5 == 0:
                r1, r2 = _TMSV_PAIRS[(i // 5) % len(_TMSV_PAIRS)]
                V, pv = _state_cm({"kind": "tmsv", "r": r1})
                W, pw = _state_cm({"kind": "tmsv", "r": r2})
                family = f"tmsv({r1}) + tmsv({r2})"
            else:
                sv, sw = _SIZES[i % len(_SIZES)]
                pv, pw = bipartite_partition(*sv), bipartite_partition(*sw)
                W = random_qcm(pw.n, rng, **RESOURCE_DRAW)
                if i % 5 == 1:
                    V = random_cone_member(theory, pv, rng)
                    family = "free + random"
                else:
                    V = random_qcm(pv.n, rng, **RESOURCE_DRAW)
                    family = "random + random"
            VW, pvw = direct_sum(V, pv, W, pw)
            kv, kw, kvw = _k(V, theory, pv), _k(W, theory, pw), _k(VW, theory, pvw)
            resid = abs(kvw - max(kv, kw))
            inst = {
                "theory": theory,
                "family": family,
                "partition": "".join(pvw.labels),
                "kappa_V": kv,
                "kappa_W": kw,
                "kappa_sum": kvw,
                "residual": resid,
            }
            instances.append(inst)
            if resid > config.tol:
                failures.append(dict(inst, V=V, W=W))
    worst = max((x["residual"] for x in instances), default=0.0)
    summary = (
        f"tensorization: {len(instances) - len(failures)}/{len(instances)} instances within "
        f"{config.tol:.1e} (largest residual {worst:.3e})"
    )
    return _report("tensorization", config, instances, failures, summary, max_residual=worst)


# -- no-go ---------------------------------------------------------------------


def run_nogo(config=None):
    """Exhibit the no-go mechanism: copies do not raise kappa, free maps do not either.

    For every theory this checks ``kappa(W) > kappa(V)``, computes
    ``kappa(V^{(+)n})`` for ``n`` up to the copy cap and applies sampled free
    channels to ``V (+) V``.  The conclusion is phrased from the computed
    values; it is evidence for the mechanism, not a proof over all sequences.
    """
    config = config or ExperimentConfig()
    V, pv = _state_cm(config.source)
    W, pw = _state_cm(config.target)
    instances, failures, theories = [], [], {}
    for theory in config.theories():
        kv, kw = _k(V, theory, pv), _k(W, theory, pw)
        if not kw > kv + config.tol:
            raise ValidationError(
                f"no-go precondition fails for {theory}: kappa(target) = {kw:.9g} "
                f"is not above kappa(source) = {kv:.9g}"
            )
        n_max = config.max_copies(theory, pv.n)
        ks = []
        for n in range(1, n_max + 1):
            Vn, pn = _copies(V, pv, n)
            ks.append(_k(Vn, theory, pn))
        drift = max(abs(k - kv) for k in ks)

        rng = config.rng("nogo", theory)
        count = config.channels or (100 if theory in ANALYTIC_THEORIES else 20)
        V2, p2 = _copies(V, pv, 2)
        outs = []
        for _ in range(count):
            ch = random_free_channel(theory, p2, rng)
            outs.append(_k(ch(V2), theory, ch.out_partition))
        worst_out = max(outs) if outs else kv

        ok = drift <= config.tol and worst_out <= kv + config.tol
        conclusion = (
            f"kappa(V^n) stays at {kv:.9g} for n = 1..{n_max} (drift {drift:.2e}); "
            f"{count} sampled free channels on two copies give at most {worst_out:.9g}; "
            f"the target needs {kw:.9g}, so none of the tested operations reaches it"
            if ok else
            f"mechanism NOT observed: drift {drift:.2e}, largest channel output {worst_out:.9g} "
            f"vs kappa(V) = {kv:.9g}"
        )
        entry = {
            "theory": theory,
            "kappa_source": kv,
            "kappa_target": kw,
            "copies": list(range(1, n_max + 1)),
            "kappa_copies": ks,
            "drift": drift,
            "channels": count,
            "max_channel_output": worst_out,
            "passed": ok,
            "conclusion": conclusion,
        }
        theories[theory] = entry
        instances.append(entry)
        if not ok:
            failures.append(entry)
    summary = "; ".join(f"{t}: {e['conclusion']}" for t, e in theories.items())
    return _report("nogo", config, instances, failures, summary)


# -- monotonicity --------------------------------------------------------------


def _choi_local_map(partition, rng):
    """A local map in Choi form: local symplectics followed by local loss."""
    S = make_channel("local_symplectic", partition, S=random_local_symplectic(partition, rng))
    loss = make_channel("loss", partition, eta=float(rng.uniform(0.3, 1.0)))
    return compose(S, loss).to_choi(float(rng.uniform(1.0, 3.0)))


def run_monotonicity(config=None):
    """``kappa(Lambda(V)) <= kappa(V) + tol`` for sampled free channels."""
    config = config or ExperimentConfig()
    instances, failures = [], []
    for theory in config.theories():
        rng = config.rng("monotonicity", theory)
        samples = config.samples or 100
        sizes = [(1, 1), (2, 1)] if theory in SDP_THEORIES else [(1, 1), (1, 2), (2, 1), (2, 2)]
        for i in range(samples):
            p = bipartite_partition(*sizes[i % len(sizes)])
            V = random_qcm(p.n, rng, **RESOURCE_DRAW)
            if theory in ("ppt", "separability") and i % 4 == 3:
                ch = _choi_local_map(p, rng)
                kind = "choi(local)"
            else:
                ch = random_free_channel(theory, p, rng)
                kind = "direct"
            out = ch(V)
            k_in, k_out = _k(V, theory, p), _k(out, theory, ch.out_partition)
            inst = {
                "theory": theory,
                "channel": kind,
                "modes_in": p.n,
                "modes_out": ch.out_partition.n,
                "kappa_in": k_in,
                "kappa_out": k_out,
                "excess": k_out - k_in,
            }
            instances.append(inst)
            if k_out > k_in + config.tol:
                failures.append(dict(inst, V=V))
    worst = max((x["excess"] for x in instances), default=0.0)
    summary = (
        f"monotonicity: {len(failures)} violations in {len(instances)} (channel, state) pairs "
        f"(largest excess {worst:.3e})"
    )
    return _report("monotonicity", config, instances, failures, summary, max_excess=worst)


# -- hierarchy and convexity ------------------------------------------------------


def run_hierarchy(config=None):
    """``kappa_S >= kappa_P`` and ``kappa_S >= kappa_T``; the two separability
    formulations must agree."""
    config = config or ExperimentConfig()
    rng = config.rng("hierarchy")
    p = bipartite_partition(1, 1)
    instances, failures = [], []
    for _ in range(config.samples or 50):
        V = random_qcm(2, rng, **RESOURCE_DRAW)
        ks = {t: _k(V, t, p) for t in ("separability", "separability_simplified", "ppt", "steering")}
        inst = {
            "kappa": ks,
            "S_minus_P": ks["separability"] - ks["ppt"],
            "S_minus_T": ks["separability"] - ks["steering"],
            "S_vs_simplified": abs(ks["separability"] - ks["separability_simplified"]),
        }
        instances.append(inst)
        if (inst["S_minus_P"] < -config.tol or inst["S_minus_T"] < -config.tol
                or inst["S_vs_simplified"] > config.tol):
            failures.append(dict(inst, V=V))
    summary = f"hierarchy: {len(failures)} violations in {len(instances)} two-mode states"
    return _report("hierarchy", config, instances, failures, summary)


def run_convexity(config=None):
    """Midpoints of pairs of cone members are members."""
    config = config or ExperimentConfig()
    instances, failures = [], []
    for theory in config.theories():
        rng = config.rng("convexity", theory)
        sizes = [(1, 1), (2, 1)] if theory in SDP_THEORIES else [(1, 1), (2, 1), (2, 2)]
        for i in range(config.samples or 50):
            p = bipartite_partition(*sizes[i % len(sizes)])
            boundary = i % 2 == 0
            V1 = random_cone_member(theory, p, rng, boundary=boundary)
            V2 = random_cone_member(theory, p, rng, boundary=boundary)
            ok = membership(0.5 * (V1 + V2), cone_spec(theory, p))
            inst = {"theory": theory, "modes": p.n, "boundary_pair": boundary, "member": ok}
            instances.append(inst)
            if not ok:
                failures.append(dict(inst, V1=V1, V2=V2))
    summary = f"convexity: {len(instances) - len(failures)}/{len(instances)} midpoints are members"
    return _report("convexity", config, instances, failures, summary)


# -- duality and analytic agreement ----------------------------------------------


def run_duality(config=None, normalization_tol=1e-7):
    """Strong duality ``kappa = max(1, 1/upsilon)`` and witness identities."""
    config = config or ExperimentConfig()
    instances, failures = [], []
    theories = ALL_THEORIES if config.theory == "all" else (config.theory,)
    for theory in theories:
        rng = config.rng("duality", theory)
        sizes = [(1, 1), (2, 1), (1, 2)]
        for i in range(config.samples or 10):
            p = bipartite_partition(*sizes[i % len(sizes)])
            V = random_qcm(p.n, rng, **RESOURCE_DRAW)
            spec = cone_spec(theory, p)
            rep = kappa(V, spec, method="sdp", witness=True)
            d = rep.diagnostics
            inst = {
                "theory": theory,
                "modes": p.n,
                "kappa": rep.kappa,
                "upsilon": d["upsilon_sdp"],
                "duality_residual": d["duality_residual"],
                "normalization_error": abs(d["witness_normalization"] - 1.0),
                "adjoint_residual": d["adjoint_residual"],
                "witness_value": d["witness_value"],
                "slater": rep.strong_duality,
            }
            instances.append(inst)
            if (inst["duality_residual"] > config.tol
                    or inst["normalization_error"] > normalization_tol
                    or inst["adjoint_residual"] > normalization_tol
                    or inst["slater"] is False):
                failures.append(dict(inst, V=V))
    worst = max((x["duality_residual"] for x in instances), default=0.0)
    summary = (
        f"duality: {len(instances) - len(failures)}/{len(instances)} instances with "
        f"|kappa - max(1, 1/upsilon)| <= {config.tol:.1e} (largest {worst:.3e})"
    )
    return _report("duality", config, instances, failures, summary, max_residual=worst)


def run_agreement(config=None):
    """Closed-form kappa against the SDP for the analytic theories."""
    config = config or ExperimentConfig()
    rng = config.rng("agreement")
    theories = ANALYTIC_THEORIES if config.theory == "all" else (config.theory,)
    instances, failures = [], []
    for _ in range(config.samples or 100):
        na, nb = (int(x) for x in rng.integers(1, 4, size=2))
        p = bipartite_partition(na, nb)
        V = random_qcm(p.n, rng)
        for theory in theories:
            rep = kappa(V, cone_spec(theory, p), method="both")
            diff = rep.diagnostics["agreement"]
            inst = {"theory": theory, "sizes": [na, nb], "kappa": rep.kappa, "difference": diff}
            instances.append(inst)
            if diff > config.tol:
                failures.append(dict(inst, V=V))
    worst = max((x["difference"] for x in instances), default=0.0)
    summary = f"analytic vs SDP: largest difference {worst:.3e} over {len(instances)} evaluations"
    return _report("agreement", config, instances, failures, summary, max_difference=worst)


# -- symplectic numerics ------------------------------------------------------------


def run_williamson(config=None, residual_tol=1e-9, nu_tol=1e-8):
    """Williamson residuals and bisection-vs-eigenvalue ``nu_min``."""
    config = config or ExperimentConfig()
    rng = config.rng("williamson")
    instances, failures = [], []
    for _ in range(config.samples or 200):
        n = int(rng.integers(1, 5))
        V = random_qcm(n, rng)
        S, d = williamson(V)
        scale = max(1.0, float(np.linalg.norm(V, 2)))
        resid = float(np.max(np.abs(S @ V @ S.T - np.diag(np.r_[d, d])))) / scale
        eig = nu_min(V)
        bis = nu_min_bisect(V)
        inst = {
            "modes": n,
            "williamson_residual": resid,
            "symplectic": bool(is_symplectic(S)),
            "eigen_agreement": float(np.max(np.abs(np.sort(d) - symplectic_eigenvalues(V)))),
            "nu_min_difference": abs(eig - bis),
        }
        instances.append(inst)
        if resid > residual_tol or not inst["symplectic"] or inst["nu_min_difference"] > nu_tol:
            failures.append(dict(inst, V=V))
    worst = max((x["williamson_residual"] for x in instances), default=0.0)
    summary = f"williamson: largest residual {worst:.3e} over {len(instances)} covariance matrices"
    return _report("williamson", config, instances, failures, summary, max_residual=worst)


def fock_corpus(rng, extra=12):
    """Single-mode corpus ``(name, V, s, u)`` with ``||V|| <= 10`` and ``|u| <= 3``."""
    from ..states import squeezed_cm

    items = [
        ("vacuum", np.eye(2), [0, 0], [0, 0]),
        ("thermal(1)", 3 * np.eye(2), [0, 0], [0, 0]),
        ("thermal(0.5) shifted", 2 * np.eye(2), [0.3, -0.2], [1.0, 0.5]),
        ("coherent", np.eye(2), [1.2, -0.7], [1.2, -0.7]),
        ("coherent mismatch", np.eye(2), [0.5, 0.5], [-1.0, 2.0]),
        ("squeezed(0.5)", squeezed_cm(0.5), [0, 0], [0.8, 0.1]),
        ("squeezed(1.1, phi=0.7) displaced", squeezed_cm(1.1, 0.7), [0.4, -0.9], [-1.5, 0.6]),
        ("thermal(4.5)", 10 * np.eye(2), [0, 0], [2.0, -2.0]),
    ]
    while extra > 0:
        n_th = rng.uniform(1.0, 3.0)
        r = rng.uniform(0.0, 0.8)
        V = n_th * squeezed_cm(r, rng.uniform(0, 2 * np.pi))
        if np.linalg.norm(V, 2) > 10:
            continue
        u = rng.uniform(-1, 1, size=2)
        u *= rng.uniform(0, 3) / max(np.linalg.norm(u), 1e-12)
        s = rng.uniform(-1.5, 1.5, size=2)
        items.append((f"random #{len(items)}", V, s, u))
        extra -= 1
    return items


def run_fock(config=None, cutoff=60):
    """Gaussian coherent-overlap formula against the truncated-Fock oracle.

    Both sign candidates are evaluated: ``w = s - u`` (coherent states
    labelled by their first moment) and ``w = s + u``.  The candidate with
    the larger discrepancy is reported as rejected.
    """
    config = config or ExperimentConfig()
    rng = config.rng("fock")
    oracle = FockOracle(cutoff=cutoff)
    instances, failures = [], []
    worst = {"s-u": 0.0, "s+u": 0.0}
    for name, V, s, u in fock_corpus(rng, extra=config.samples or 12):
        st = GaussianState(np.asarray(V, dtype=float), np.asarray(s, dtype=float))
        ref = oracle.overlap(st.V, st.s, u, convention="mean")
        minus = coherent_overlap(st, u, convention="mean")
        plus = coherent_overlap(st, u, convention="weyl")
        weyl_ref = oracle.overlap(st.V, st.s, u, convention="weyl")
        inst = {
            "name": name,
            "oracle": ref.value,
            "truncation_bound": ref.truncation_bound,
            "formula_s_minus_u": minus,
            "formula_s_plus_u": plus,
            "error_s_minus_u": abs(minus - ref.value),
            "error_s_plus_u": abs(plus - ref.value),
            "weyl_labelled_error": abs(plus - weyl_ref.value),
        }
        worst["s-u"] = max(worst["s-u"], inst["error_s_minus_u"])
        worst["s+u"] = max(worst["s+u"], inst["error_s_plus_u"])
        instances.append(inst)
        if (inst["error_s_minus_u"] > config.tol or inst["weyl_labelled_error"] > config.tol
                or ref.truncation_bound > config.tol):
            failures.append(inst)
    winner = min(worst, key=worst.get)
    loser = max(worst, key=worst.get)
    if winner != "s-u" or worst[loser] <= 1e3 * config.tol:
        failures.append({"sign_resolution": worst})
    summary = (
        f"fock oracle: w = {winner} agrees within {worst[winner]:.2e}; "
        f"w = {loser} rejected (discrepancy {worst[loser]:.2e}) for coherent states "
        f"labelled by their first moment"
    )
    return _report("fock", config, instances, failures, summary,
                   resolved_sign=winner, rejected_sign=loser, max_errors=worst)


SUITES = {
    "tensorization": run_tensorization,
    "nogo": run_nogo,
    "monotonicity": run_monotonicity,
    "hierarchy": run_hierarchy,
    "convexity": run_convexity,
    "duality": run_duality,
    "agreement": run_agreement,
    "williamson": run_williamson,
    "fock": run_fock,
}


def run_suite(name, config=None):
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValidationError(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from None
    return fn(config or ExperimentConfig())
