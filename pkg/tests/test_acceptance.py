"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line (also collected into the
terminal summary).  Run standalone with ``python3 tests/test_acceptance.py``.
"""
import io
import json
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gaussrt import ModePartition, cone_spec, kappa  # noqa: E402
from gaussrt.cli import main  # noqa: E402
from gaussrt.harness import ExperimentConfig, run_suite  # noqa: E402

from oracles import brute_symplectic_eigenvalues, flip_momenta, schur_by_inverse, tmsv  # noqa: E402

RESULTS = []


def verdict(number, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} [{number:2d}] {title}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_01_analytic_vs_sdp():
    start = time.perf_counter()
    rep = run_suite("agreement", ExperimentConfig(samples=100))
    elapsed = time.perf_counter() - start
    sizes = {tuple(x["sizes"]) for x in rep["instances"]}
    theories = {x["theory"] for x in rep["instances"]}
    ok = (rep["passed"] and rep["max_difference"] <= 1e-6 and elapsed < 60
          and len(rep["instances"]) == 300 and theories == {"nonclassicality", "ppt", "steering"}
          and all(1 <= a <= 3 and 1 <= b <= 3 for a, b in sizes))
    verdict(1, "analytic vs SDP", ok,
            f"max |diff| {rep['max_difference']:.2e} on 100 QCMs x 3 theories in {elapsed:.1f} s")


def test_02_benchmark_values():
    p = ModePartition(("A", "B"))
    worst = 0.0
    for r in (0.1, 0.5, 1.0):
        V = tmsv(r)
        # oracles: dense eigenproblem on the flipped CM, Schur block via the inverse
        kp_oracle = 1 / brute_symplectic_eigenvalues(flip_momenta(V, [1]))[0]
        kt_oracle = 1 / brute_symplectic_eigenvalues(schur_by_inverse(V, [1, 3]))[0]
        assert abs(kp_oracle - np.exp(2 * r)) < 1e-9 and abs(kt_oracle - np.cosh(2 * r)) < 1e-9
        for theory, target in (("ppt", np.exp(2 * r)), ("steering", np.cosh(2 * r))):
            for method in ("analytic", "sdp"):
                worst = max(worst, abs(kappa(V, cone_spec(theory, p), method=method).kappa - target))
    verdict(2, "benchmark values", worst <= 1e-6,
            f"kappa_P = e^(2r), kappa_T = cosh 2r for r in 0.1, 0.5, 1.0; max error {worst:.2e}")


def test_03_tensorization():
    rep = run_suite("tensorization", ExperimentConfig())
    theories = {x["theory"] for x in rep["instances"]}
    sep_modes = max(len(x["partition"]) for x in rep["instances"] if x["theory"] == "separability")
    ok = (rep["passed"] and len(rep["instances"]) == 40 and sep_modes == 6
          and theories == {"nonclassicality", "ppt", "steering", "separability"})
    verdict(3, "tensorization", ok,
            f"{len(rep['instances'])} instances, separability up to {sep_modes} modes, "
            f"max residual {rep['max_residual']:.2e}")


def test_04_monotonicity():
    rep = run_suite("monotonicity", ExperimentConfig(samples=100))
    counts = {}
    for x in rep["instances"]:
        counts[x["theory"]] = counts.get(x["theory"], 0) + 1
    ok = rep["passed"] and len(rep["failures"]) == 0 and all(c == 100 for c in counts.values())
    verdict(4, "monotonicity", ok,
            f"{len(rep['failures'])} violations in {len(rep['instances'])} pairs "
            f"(largest excess {rep['max_excess']:.2e})")


def test_05_nogo():
    out = io.StringIO()
    code = main(["harness", "--suite", "nogo", "--json"], out=out)
    rep = json.loads(out.getvalue())
    caps = {e["theory"]: max(e["copies"]) for e in rep["instances"]}
    drift = max(e["drift"] for e in rep["instances"])
    ok = (code == 0 and rep["passed"] and drift <= 1e-6 and caps["separability"] >= 4
          and all(caps[t] >= 8 for t in ("nonclassicality", "ppt", "steering")))
    verdict(5, "no-go mechanism", ok,
            f"exit {code}, copies {caps}, max drift {drift:.2e}")


def test_06_strong_duality():
    rep = run_suite("duality", ExperimentConfig(samples=12))
    norm = max(x["normalization_error"] for x in rep["instances"])
    ok = rep["passed"] and rep["max_residual"] <= 1e-6 and norm <= 1e-7
    verdict(6, "strong duality", ok,
            f"{len(rep['instances'])} instances over 5 cones, max |kappa - max(1, 1/upsilon)| "
            f"{rep['max_residual']:.2e}, max normalization error {norm:.2e}")


def test_07_hierarchy():
    rep = run_suite("hierarchy", ExperimentConfig(samples=50))
    slack = min(min(x["S_minus_P"], x["S_minus_T"]) for x in rep["instances"])
    ok = rep["passed"] and len(rep["instances"]) == 50
    verdict(7, "hierarchy", ok,
            f"50 two-mode QCMs, min(kappa_S - kappa_P, kappa_S - kappa_T) = {slack:.2e}")


def test_08_williamson():
    rep = run_suite("williamson", ExperimentConfig(samples=200))
    nu = max(x["nu_min_difference"] for x in rep["instances"])
    ok = rep["passed"] and rep["max_residual"] <= 1e-9 and nu <= 1e-8
    verdict(8, "Williamson", ok,
            f"200 QCMs, max residual {rep['max_residual']:.2e}, max nu_min difference {nu:.2e}")


def test_09_fock_oracle():
    rep = run_suite("fock", ExperimentConfig())
    err = rep["max_errors"]["s-u"]
    ok = rep["passed"] and err <= 1e-6 and rep["resolved_sign"] == "s-u"
    verdict(9, "coherent overlap vs Fock", ok,
            f"{len(rep['instances'])} single-mode states, max error {err:.2e} with w = s - u "
            f"(w = s + u off by {rep['max_errors']['s+u']:.2e})")


def test_10_convexity():
    rep = run_suite("convexity", ExperimentConfig(samples=50))
    counts = {}
    for x in rep["instances"]:
        counts[x["theory"]] = counts.get(x["theory"], 0) + 1
    ok = rep["passed"] and all(c == 50 for c in counts.values()) and len(counts) == 4
    verdict(10, "convexity", ok,
            f"{len(rep['instances']) - len(rep['failures'])}/{len(rep['instances'])} midpoints are members")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
