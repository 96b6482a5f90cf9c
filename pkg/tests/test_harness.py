import json

import pytest

from gaussrt import ValidationError
from gaussrt.harness import SUITES, ExperimentConfig, run_suite, write_report
from gaussrt.harness.config import to_jsonable


def test_config_defaults_and_unknown_keys(tmp_path):
    cfg = ExperimentConfig()
    assert cfg.theories() == ("nonclassicality", "ppt", "steering", "separability")
    assert cfg.max_copies("ppt", 2) == 8
    assert cfg.max_copies("separability", 2) == 4
    assert cfg.max_copies("separability", 4) == 2
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"theory": "ppt", "seed": 3}))
    assert ExperimentConfig.load(path).theory == "ppt"
    with pytest.raises(ValidationError):
        ExperimentConfig.from_dict({"sedd": 3})
    with pytest.raises(ValidationError):
        ExperimentConfig(copies=0)


def test_streams_are_reproducible():
    cfg = ExperimentConfig(seed=5)
    assert cfg.rng("a", 1).normal() == cfg.rng("a", 1).normal()
    assert cfg.rng("a", 1).normal() != cfg.rng("b", 1).normal()


def test_unknown_suite():
    with pytest.raises(ValidationError):
        run_suite("nope")


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite_smoke(name, tmp_path):
    cfg = ExperimentConfig(samples=4, channels=4, copies=2)
    report = run_suite(name, cfg)
    assert report["suite"] == name
    assert report["passed"], report["failures"]
    assert set(report) >= {"suite", "config", "passed", "summary", "instances", "failures"}
    write_report(report, tmp_path / "r.json")
    json.loads((tmp_path / "r.json").read_text())


def test_reports_are_deterministic():
    cfg = ExperimentConfig(samples=3, theory="steering")
    assert to_jsonable(run_suite("monotonicity", cfg)) == to_jsonable(run_suite("monotonicity", cfg))


def test_nogo_precondition_enforced():
    cfg = ExperimentConfig(theory="ppt", source={"kind": "tmsv", "r": 0.8},
                           target={"kind": "tmsv", "r": 0.3})
    with pytest.raises(ValidationError):
        run_suite("nogo", cfg)


def test_nogo_values():
    import numpy as np

    rep = run_suite("nogo", ExperimentConfig(theory="all", copies=4, channels=5))
    by = {e["theory"]: e for e in rep["instances"]}
    assert by["ppt"]["kappa_copies"] == pytest.approx([np.exp(0.6)] * 4, abs=1e-9)
    assert by["steering"]["kappa_copies"] == pytest.approx([np.cosh(0.6)] * 4, abs=1e-9)
    assert by["ppt"]["kappa_target"] == pytest.approx(np.exp(1.6))
    assert "not" not in by["ppt"]["conclusion"].split(":")[0]


def test_tensorization_examples():
    rep = run_suite("tensorization", ExperimentConfig(samples=2))
    assert rep["max_residual"] <= 1e-6


def test_three_copies_separability_constant():
    import numpy as np

    from gaussrt import ModePartition, cone_spec, kappa
    from gaussrt.symplectic import direct_sum

    from oracles import tmsv

    p = ModePartition(("A", "B"))
    V, q = tmsv(0.3), p
    values = [kappa(V, cone_spec("separability", q)).kappa]
    for _ in range(2):
        V, q = direct_sum(V, q, tmsv(0.3), p)
        values.append(kappa(V, cone_spec("separability", q)).kappa)
    assert max(values) - min(values) <= 1e-5
    assert values[0] == pytest.approx(np.exp(0.6), abs=1e-6)
