"""Verdict engine: suite wiring, reports, tables, failure surfacing."""

import pytest

from opuclab.config import config_from_dict
from opuclab.experiments import (
    SUITE_NAMES,
    _CHECK_NAMES,
    run_experiment,
    write_outputs,
)


def _config(**overrides):
    data = {
        "family": {"name": "bernstein_szego", "r": 0.5},
        "grid_size": 4096,
        "n_list": [4, 16],
        "experiment": "mnt",
        "seed": 3,
    }
    data.update(overrides)
    return config_from_dict(data)


def test_check_names_are_unique_and_cover_all():
    seen = []
    for suite in SUITE_NAMES:
        seen.extend(_CHECK_NAMES[suite])
    assert len(seen) == len(set(seen)) == 27
    # 'all' runs every suite once, so every name appears exactly once
    outcome = run_experiment(_config(experiment="all"), with_tables=False)
    names = [v.name for v in outcome.verdicts]
    assert sorted(names) == sorted(seen)


def test_mnt_run_passes_and_orders_verdicts():
    outcome = run_experiment(_config())
    assert not outcome.failed
    assert tuple(v.name for v in outcome.verdicts) == _CHECK_NAMES["mnt"]
    assert all(v.status == "pass" for v in outcome.verdicts)
    assert outcome.report["summary"] == {"pass": 5, "fail": 0, "skip": 0}
    assert outcome.report["family"]["kind"] == "bernstein_szego"
    assert outcome.report["schema"] == 1


def test_tables_follow_the_sweep_points():
    outcome = run_experiment(_config(test_points=[0.0, 3.1]))
    assert set(outcome.tables) == {"mnt.csv", "mnt_2.csv"}
    header = outcome.tables["mnt.csv"].splitlines()[0]
    assert header == "n,cesaro,target,lower,upper,K_n,P_n,F_n"
    assert outcome.report["suites"]["mnt"]["tables"] == ["mnt.csv", "mnt_2.csv"]


def test_without_tables_nothing_is_rendered():
    outcome = run_experiment(_config(), with_tables=False)
    assert outcome.tables == {}
    assert outcome.report["suites"]["mnt"]["tables"] == []


def test_runs_are_deterministic():
    first = run_experiment(_config(experiment="all"))
    second = run_experiment(_config(experiment="all"))
    assert first.tables == second.tables
    for a, b in zip(first.verdicts, second.verdicts):
        assert a == b
    report_a = dict(first.report)
    report_b = dict(second.report)
    report_a.pop("runtime")
    report_b.pop("runtime")
    assert report_a == report_b


def test_family_build_failure_is_a_verdict():
    # depth 129 needs K = 137 parameters resolved, far beyond grid 4096
    cfg = _config(
        family={"name": "ell2", "c": 0.5, "p": 1.0}, n_list=[4, 128]
    )
    outcome = run_experiment(cfg)
    assert outcome.failed
    assert len(outcome.verdicts) == 1
    verdict = outcome.verdicts[0]
    assert verdict.name == "family_build"
    assert verdict.status == "fail"
    assert "FamilyValidationError" in verdict.detail
    assert outcome.report["suites"] == {
        "family_build": {"verdicts": [verdict.to_json()], "tables": []}
    }
    assert outcome.report["family"] == {}


def test_geronimus_refinement_skips():
    cfg = _config(family={"name": "geronimus", "a": 0.6})
    outcome = run_experiment(cfg, with_tables=False)
    by_name = {v.name: v for v in outcome.verdicts}
    assert by_name["quadrature_refinement"].status == "skip"
    assert not outcome.failed  # skips do not fail a run


def test_write_outputs(tmp_path):
    outcome = run_experiment(_config(test_points=[0.0]))
    names = write_outputs(outcome, tmp_path)
    assert names == ["mnt.csv", "report.json"]
    body = (tmp_path / "mnt.csv").read_bytes()
    assert body == outcome.tables["mnt.csv"].encode()
    assert (tmp_path / "report.json").read_text().endswith("}\n")


def test_verdict_to_json_shape():
    outcome = run_experiment(_config(), with_tables=False)
    entry = outcome.verdicts[0].to_json()
    assert set(entry) == {"name", "status", "residual", "detail"}
