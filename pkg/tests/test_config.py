"""Config validation: every rejection path, the echo, file loading."""

import json

import pytest

from opuclab.config import (
    EXPERIMENTS,
    ExperimentConfig,
    config_from_dict,
    load_config,
)
from opuclab.errors import ConfigError

GOOD = {
    "family": {"name": "bernstein_szego", "r": 0.5},
    "grid_size": 4096,
    "n_list": [4, 16],
    "experiment": "mnt",
}


def _variant(**overrides):
    data = {k: (dict(v) if isinstance(v, dict) else v) for k, v in GOOD.items()}
    data.update(overrides)
    return data


def test_minimal_config_accepts_defaults():
    cfg = config_from_dict(_variant())
    assert cfg.grid_size == 4096
    assert cfg.n_list == (4, 16)
    assert cfg.test_points is None
    assert cfg.output_path == "out"
    assert cfg.delta_grid_size == 64
    assert cfg.seed == 0


@pytest.mark.parametrize(
    "overrides",
    [
        {"grid_size": 255},
        {"grid_size": 3000},
        {"grid_size": 128},
        {"grid_size": 4096.0},
        {"n_list": []},
        {"n_list": [4, 4]},
        {"n_list": [16, 4]},
        {"n_list": [0, 4]},
        {"n_list": [4.5]},
        {"n_list": [True]},
        {"n_list": [4, 512]},  # exceeds grid_size/16
        {"experiment": "spectral"},
        {"test_points": []},
        {"test_points": ["north"]},
        {"output_path": ""},
        {"delta_grid_size": 1},
        {"delta_grid_size": 64.0},
        {"seed": "seven"},
        {"seed": True},
        {"family": {"name": "bernstein_szego", "r": 1.0}},
        {"family": {"name": "bernstein_szego"}},
        {"family": {"name": "bernstein_szego", "r": 0.5, "q": 1}},
        {"family": {"name": "geronimus", "a": 0.0}},
        {"family": {"name": "ell2", "c": 0.5, "p": 0.0}},
        {"family": {"name": "ell2", "c": 1.0, "p": 1.0}},
        {"family": {"name": "vortex"}},
        {"family": "lebesgue"},
        {"extra_key": 1},
    ],
)
def test_rejections(overrides):
    with pytest.raises(ConfigError):
        config_from_dict(_variant(**overrides))


@pytest.mark.parametrize("missing", ["family", "n_list", "experiment"])
def test_required_keys(missing):
    data = _variant()
    del data[missing]
    with pytest.raises(ConfigError, match=missing):
        config_from_dict(data)


def test_every_experiment_name_accepted():
    for name in EXPERIMENTS:
        cfg = config_from_dict(_variant(experiment=name))
        assert cfg.experiment == name


def test_mixed_family_validation():
    good = {
        "name": "mixed",
        "base": {"name": "bernstein_szego", "r": 0.3},
        "atoms": [{"angle": 2.0, "mass": 0.2}],
    }
    cfg = config_from_dict(_variant(family=good))
    assert cfg.family["atoms"][0]["mass"] == 0.2

    bad = [
        {"name": "mixed", "base": {"name": "geronimus", "a": 0.5},
         "atoms": [{"angle": 2.0, "mass": 0.2}]},
        {"name": "mixed", "base": {"name": "lebesgue"}, "atoms": []},
        {"name": "mixed", "base": {"name": "lebesgue"},
         "atoms": [{"angle": 7.0, "mass": 0.2}]},
        {"name": "mixed", "base": {"name": "lebesgue"},
         "atoms": [{"angle": 2.0, "mass": 0.0}]},
        {"name": "mixed", "base": {"name": "lebesgue"},
         "atoms": [{"angle": 1.0, "mass": 0.6}, {"angle": 2.0, "mass": 0.6}]},
        {"name": "mixed", "base": {"name": "lebesgue"},
         "atoms": [{"angle": 2.0, "mass": 0.2, "label": "x"}]},
    ]
    for family in bad:
        with pytest.raises(ConfigError):
            config_from_dict(_variant(family=family))


def test_echo_roundtrips_through_the_validator():
    cfg = config_from_dict(
        _variant(test_points=[0.0, 3.1], seed=7, output_path="results")
    )
    echoed = cfg.echo()
    again = config_from_dict(echoed)
    assert again == cfg
    json.dumps(echoed)  # must already be JSON-ready


def test_constructor_accepts_keyword_form():
    cfg = ExperimentConfig(
        family={"name": "lebesgue"}, n_list=(4,), experiment="all"
    )
    assert cfg.family == {"name": "lebesgue"}


def test_load_config(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(GOOD), encoding="utf-8")
    cfg = load_config(str(path))
    assert cfg.experiment == "mnt"

    with pytest.raises(ConfigError, match="cannot read"):
        load_config(str(tmp_path / "missing.json"))

    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigError, match="not valid JSON"):
        load_config(str(bad))
