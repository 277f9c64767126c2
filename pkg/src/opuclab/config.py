"""Experiment configuration: JSON loading, validation, report echo.

A config file is a single JSON object::

    {
      "family": {"name": "bernstein_szego", "r": 0.5},
      "grid_size": 4096,
      "n_list": [16, 64, 256],
      "test_points": [0.0, 3.141592653589793],
      "experiment": "mnt",
      "output_path": "out",
      "delta_grid_size": 64,
      "seed": 7
    }

``family`` uses the same dictionary shape as :func:`families.build_family`;
``test_points`` are boundary angles and may be omitted (``null``), in which
case the family's certified angles are used.  Every field is validated at
construction time so that a bad config fails with ConfigError before any
computation starts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Tuple

from .errors import ConfigError

EXPERIMENTS = (
    "mnt",
    "entropy",
    "schur_identities",
    "summability",
    "scattering",
    "all",
)

_CONFIG_KEYS = {
    "family",
    "grid_size",
    "n_list",
    "test_points",
    "experiment",
    "output_path",
    "delta_grid_size",
    "seed",
}


def _number(value, label: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{label} must be a number, got {value!r}")
    return float(value)


def _expect_keys(spec: dict, allowed: Tuple[str, ...], label: str) -> None:
    extra = set(spec) - set(allowed)
    if extra:
        raise ConfigError(f"unexpected keys in {label}: {sorted(extra)}")
    missing = set(allowed) - set(spec)
    if missing:
        raise ConfigError(f"missing keys in {label}: {sorted(missing)}")


def _validate_base(spec: dict, label: str) -> dict:
    """Validate an atom-free family spec (also the base of a mixed family)."""
    if not isinstance(spec, dict):
        raise ConfigError(f"{label} must be an object with a 'name' key")
    spec = dict(spec)
    name = spec.pop("name", None)
    if name == "lebesgue":
        _expect_keys(spec, (), label)
    elif name == "bernstein_szego":
        _expect_keys(spec, ("r",), label)
        r = _number(spec["r"], f"{label}.r")
        if not 0.0 <= r < 1.0:
            raise ConfigError(f"{label}.r = {r!r} outside [0, 1)")
        spec["r"] = r
    elif name == "geronimus":
        _expect_keys(spec, ("a",), label)
        a = _number(spec["a"], f"{label}.a")
        if not 0.0 < a < 1.0:
            raise ConfigError(f"{label}.a = {a!r} outside (0, 1)")
        spec["a"] = a
    elif name == "ell2":
        _expect_keys(spec, ("c", "p"), label)
        c = _number(spec["c"], f"{label}.c")
        p = _number(spec["p"], f"{label}.p")
        if not 0.0 <= c < 1.0:
            raise ConfigError(f"{label}.c = {c!r} outside [0, 1)")
        if p <= 0.0:
            raise ConfigError(f"{label}.p = {p!r} must be positive")
        spec["c"] = c
        spec["p"] = p
    else:
        raise ConfigError(f"unknown family name {name!r} in {label}")
    return dict({"name": name}, **spec)


def _validate_family(family) -> dict:
    if isinstance(family, dict) and family.get("name") == "mixed":
        spec = dict(family)
        spec.pop("name")
        _expect_keys(spec, ("base", "atoms"), "family")
        base = _validate_base(spec["base"], "family.base")
        if base["name"] not in ("lebesgue", "bernstein_szego"):
            raise ConfigError(
                f"mixed base must be lebesgue or bernstein_szego,"
                f" got {base['name']!r}"
            )
        atoms_in = spec["atoms"]
        if not isinstance(atoms_in, (list, tuple)) or not atoms_in:
            raise ConfigError("family.atoms must be a nonempty list")
        atoms = []
        for k, atom in enumerate(atoms_in):
            if not isinstance(atom, dict):
                raise ConfigError(f"family.atoms[{k}] must be an object")
            _expect_keys(dict(atom), ("angle", "mass"), f"family.atoms[{k}]")
            angle = _number(atom["angle"], f"family.atoms[{k}].angle")
            mass = _number(atom["mass"], f"family.atoms[{k}].mass")
            if not 0.0 <= angle < 6.283185307179587:
                raise ConfigError(
                    f"family.atoms[{k}].angle = {angle!r} outside [0, 2*pi)"
                )
            if mass <= 0.0:
                raise ConfigError(
                    f"family.atoms[{k}].mass = {mass!r} must be positive"
                )
            atoms.append({"angle": angle, "mass": mass})
        total = sum(a["mass"] for a in atoms)
        if total >= 1.0:
            raise ConfigError(f"atom masses sum to {total!r}, need < 1")
        return {"name": "mixed", "base": base, "atoms": atoms}
    return _validate_base(family, "family")


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated description of one experiment run."""

    family: dict
    n_list: Tuple[int, ...]
    experiment: str
    grid_size: int = 4096
    test_points: Optional[Tuple[float, ...]] = None
    output_path: str = "out"
    delta_grid_size: int = 64
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", _validate_family(self.family))

        n = self.grid_size
        if not isinstance(n, int) or n < 256 or n & (n - 1) != 0:
            raise ConfigError(
                f"grid_size = {n!r} must be a power of two >= 256"
            )

        n_list = tuple(self.n_list)
        if not n_list:
            raise ConfigError("n_list must be nonempty")
        for value in n_list:
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"n_list entry {value!r} is not an integer")
            if value < 1:
                raise ConfigError(f"n_list entry {value!r} must be >= 1")
        if any(b <= a for a, b in zip(n_list, n_list[1:])):
            raise ConfigError(f"n_list {n_list!r} must be strictly increasing")
        if n_list[-1] > n // 16:
            raise ConfigError(
                f"max n_list entry {n_list[-1]} exceeds grid_size/16 = "
                f"{n // 16}; raise grid_size so order-n quantities stay "
                "clear of the quadrature aliasing band"
            )
        object.__setattr__(self, "n_list", n_list)

        if self.experiment not in EXPERIMENTS:
            raise ConfigError(
                f"experiment = {self.experiment!r}; choose from {EXPERIMENTS}"
            )

        if self.test_points is not None:
            points = tuple(
                _number(t, "test_points entry") for t in self.test_points
            )
            if not points:
                raise ConfigError("test_points, when given, must be nonempty")
            object.__setattr__(self, "test_points", points)

        if not isinstance(self.output_path, str) or not self.output_path:
            raise ConfigError("output_path must be a nonempty string")

        if not isinstance(self.delta_grid_size, int) or self.delta_grid_size < 2:
            raise ConfigError(
                f"delta_grid_size = {self.delta_grid_size!r} must be >= 2"
            )

        if isinstance(self.seed, bool) or not isinstance(self.seed, int):
            raise ConfigError(f"seed = {self.seed!r} must be an integer")

    def echo(self) -> dict:
        """The config as a JSON-ready dict, echoed into reports."""
        return {
            "family": self.family,
            "grid_size": self.grid_size,
            "n_list": list(self.n_list),
            "test_points": (
                None if self.test_points is None else list(self.test_points)
            ),
            "experiment": self.experiment,
            "output_path": self.output_path,
            "delta_grid_size": self.delta_grid_size,
            "seed": self.seed,
        }


def config_from_dict(data: dict) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    extra = set(data) - _CONFIG_KEYS
    if extra:
        raise ConfigError(f"unexpected config keys: {sorted(extra)}")
    for required in ("family", "n_list", "experiment"):
        if required not in data:
            raise ConfigError(f"config is missing {required!r}")
    kwargs = dict(data)
    if "n_list" in kwargs and isinstance(kwargs["n_list"], list):
        kwargs["n_list"] = tuple(kwargs["n_list"])
    if isinstance(kwargs.get("test_points"), list):
        kwargs["test_points"] = tuple(kwargs["test_points"])
    return ExperimentConfig(**kwargs)


def load_config(path: str) -> ExperimentConfig:
    """Read and validate a JSON config file."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from exc
    return config_from_dict(data)
