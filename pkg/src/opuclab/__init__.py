"""Orthogonal polynomials on the unit circle, from the measure up.

The package builds probability measures on the circle (grid densities
plus point masses), extracts their Schur parameters by several routes,
evaluates the orthonormal polynomials and the CMV basis, and checks the
analytic identities tying them together: the entropy extension of the
Szego integral, Cesaro convergence of the polynomial averages with
two-sided rate bounds, strong Cesaro summability of CMV expansions, and
boundary scattering solutions of the recurrence.

Most workflows go through :func:`run_experiment` with a validated
:class:`ExperimentConfig`, or through the ``opuclab`` command line.
"""

from .config import ExperimentConfig, config_from_dict, load_config
from .errors import ConfigError, OpuclabError
from .experiments import ExperimentOutcome, Verdict, run_experiment, write_outputs
from .families import FAMILY_DESCRIPTIONS, FamilyInstance, build_family
from .measure import (
    CircleMeasure,
    build_measure,
    fejer_mean,
    lebesgue,
    moment,
    poisson,
    poisson_log_weight,
    weighted_poisson,
)
from .schur import SchurParameters, schur_eval, schur_parameters_from_measure
from .szego import entropy, entropy_profile, szego_boundary, szego_interior

__version__ = "0.1.0"

__all__ = [
    "CircleMeasure",
    "ConfigError",
    "ExperimentConfig",
    "ExperimentOutcome",
    "FamilyInstance",
    "FAMILY_DESCRIPTIONS",
    "OpuclabError",
    "SchurParameters",
    "Verdict",
    "build_family",
    "build_measure",
    "config_from_dict",
    "entropy",
    "entropy_profile",
    "fejer_mean",
    "lebesgue",
    "load_config",
    "moment",
    "poisson",
    "poisson_log_weight",
    "run_experiment",
    "schur_eval",
    "schur_parameters_from_measure",
    "szego_boundary",
    "szego_interior",
    "weighted_poisson",
    "write_outputs",
]
