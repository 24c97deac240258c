"""Directed polymer winding estimators on a cylinder."""

import json

from ._windlab import (
    ConfigError,
    DegenerateInput,
    GridSpec,
    NumericalInstability,
    __version__,
    char_fn,
    experiment_names,
    heat_reference,
    mixing_rate,
    quenched_variance,
    replica_seed,
    sigma_annealed,
    sigma_stationary,
    unit_kernel,
)
from ._windlab import run_experiment as _run_experiment


def run_experiment(experiment, **options):
    """Run an experiment in memory; keyword options are config keys."""
    flat = {}
    for key, value in options.items():
        if isinstance(value, bool):
            value = "true" if value else "false"
        flat[key] = str(value)
    result = _run_experiment(experiment, flat)
    result["summary"] = json.loads(result["summary"])
    return result


__all__ = [
    "ConfigError",
    "DegenerateInput",
    "GridSpec",
    "NumericalInstability",
    "__version__",
    "char_fn",
    "experiment_names",
    "heat_reference",
    "mixing_rate",
    "quenched_variance",
    "replica_seed",
    "run_experiment",
    "sigma_annealed",
    "sigma_stationary",
    "unit_kernel",
]
