"""Biased random walks on heavy-tailed traps and on Kesten's tree."""

from ._core import (
    ConfigError,
    TailFunction,
    derive_seed,
    extremal_cdf,
    j1_distance,
    m1_distance,
    quenched_mean,
    sample_extremal,
    sample_visited_set,
    subcommands,
    survival_probabilities,
    visited_set_probability,
)
from ._core import run as _run

__all__ = [
    "ConfigError",
    "TailFunction",
    "derive_seed",
    "extremal_cdf",
    "j1_distance",
    "m1_distance",
    "quenched_mean",
    "run",
    "sample_extremal",
    "sample_visited_set",
    "subcommands",
    "survival_probabilities",
    "visited_set_probability",
]


def run(command, **options):
    """Run a subcommand; keyword names follow the config keys with dots as '__'."""
    opts = {}
    for key, value in options.items():
        if isinstance(value, (list, tuple)):
            value = ",".join(str(v) for v in value)
        opts[key.replace("__", ".")] = str(value)
    return _run(command, opts)
