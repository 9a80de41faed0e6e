"""Electro-neutral lock/key charge distributions (Python bindings)."""
import json

from ._core import (
    ConfigError,
    ContractError,
    Grid,
    Kernel,
    NumericError,
    Operator,
    ResourceError,
    Spectrum,
    assemble_operator,
    build_grid,
    eigendecompose,
    f_matrix,
    feasible_alpha,
)
from . import _core

__all__ = [
    "ConfigError", "ContractError", "Grid", "Kernel", "NumericError", "Operator",
    "ResourceError", "Spectrum", "assemble_operator", "build_grid", "eigendecompose",
    "f_matrix", "feasible_alpha", "evaluate", "search", "scaling_study", "run",
]


def evaluate(op, spectrum, modes, alpha, margin_floor=0.0):
    """Build the quartet for (i, j, k, alpha) and report its ten interactions."""
    return json.loads(_core._evaluate(op, spectrum, tuple(modes), alpha, margin_floor))


def search(kernel, cells_per_axis=6, mode_count=5, alphas=None, scales=(1.0,)):
    if alphas is None:
        alphas = [0.05 * s for s in range(1, 11)]
    return _core._search(kernel, cells_per_axis, mode_count, list(alphas), list(scales))


def scaling_study(kernel, cells_per_axis=6, scales=(1.0, 0.5, 0.25, 0.125), modes=(1, 2, 3)):
    return _core._scaling(kernel, cells_per_axis, list(scales), list(modes))


def run(subcommand, config_text, out_dir, seed=1):
    """Run a CLI subcommand in-process; returns (exit_code, message, result)."""
    code, message, result = _core._run(subcommand, config_text, str(out_dir), seed)
    return code, message, json.loads(result)
