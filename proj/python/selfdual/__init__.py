"""Self-dual polar factorization of sampled vector fields."""

import json

from ._core import (
    InputError,
    IoError,
    PreconditionError,
    builtin,
    builtin_names,
    decompose_json,
    minimize_primal,
    run_cli,
    solve_dual,
    transport_cost,
)

__all__ = [
    "InputError",
    "IoError",
    "PreconditionError",
    "builtin",
    "builtin_names",
    "decompose",
    "minimize_primal",
    "run_cli",
    "solve_dual",
    "transport_cost",
]


def decompose(points, values, cell_measure, mesh, seed=0):
    """Run the full pipeline and return the report as a dict."""
    return json.loads(decompose_json(points, values, cell_measure, mesh, seed))
