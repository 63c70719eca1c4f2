"""Python bindings for the foarith library."""

import json as _json

from ._core import (
    brute_force_deg_is,
    brute_force_vc,
    build_chi,
    evaluate,
    graph_structure,
    min_vertex_cover,
    quantifier_rank,
    render,
    suites,
    threshold_n,
    tuple_add,
    tuple_mul,
    vc_threshold,
)
from ._core import run_suite as _run_suite

DEFAULT_VOCAB = {"E": 2, "P": 1}


def run_suite(name, seed=1, **params):
    """Run a verification suite and return its report as a dict (wall time included)."""
    return _json.loads(_run_suite(name, _json.dumps(params), seed))


__all__ = [
    "DEFAULT_VOCAB",
    "brute_force_deg_is",
    "brute_force_vc",
    "build_chi",
    "evaluate",
    "graph_structure",
    "min_vertex_cover",
    "quantifier_rank",
    "render",
    "run_suite",
    "suites",
    "threshold_n",
    "tuple_add",
    "tuple_mul",
    "vc_threshold",
]
