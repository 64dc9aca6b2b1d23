"""Batch-dynamic maximal matching over a simulated message-passing clique."""

import json as _json

from ._core import (
    Frontier,
    Graph,
    Matching,
    Partition,
    SimError,
    Simulator,
    adaptive_lb_batch,
    apply_batch,
    compute_frontier,
    domino_partition,
    free_degree,
    is_maximal,
    line_segment_graph,
    local_matching_g,
    oblivious_lb_batch,
    random_graph,
    random_partition,
    run_experiment_json,
    validate_partition,
)

__all__ = [
    "Frontier",
    "Graph",
    "Matching",
    "Partition",
    "SimError",
    "Simulator",
    "adaptive_lb_batch",
    "apply_batch",
    "compute_frontier",
    "domino_partition",
    "free_degree",
    "is_maximal",
    "line_segment_graph",
    "local_matching_g",
    "oblivious_lb_batch",
    "random_graph",
    "random_partition",
    "run_experiment",
    "validate_partition",
]


def run_experiment(**kwargs):
    """Run a full experiment and return the record as a dict.

    Keyword arguments mirror the CLI run flags: n, k, beta, ell, batches,
    mode, generator, seed, gamma, mix, edges, baseline.
    """
    return _json.loads(run_experiment_json(**kwargs))
