#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cliquemm/graph.hpp"
#include "cliquemm/simulation.hpp"

namespace cliquemm {

/// Per-iteration scratch of one matching iteration, recorded for tests.
struct StaticIterationTrace {
    long long residual_edges_before = 0;
    long long residual_edges_after = 0;
    std::vector<std::pair<int, int>> marked;    // directed sampled edges (u -> v)
    std::vector<Edge> bar_edges;                // marked and selected
    std::vector<std::pair<int, int>> requests;  // (u -> v)
    std::vector<Edge> matched;
    std::vector<int> matched_emitter;  // player responsible for each matched edge
    long long tokens_marked = 0;
    long long tokens_selected = 0;
    long long tokens_request = 0;
    long long tokens_matched = 0;
};

struct StaticTrace {
    std::vector<StaticIterationTrace> iterations;
};

struct StaticOptions {
    int cap_multiplier = 32;  // iterations allowed: cap_multiplier * ceil(log2(max(n', 4)))
    std::string phase_label = "init";
    StaticTrace* trace = nullptr;
};

/// Active-edge filter, evaluated on (hosted vertex, neighbor) pairs from
/// player-local knowledge only.
using EdgePredicate = std::function<bool(int, int)>;

/// Randomized maximal matching on the active subgraph, run over the
/// simulated network (edge sampling / reduce in-degrees / match-up /
/// pruning per iteration, everything moved via spreading). Returns the
/// newly matched edges; player views and the ground-truth matching are
/// updated along the way. Throws IterationCapExceeded when the
/// with-high-probability iteration bound fails.
std::vector<Edge> run_static_matching(Simulation& sim, const std::vector<std::uint8_t>& active,
                                      const EdgePredicate& active_edge, int active_vertex_count,
                                      const StaticOptions& opt = {});

/// Initialization: the full graph is active.
std::vector<Edge> initialize_matching(Simulation& sim, const StaticOptions& opt = {});

}  // namespace cliquemm
