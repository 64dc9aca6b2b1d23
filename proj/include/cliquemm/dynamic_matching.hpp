#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "cliquemm/graph.hpp"
#include "cliquemm/network.hpp"
#include "cliquemm/simulation.hpp"

namespace cliquemm {

enum class AdversaryMode { Oblivious, Adaptive };

const char* adversary_mode_name(AdversaryMode m);

/// Phase-1 observability for tests: per iteration, which vertex proposed
/// to which V'-vertex, and which edges got matched.
struct Phase1Trace {
    struct Iteration {
        std::vector<std::pair<int, int>> proposals;  // (T-vertex, sampled V'-vertex)
        std::vector<Edge> matched;
    };
    std::vector<Iteration> iterations;
};

struct UpdateConfig {
    AdversaryMode mode = AdversaryMode::Oblivious;
    int gamma = 0;  // 0 = default for the mode: beta*k, or floor(sqrt(beta*k))
    int c1 = 2;     // phase-1 exit threshold multiplier
    int c2 = 1;     // subgraph-sampling multiplier
    bool fastpath_enabled = false;
    int iteration_cap_multiplier = 32;
    Phase1Trace* phase1_trace = nullptr;

    int resolved_gamma(const NetworkConfig& net) const {
        if (gamma > 0) return gamma;
        const long long bk = static_cast<long long>(net.beta) * net.k;
        if (mode == AdversaryMode::Oblivious) return static_cast<int>(bk);
        return std::max(1, static_cast<int>(std::sqrt(static_cast<double>(bk))));
    }
};

/// What one deletion mini-batch did.
struct MinibatchReport {
    std::vector<Edge> deleted;
    std::vector<int> v_f;  // sorted
    int gamma = 0;
    int phase1_iterations = 0;
    int sample_deficits = 0;
    bool fastpath = false;
    long long rounds = 0;
};

/// Centralized observation points; all run at rounds-quiescent states and
/// must not mutate the simulation.
struct BatchHooks {
    std::function<void(const Simulation&, const std::vector<Edge>&)> before_minibatch;
    std::function<void(const Simulation&, const MinibatchReport&)> after_phase1;
    std::function<void(const Simulation&, const MinibatchReport&)> after_minibatch;
};

struct BatchStats {
    long long rounds = 0;
    long long tokens = 0;
    int minibatches = 0;
    int sample_deficits = 0;
    std::vector<MinibatchReport> reports;
};

/// The shared deterministic rule g: greedy maximal matching over the
/// input edges in lexicographic order. Identical output at every player
/// for identical input.
Matching deterministic_local_matching_g(std::vector<Edge> edges);

/// Free-free inserted edges are disseminated via spreading and matched by
/// every player applying g to the same candidate set. Topology must
/// already contain the inserted edges. Returns the newly matched edges.
std::vector<Edge> handle_insertions(Simulation& sim, const std::vector<Edge>& inserted,
                                    const UpdateConfig& cfg);

/// Applies d (<= gamma matched edges) to topology and matching, then
/// restores maximality via the fastpath or phase 1 + phase 2.
MinibatchReport handle_deletion_minibatch(Simulation& sim, std::vector<Edge> d,
                                          const UpdateConfig& cfg,
                                          const BatchHooks* hooks = nullptr);

/// Constant-round repair for states where every freed vertex has free
/// degree >= 2(k*gamma + gamma) + 1; the distributed code trusts the
/// caller's flag (PreconditionFailed when it is absent). Returns the new
/// matched edges.
std::vector<Edge> high_free_degree_fastpath(Simulation& sim, const std::vector<int>& v_f,
                                            const UpdateConfig& cfg);

/// Full batch pipeline: unmatched deletions are dropped silently, matched
/// deletions run in mini-batches of gamma, insertions run last on the
/// final topology.
BatchStats process_batch(Simulation& sim, const UpdateBatch& b, const UpdateConfig& cfg,
                         const BatchHooks* hooks = nullptr);

}  // namespace cliquemm
