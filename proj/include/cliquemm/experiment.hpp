#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cliquemm/dynamic_matching.hpp"
#include "cliquemm/simulation.hpp"

namespace cliquemm {

enum class GeneratorKind { LineSegment, Random, File };

const char* generator_name(GeneratorKind g);
GeneratorKind parse_generator(const std::string& name);
AdversaryMode parse_adversary_mode(const std::string& name);

struct ExperimentConfig {
    int n = 60;
    int k = 4;
    int beta = 1;
    int ell = 4;
    int batches = 3;
    AdversaryMode mode = AdversaryMode::Oblivious;
    GeneratorKind generator = GeneratorKind::LineSegment;
    std::uint64_t seed = 1;
    int gamma_override = 0;
    double mix = 0.5;              // random generator: deletion fraction
    double matched_weight = 4.0;   // random generator: matched-edge bias
    long long edges = -1;          // random generator: edge count (-1 = 2n)
    bool fastpath_enabled = false;
    std::string graph_file;
    std::string partition_file;
    std::string batches_file;
    std::string output_path;
    bool baseline = false;
    bool abort_on_oracle_failure = true;
};

struct InvariantReport {
    bool ok = true;
    std::string detail;
};

/// Centralized check of the per-player knowledge contract: hosted mates
/// agree with the global matching, every neighbor's matched flag equals
/// ground truth, and the local adjacency mirrors the graph.
InvariantReport verify_invariant_3_1(const Simulation& sim);

/// Lemma-3.6 oracle: every freed vertex still has at least
/// 2(k*gamma+gamma)+1 free neighbors.
bool fastpath_precondition_holds(const Graph& g_after, const Matching& m1,
                                 const std::vector<int>& v_f, int k, int gamma);

std::vector<std::string> regime_warnings(int n, int k, int beta, int ell);

struct RunRecord {
    nlohmann::ordered_json json;

    std::string dump(int indent = 2) const { return json.dump(indent); }
    /// Canonical form for determinism comparisons (wall time removed).
    nlohmann::ordered_json without_wall_time() const;
    bool all_oracles_true() const;
};

/// Initialize, apply every batch through the incremental pipeline, run
/// the oracles after each batch, and assemble the record. Throws
/// OracleFailure (with a state dump) when a verdict fails and
/// cfg.abort_on_oracle_failure is set.
RunRecord run_experiment(const ExperimentConfig& cfg, const BatchHooks* hooks = nullptr);

/// Comparison pipeline: after each batch, spread all changed edges and
/// recompute the matching from scratch on the full graph.
RunRecord baseline_recompute(const ExperimentConfig& cfg);

struct BenchSpec {
    std::vector<int> ns;
    std::vector<int> ks;
    std::vector<int> betas;
    std::vector<int> ells;
    std::vector<AdversaryMode> modes;
    GeneratorKind generator = GeneratorKind::LineSegment;
    int seeds = 3;
    int batches = 2;
    double mix = 0.5;
    long long edges = -1;
};

/// Grid sweep; one CSV row per cell, flushed as soon as it is complete.
/// The fitted initialization constant goes to `log` when provided.
void run_bench(const BenchSpec& spec, std::ostream& csv, std::ostream* log = nullptr);

}  // namespace cliquemm
