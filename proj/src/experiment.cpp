#include "cliquemm/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "cliquemm/adversary.hpp"
#include "cliquemm/io.hpp"
#include "cliquemm/static_matching.hpp"

namespace cliquemm {

const char* generator_name(GeneratorKind g) {
    switch (g) {
        case GeneratorKind::LineSegment: return "line-segment";
        case GeneratorKind::Random: return "random";
        case GeneratorKind::File: return "file";
    }
    return "?";
}

GeneratorKind parse_generator(const std::string& name) {
    if (name == "line-segment" || name == "line_segment") return GeneratorKind::LineSegment;
    if (name == "random") return GeneratorKind::Random;
    if (name == "file") return GeneratorKind::File;
    throw SimError("unknown generator '" + name + "'");
}

AdversaryMode parse_adversary_mode(const std::string& name) {
    if (name == "oblivious") return AdversaryMode::Oblivious;
    if (name == "adaptive") return AdversaryMode::Adaptive;
    throw SimError("unknown adversary mode '" + name + "'");
}

InvariantReport verify_invariant_3_1(const Simulation& sim) {
    const Matching& m = sim.matching();
    for (int i = 1; i <= sim.k(); ++i) {
        const PlayerState& ps = sim.player(i);
        for (int v : ps.hosted) {
            if (ps.mate_of(v) != m.mate_of(v)) {
                return {false, "player " + std::to_string(i) + " believes mate(" +
                                   std::to_string(v) + ")=" + std::to_string(ps.mate_of(v)) +
                                   ", ground truth " + std::to_string(m.mate_of(v))};
            }
            if (ps.local_adj.at(v) != sim.graph().neighbors(v)) {
                return {false, "player " + std::to_string(i) + " has stale adjacency for vertex " +
                                   std::to_string(v)};
            }
            for (int u : ps.local_adj.at(v)) {
                if (ps.believes_matched(u) != m.is_matched(u)) {
                    return {false, "player " + std::to_string(i) + " has wrong matched flag for " +
                                       std::to_string(u) + " (neighbor of hosted " +
                                       std::to_string(v) + ")"};
                }
            }
        }
    }
    return {true, ""};
}

bool fastpath_precondition_holds(const Graph& g_after, const Matching& m1,
                                 const std::vector<int>& v_f, int k, int gamma) {
    const int need = 2 * (k * gamma + gamma) + 1;
    for (int v : v_f) {
        if (free_degree(g_after, m1, v) < need) return false;
    }
    return true;
}

std::vector<std::string> regime_warnings(int n, int k, int beta, int ell) {
    (void)beta;
    std::vector<std::string> w;
    const double log2n = std::log2(std::max(2.0, static_cast<double>(n)));
    if (static_cast<double>(k) < std::pow(log2n, 4.0)) {
        w.push_back("k below the log^4(n) regime");
    }
    if (static_cast<double>(k) > std::sqrt(static_cast<double>(n)) / log2n) {
        w.push_back("k above sqrt(n)/log(n)");
    }
    if (static_cast<double>(ell) > static_cast<double>(n) / (2.0 * k)) {
        w.push_back("ell above n/(2k)");
    }
    return w;
}

nlohmann::ordered_json RunRecord::without_wall_time() const {
    auto j = json;
    j.erase("wall_time_ms");
    return j;
}

bool RunRecord::all_oracles_true() const {
    const auto& o = json.at("oracles");
    return o.at("maximality").get<bool>() && o.at("invariant_3_1").get<bool>() &&
           o.at("bandwidth").get<bool>();
}

namespace {

struct Inputs {
    Graph graph;
    Partition partition;
    std::vector<UpdateBatch> committed;  // pre-committed script (oblivious / random / file)
    int q = 0;                           // line-segment only
    int n_actual = 0;
};

Inputs build_inputs(const ExperimentConfig& cfg) {
    Inputs in;
    switch (cfg.generator) {
        case GeneratorKind::LineSegment: {
            in.q = std::max(1, cfg.n / 3);
            auto ls = gen_line_segment_graph(in.q);
            in.graph = std::move(ls.graph);
            in.n_actual = 3 * in.q;
            if (cfg.mode == AdversaryMode::Adaptive) {
                in.partition = gen_domino_partition(in.q, cfg.k);
            } else {
                in.partition = gen_random_partition(in.n_actual, cfg.k, cfg.seed);
                in.committed = oblivious_lb_script(in.q, cfg.ell, cfg.batches, cfg.seed);
            }
            break;
        }
        case GeneratorKind::Random: {
            in.n_actual = cfg.n;
            const long long m = cfg.edges >= 0 ? cfg.edges : 2LL * cfg.n;
            in.graph = gen_random_graph(cfg.n, m, cfg.seed);
            in.partition = gen_random_partition(cfg.n, cfg.k, cfg.seed);
            break;
        }
        case GeneratorKind::File: {
            in.graph = load_graph(cfg.graph_file);
            in.n_actual = in.graph.vertex_count();
            in.partition = cfg.partition_file.empty()
                               ? gen_random_partition(in.n_actual, cfg.k, cfg.seed)
                               : load_partition(cfg.partition_file, in.n_actual);
            if (!cfg.batches_file.empty()) in.committed = load_batches(cfg.batches_file);
            break;
        }
    }
    return in;
}

UpdateBatch next_batch(const ExperimentConfig& cfg, const Inputs& in, const Simulation& sim,
                       int index) {
    if (!in.committed.empty() || cfg.generator == GeneratorKind::File) {
        if (index < static_cast<int>(in.committed.size())) return in.committed[static_cast<std::size_t>(index)];
        return UpdateBatch{};
    }
    const std::uint64_t batch_seed = RngStream::mix(cfg.seed, 1000 + static_cast<std::uint64_t>(index));
    if (cfg.generator == GeneratorKind::LineSegment) {
        // adaptive mode: the adversary reads the full current state
        return adaptive_lb_batch(sim.graph(), sim.matching(), sim.partition(), cfg.ell, batch_seed)
            .batch;
    }
    return gen_random_batch(sim.graph(), sim.matching(), cfg.ell, cfg.mix, batch_seed,
                            cfg.matched_weight);
}

std::string state_dump(const Simulation& sim, const std::string& reason) {
    std::ostringstream os;
    os << "oracle failure: " << reason << "\n";
    os << "graph: n=" << sim.n() << " m=" << sim.graph().edge_count() << "\n";
    const long long cap = 50000;
    long long written = 0;
    os << "edges:";
    for (const auto& [u, v] : sim.graph().edges()) {
        if (++written > cap) {
            os << " ...";
            break;
        }
        os << " " << u << "-" << v;
    }
    os << "\nmatching:";
    for (const auto& [u, v] : sim.matching().edges()) os << " " << u << "-" << v;
    os << "\n";
    for (int i = 1; i <= sim.k(); ++i) {
        const PlayerState& ps = sim.player(i);
        os << "player " << i << " hosts";
        for (int v : ps.hosted) {
            os << " " << v;
            if (ps.mate_of(v) != 0) os << "(mate " << ps.mate_of(v) << ")";
        }
        os << "\n  believes matched:";
        for (int v = 1; v <= sim.n(); ++v) {
            if (ps.believes_matched(v)) os << " " << v;
        }
        os << "\n";
        if (sim.n() > 400) {
            os << "  (remaining players elided)\n";
            break;
        }
    }
    return os.str();
}

struct OracleOutcome {
    bool maximality = true;
    bool invariant = true;
    bool bandwidth = true;
    std::string reason;

    bool all() const { return maximality && invariant && bandwidth; }
};

OracleOutcome run_oracles(const Simulation& sim) {
    OracleOutcome o;
    try {
        o.maximality = is_maximal(sim.graph(), sim.matching());
        if (!o.maximality) o.reason = "matching is not maximal";
    } catch (const InvalidMatching& e) {
        o.maximality = false;
        o.reason = e.what();
    }
    const auto inv = verify_invariant_3_1(sim);
    o.invariant = inv.ok;
    if (!inv.ok && o.reason.empty()) o.reason = inv.detail;
    o.bandwidth = sim.net().metrics().max_link_load <= sim.net().config().beta;
    if (!o.bandwidth && o.reason.empty()) o.reason = "max link load exceeds beta";
    return o;
}

nlohmann::ordered_json config_echo(const ExperimentConfig& cfg, const Inputs& in, int gamma) {
    nlohmann::ordered_json j;
    j["n"] = in.n_actual;
    j["k"] = cfg.k;
    j["beta"] = cfg.beta;
    j["ell"] = cfg.ell;
    j["batches"] = cfg.batches;
    j["mode"] = adversary_mode_name(cfg.mode);
    j["generator"] = generator_name(cfg.generator);
    j["seed"] = cfg.seed;
    j["gamma"] = gamma;
    j["baseline"] = cfg.baseline;
    return j;
}

nlohmann::ordered_json per_phase_json(const Metrics& m) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [label, stats] : m.per_phase) {
        j[label] = {{"rounds", stats.rounds}, {"tokens", stats.tokens}};
    }
    return j;
}

RunRecord run_pipeline(const ExperimentConfig& cfg, const BatchHooks* hooks, bool baseline) {
    const auto t0 = std::chrono::steady_clock::now();
    Inputs in = build_inputs(cfg);

    NetworkConfig net_cfg;
    net_cfg.k = cfg.k;
    net_cfg.beta = cfg.beta;
    net_cfg.n = in.n_actual;
    net_cfg.master_seed = cfg.seed;
    Simulation sim(std::move(in.graph), in.partition, net_cfg);

    UpdateConfig ucfg;
    ucfg.mode = cfg.mode;
    ucfg.gamma = cfg.gamma_override;
    ucfg.fastpath_enabled = cfg.fastpath_enabled;
    const int gamma = ucfg.resolved_gamma(net_cfg);

    RunRecord rec;
    rec.json["config"] = config_echo(cfg, in, gamma);
    rec.json["warnings"] = regime_warnings(in.n_actual, cfg.k, cfg.beta, cfg.ell);

    initialize_matching(sim);
    OracleOutcome oracles = run_oracles(sim);

    std::vector<long long> rounds_per_batch;
    std::vector<long long> tokens_per_batch;
    long long sample_deficits = 0;
    long long minibatches = 0;

    const int total_batches = cfg.generator == GeneratorKind::File && !cfg.batches_file.empty()
                                  ? static_cast<int>(in.committed.size())
                                  : cfg.batches;
    for (int b = 0; oracles.all() && b < total_batches; ++b) {
        UpdateBatch batch = next_batch(cfg, in, sim, b);
        const long long r0 = sim.net().metrics().rounds;
        const long long tk0 = sim.net().metrics().tokens_sent;
        if (baseline) {
            PhaseScope phase(sim.net(), "baseline");
            // Every changed edge is spread, then the matching is rebuilt
            // from scratch on the full graph.
            batch.validate(sim.graph());
            std::vector<std::vector<Token>> out(static_cast<std::size_t>(sim.k()) + 1);
            for (const auto& [u, v] : batch.deletions) {
                sim.apply_deletion(u, v);
                out[static_cast<std::size_t>(sim.partition().owner_of(u))].push_back(
                    {Tag::Edge, u, v, 0});
            }
            for (const auto& [u, v] : batch.insertions) {
                sim.apply_insertion(u, v);
                out[static_cast<std::size_t>(sim.partition().owner_of(u))].push_back(
                    {Tag::Edge, u, v, 1});
            }
            sim.net().spreading(out);
            sim.reset_matching();
            StaticOptions opt;
            opt.phase_label = "baseline";
            run_static_matching(
                sim, std::vector<std::uint8_t>(static_cast<std::size_t>(sim.n()) + 1, 1),
                [](int, int) { return true; }, sim.n(), opt);
        } else {
            auto stats = process_batch(sim, batch, ucfg, hooks);
            sample_deficits += stats.sample_deficits;
            minibatches += stats.minibatches;
        }
        rounds_per_batch.push_back(sim.net().metrics().rounds - r0);
        tokens_per_batch.push_back(sim.net().metrics().tokens_sent - tk0);
        oracles = run_oracles(sim);
    }

    rec.json["rounds_init"] = sim.rounds_init;
    rec.json["rounds_per_batch"] = rounds_per_batch;
    rec.json["tokens_per_batch"] = tokens_per_batch;
    rec.json["tokens_total"] = sim.net().metrics().tokens_sent;
    rec.json["max_link_load"] = sim.net().metrics().max_link_load;
    rec.json["per_phase"] = per_phase_json(sim.net().metrics());
    rec.json["oracles"] = {{"maximality", oracles.maximality},
                           {"invariant_3_1", oracles.invariant},
                           {"bandwidth", oracles.bandwidth}};
    rec.json["sample_deficit_count"] = sample_deficits;
    rec.json["minibatches_total"] = minibatches;
    const auto t1 = std::chrono::steady_clock::now();
    rec.json["wall_time_ms"] =
        std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count() / 1000.0;

    if (!oracles.all() && cfg.abort_on_oracle_failure) {
        throw OracleFailure(oracles.reason, state_dump(sim, oracles.reason));
    }
    return rec;
}

}  // namespace

RunRecord run_experiment(const ExperimentConfig& cfg, const BatchHooks* hooks) {
    return run_pipeline(cfg, hooks, cfg.baseline);
}

RunRecord baseline_recompute(const ExperimentConfig& cfg) {
    return run_pipeline(cfg, nullptr, true);
}

void run_bench(const BenchSpec& spec, std::ostream& csv, std::ostream* log) {
    csv << "n,k,beta,ell,mode,generator,seeds,mean_update_rounds,p95_update_rounds,"
           "mean_rounds_init,init_ratio,warnings\n";
    csv.flush();
    double fitted_c = 0.0;
    for (int n : spec.ns) {
        for (int k : spec.ks) {
            for (int beta : spec.betas) {
                for (int ell : spec.ells) {
                    for (AdversaryMode mode : spec.modes) {
                        std::vector<long long> update_rounds;
                        double init_sum = 0.0;
                        double ratio_sum = 0.0;
                        for (int s = 0; s < spec.seeds; ++s) {
                            ExperimentConfig cfg;
                            cfg.n = n;
                            cfg.k = k;
                            cfg.beta = beta;
                            cfg.ell = ell;
                            cfg.batches = spec.batches;
                            cfg.mode = mode;
                            cfg.generator = spec.generator;
                            cfg.seed = static_cast<std::uint64_t>(s) + 1;
                            cfg.mix = spec.mix;
                            cfg.edges = spec.edges;
                            auto rec = run_experiment(cfg);
                            for (const auto& r : rec.json.at("rounds_per_batch")) {
                                update_rounds.push_back(r.get<long long>());
                            }
                            const double init = rec.json.at("rounds_init").get<double>();
                            const int n_act = rec.json.at("config").at("n").get<int>();
                            init_sum += init;
                            const double denom =
                                std::ceil(static_cast<double>(n_act) / (beta * k)) *
                                std::log2(std::max(2.0, static_cast<double>(n_act)));
                            ratio_sum += init / denom;
                        }
                        std::sort(update_rounds.begin(), update_rounds.end());
                        double mean = 0.0;
                        for (long long r : update_rounds) mean += static_cast<double>(r);
                        if (!update_rounds.empty()) mean /= static_cast<double>(update_rounds.size());
                        const long long p95 =
                            update_rounds.empty()
                                ? 0
                                : update_rounds[std::min(
                                      update_rounds.size() - 1,
                                      static_cast<std::size_t>(
                                          std::ceil(0.95 * static_cast<double>(
                                                               update_rounds.size())) -
                                          1))];
                        const double mean_init = init_sum / spec.seeds;
                        const double ratio = ratio_sum / spec.seeds;
                        fitted_c = std::max(fitted_c, ratio);
                        auto warnings = regime_warnings(n, k, beta, ell);
                        std::string wtext;
                        for (std::size_t i = 0; i < warnings.size(); ++i) {
                            if (i) wtext += "; ";
                            wtext += warnings[i];
                        }
                        csv << n << ',' << k << ',' << beta << ',' << ell << ','
                            << adversary_mode_name(mode) << ',' << generator_name(spec.generator)
                            << ',' << spec.seeds << ',' << mean << ',' << p95 << ',' << mean_init
                            << ',' << ratio << ",\"" << wtext << "\"\n";
                        csv.flush();
                    }
                }
            }
        }
    }
    if (log) {
        *log << "fitted init constant C = " << fitted_c
             << "  (rounds_init <= C * ceil(n/(beta*k)) * log2(n))\n";
    }
}

}  // namespace cliquemm
