// cliquemm: simulate batch-dynamic maximal matching over a bandwidth-
// limited clique of players. Sub-commands: generate, run, verify, bench.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cliquemm/adversary.hpp"
#include "cliquemm/experiment.hpp"
#include "cliquemm/io.hpp"

namespace {

using namespace cliquemm;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("CLIQUEMM_SEED")) {
        return static_cast<std::uint64_t>(std::strtoull(env, nullptr, 10));
    }
    return 1;
}

template <typename Fn>
void emit(const std::string& path, Fn&& writer) {
    if (path.empty() || path == "-") {
        writer(std::cout);
        return;
    }
    std::ofstream f(path);
    if (!f) throw FormatError("cannot open " + path + " for writing");
    writer(f);
}

int cmd_verify(const std::string& graph_path, const std::string& partition_path,
               const std::string& batches_path, bool balanced) {
    Graph g = load_graph(graph_path);
    std::cout << "graph: n=" << g.vertex_count() << " m=" << g.edge_count() << " ok\n";
    if (!partition_path.empty()) {
        Partition p = load_partition(partition_path, g.vertex_count());
        std::cout << "partition: k=" << p.k << " total ok\n";
        if (balanced) {
            if (!validate_partition(p, g.vertex_count(), PartitionMode::Balanced)) {
                std::cerr << "partition is not balanced\n";
                return 1;
            }
            std::cout << "partition: balanced ok\n";
        }
    }
    if (!batches_path.empty()) {
        auto script = load_batches(batches_path);
        Graph current = g;
        for (std::size_t i = 0; i < script.size(); ++i) {
            try {
                current = apply_batch(current, script[i]);
            } catch (const InvalidBatch& e) {
                std::cerr << "batch " << (i + 1) << " invalid: " << e.what() << "\n";
                return 1;
            }
        }
        std::cout << "batches: " << script.size() << " valid under sequential application\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Batch-dynamic maximal matching over a simulated message-passing clique"};
    app.require_subcommand(1);

    // --- generate ---
    auto* gen = app.add_subcommand("generate", "Write graph/partition/batch files");
    gen->require_subcommand(1);

    int ls_q = 0;
    std::string ls_out = "-";
    auto* g_ls = gen->add_subcommand("line-segment", "q disjoint paths of length 2");
    g_ls->add_option("--q", ls_q, "segment count")->required();
    g_ls->add_option("--out", ls_out, "output path ('-' = stdout)");

    int rg_n = 0;
    long long rg_m = -1;
    std::uint64_t rg_seed = default_seed();
    std::string rg_out = "-";
    auto* g_rand = gen->add_subcommand("random", "uniform random graph");
    g_rand->add_option("--n", rg_n, "vertex count")->required();
    g_rand->add_option("--m", rg_m, "edge count (default 2n)");
    g_rand->add_option("--seed", rg_seed, "random seed");
    g_rand->add_option("--out", rg_out, "output path");

    int pt_n = 0, pt_k = 0;
    std::uint64_t pt_seed = default_seed();
    std::string pt_out = "-";
    auto* g_part = gen->add_subcommand("partition", "uniform random vertex partition");
    g_part->add_option("--n", pt_n, "vertex count")->required();
    g_part->add_option("--k", pt_k, "player count")->required();
    g_part->add_option("--seed", pt_seed, "random seed");
    g_part->add_option("--out", pt_out, "output path");

    int dm_q = 0, dm_k = 0;
    std::string dm_out = "-";
    auto* g_dom = gen->add_subcommand("domino", "domino-tiling partition of a line-segment graph");
    g_dom->add_option("--q", dm_q, "segment count")->required();
    g_dom->add_option("--k", dm_k, "player count (divisible by 3)")->required();
    g_dom->add_option("--out", dm_out, "output path");

    int ob_q = 0, ob_ell = 0, ob_batches = 1;
    std::uint64_t ob_seed = default_seed();
    std::string ob_out = "-";
    auto* g_obl = gen->add_subcommand("oblivious-batches", "pre-committed lower-bound script");
    g_obl->add_option("--q", ob_q, "segment count")->required();
    g_obl->add_option("--ell", ob_ell, "batch size bound")->required();
    g_obl->add_option("--batches", ob_batches, "number of batches");
    g_obl->add_option("--seed", ob_seed, "random seed");
    g_obl->add_option("--out", ob_out, "output path");

    std::string rb_graph;
    int rb_ell = 0, rb_batches = 1;
    double rb_mix = 0.5;
    std::uint64_t rb_seed = default_seed();
    std::string rb_out = "-";
    auto* g_rb = gen->add_subcommand("random-batches", "random stress script for a graph file");
    g_rb->add_option("--graph", rb_graph, "graph file")->required();
    g_rb->add_option("--ell", rb_ell, "batch size")->required();
    g_rb->add_option("--batches", rb_batches, "number of batches");
    g_rb->add_option("--mix", rb_mix, "deletion fraction");
    g_rb->add_option("--seed", rb_seed, "random seed");
    g_rb->add_option("--out", rb_out, "output path");

    // --- run ---
    auto* run = app.add_subcommand("run", "Initialize, apply batches, verify, emit a JSON record");
    ExperimentConfig cfg;
    cfg.seed = default_seed();
    std::string mode_name = "oblivious";
    std::string gen_name = "line-segment";
    run->add_option("--n", cfg.n, "vertex count");
    run->add_option("--k", cfg.k, "player count");
    run->add_option("--beta", cfg.beta, "bandwidth parameter");
    run->add_option("--ell", cfg.ell, "updates per batch");
    run->add_option("--batches", cfg.batches, "number of batches");
    run->add_option("--mode", mode_name, "oblivious|adaptive");
    run->add_option("--generator", gen_name, "line-segment|random|file");
    run->add_option("--seed", cfg.seed, "master seed");
    run->add_option("--gamma", cfg.gamma_override, "mini-batch size override");
    run->add_option("--mix", cfg.mix, "deletion fraction (random generator)");
    run->add_option("--edges", cfg.edges, "edge count (random generator)");
    run->add_option("--graph", cfg.graph_file, "graph file (file generator)");
    run->add_option("--partition", cfg.partition_file, "partition file (file generator)");
    run->add_option("--batches-file", cfg.batches_file, "batch script (file generator)");
    run->add_option("--out", cfg.output_path, "record path ('-' = stdout)");
    run->add_flag("--baseline", cfg.baseline, "spread updates and recompute from scratch");
    run->add_flag("--fastpath", cfg.fastpath_enabled, "enable the high-free-degree fastpath");

    // --- verify ---
    auto* verify = app.add_subcommand("verify", "Validate input files");
    std::string v_graph, v_partition, v_batches;
    bool v_balanced = false;
    verify->add_option("--graph", v_graph, "graph file")->required();
    verify->add_option("--partition", v_partition, "partition file");
    verify->add_option("--batches", v_batches, "batch script");
    verify->add_flag("--balanced", v_balanced, "require a balanced partition");

    // --- bench ---
    auto* bench = app.add_subcommand("bench", "Parameter sweep, CSV output");
    BenchSpec spec;
    spec.betas = {1};
    std::vector<std::string> bench_modes{"oblivious"};
    std::string bench_gen = "line-segment";
    std::string bench_out = "-";
    bench->add_option("--n", spec.ns, "vertex counts")->required()->delimiter(',');
    bench->add_option("--k", spec.ks, "player counts")->required()->delimiter(',');
    bench->add_option("--beta", spec.betas, "bandwidth parameters")->delimiter(',');
    bench->add_option("--ell", spec.ells, "batch sizes")->required()->delimiter(',');
    bench->add_option("--modes", bench_modes, "adversary modes")->delimiter(',');
    bench->add_option("--generator", bench_gen, "line-segment|random");
    bench->add_option("--seeds", spec.seeds, "seeds per cell");
    bench->add_option("--batches", spec.batches, "batches per trial");
    bench->add_option("--mix", spec.mix, "deletion fraction (random generator)");
    bench->add_option("--out", bench_out, "CSV path ('-' = stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (g_ls->parsed()) {
            emit(ls_out, [&](std::ostream& os) { write_graph(os, gen_line_segment_graph(ls_q).graph); });
            return 0;
        }
        if (g_rand->parsed()) {
            const long long m = rg_m >= 0 ? rg_m : 2LL * rg_n;
            emit(rg_out, [&](std::ostream& os) { write_graph(os, gen_random_graph(rg_n, m, rg_seed)); });
            return 0;
        }
        if (g_part->parsed()) {
            emit(pt_out,
                 [&](std::ostream& os) { write_partition(os, gen_random_partition(pt_n, pt_k, pt_seed)); });
            return 0;
        }
        if (g_dom->parsed()) {
            emit(dm_out, [&](std::ostream& os) { write_partition(os, gen_domino_partition(dm_q, dm_k)); });
            return 0;
        }
        if (g_obl->parsed()) {
            emit(ob_out, [&](std::ostream& os) {
                write_batches(os, oblivious_lb_script(ob_q, ob_ell, ob_batches, ob_seed));
            });
            return 0;
        }
        if (g_rb->parsed()) {
            Graph g = load_graph(rb_graph);
            Matching empty;
            std::vector<UpdateBatch> script;
            for (int b = 0; b < rb_batches; ++b) {
                auto batch = gen_random_batch(g, empty, rb_ell, rb_mix,
                                              RngStream::mix(rb_seed, static_cast<std::uint64_t>(b)));
                g = apply_batch(g, batch);
                script.push_back(std::move(batch));
            }
            emit(rb_out, [&](std::ostream& os) { write_batches(os, script); });
            return 0;
        }
        if (verify->parsed()) return cmd_verify(v_graph, v_partition, v_batches, v_balanced);
        if (run->parsed()) {
            cfg.mode = parse_adversary_mode(mode_name);
            cfg.generator = parse_generator(gen_name);
            try {
                auto rec = run_experiment(cfg);
                emit(cfg.output_path, [&](std::ostream& os) { os << rec.dump() << "\n"; });
                return 0;
            } catch (const OracleFailure& e) {
                std::cerr << "oracle failure: " << e.what() << "\n" << e.dump;
                return 1;
            }
        }
        if (bench->parsed()) {
            spec.generator = parse_generator(bench_gen);
            spec.modes.clear();
            for (const auto& m : bench_modes) spec.modes.push_back(parse_adversary_mode(m));
            emit(bench_out, [&](std::ostream& os) { run_bench(spec, os, &std::cerr); });
            return 0;
        }
    } catch (const SimError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
