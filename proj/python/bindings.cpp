#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cliquemm/adversary.hpp"
#include "cliquemm/dynamic_matching.hpp"
#include "cliquemm/experiment.hpp"
#include "cliquemm/io.hpp"
#include "cliquemm/static_matching.hpp"

#include <memory>
#include <sstream>

namespace py = pybind11;
using namespace cliquemm;

namespace {

UpdateBatch batch_from_lists(const std::vector<std::pair<int, int>>& deletions,
                             const std::vector<std::pair<int, int>>& insertions) {
    UpdateBatch b;
    for (const auto& [u, v] : deletions) b.deletions.push_back(make_edge(u, v));
    for (const auto& [u, v] : insertions) b.insertions.push_back(make_edge(u, v));
    return b;
}

/// Owning wrapper so python can drive a simulation step by step.
class PySimulator {
  public:
    PySimulator(const Graph& g, const Partition& p, int beta, std::uint64_t seed,
                const std::string& mode, int gamma, bool fastpath) {
        NetworkConfig cfg;
        cfg.k = p.k;
        cfg.beta = beta;
        cfg.n = g.vertex_count();
        cfg.master_seed = seed;
        sim_ = std::make_unique<Simulation>(g, p, cfg);
        ucfg_.mode = parse_adversary_mode(mode);
        ucfg_.gamma = gamma;
        ucfg_.fastpath_enabled = fastpath;
    }

    void initialize() { initialize_matching(*sim_); }

    py::dict process(const std::vector<std::pair<int, int>>& deletions,
                     const std::vector<std::pair<int, int>>& insertions) {
        auto stats = process_batch(*sim_, batch_from_lists(deletions, insertions), ucfg_);
        py::dict d;
        d["rounds"] = stats.rounds;
        d["tokens"] = stats.tokens;
        d["minibatches"] = stats.minibatches;
        d["sample_deficits"] = stats.sample_deficits;
        return d;
    }

    std::vector<std::pair<int, int>> matching_edges() const { return sim_->matching().edges(); }

    py::dict metrics() const {
        const Metrics& m = sim_->net().metrics();
        py::dict d;
        d["rounds"] = m.rounds;
        d["tokens_sent"] = m.tokens_sent;
        d["max_link_load"] = m.max_link_load;
        d["rounds_init"] = sim_->rounds_init;
        py::dict phases;
        for (const auto& [label, stats] : m.per_phase) {
            py::dict p;
            p["rounds"] = stats.rounds;
            p["tokens"] = stats.tokens;
            phases[py::str(label)] = p;
        }
        d["per_phase"] = phases;
        return d;
    }

    py::dict verify() const {
        py::dict d;
        bool maximal = false;
        try {
            maximal = is_maximal(sim_->graph(), sim_->matching());
        } catch (const InvalidMatching&) {
        }
        const auto inv = verify_invariant_3_1(*sim_);
        d["maximality"] = maximal;
        d["invariant_3_1"] = inv.ok;
        d["bandwidth"] = sim_->net().metrics().max_link_load <= sim_->net().config().beta;
        d["detail"] = inv.detail;
        return d;
    }

    Graph graph() const { return sim_->graph(); }

  private:
    std::unique_ptr<Simulation> sim_;
    UpdateConfig ucfg_;
};

std::string run_experiment_json(int n, int k, int beta, int ell, int batches,
                                const std::string& mode, const std::string& generator,
                                std::uint64_t seed, int gamma, double mix, long long edges,
                                bool baseline) {
    ExperimentConfig cfg;
    cfg.n = n;
    cfg.k = k;
    cfg.beta = beta;
    cfg.ell = ell;
    cfg.batches = batches;
    cfg.mode = parse_adversary_mode(mode);
    cfg.generator = parse_generator(generator);
    cfg.seed = seed;
    cfg.gamma_override = gamma;
    cfg.mix = mix;
    cfg.edges = edges;
    cfg.baseline = baseline;
    return run_experiment(cfg).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Batch-dynamic maximal matching over a simulated message-passing clique";

    py::register_exception<SimError>(m, "SimError");

    py::class_<Graph>(m, "Graph")
        .def(py::init<int>(), py::arg("n"))
        .def_static("from_edges", &Graph::from_edges, py::arg("n"), py::arg("edges"))
        .def_property_readonly("n", &Graph::vertex_count)
        .def_property_readonly("m", &Graph::edge_count)
        .def("has_edge", &Graph::has_edge)
        .def("add_edge", &Graph::add_edge)
        .def("remove_edge", &Graph::remove_edge)
        .def("neighbors",
             [](const Graph& g, int u) {
                 const auto& s = g.neighbors(u);
                 return std::vector<int>(s.begin(), s.end());
             })
        .def("edges", &Graph::edges);

    py::class_<Matching>(m, "Matching")
        .def(py::init([](const std::vector<std::pair<int, int>>& edges) {
                 Matching mm;
                 for (const auto& [u, v] : edges) mm.add(u, v);
                 return mm;
             }),
             py::arg("edges") = std::vector<std::pair<int, int>>{})
        .def("is_matched", &Matching::is_matched)
        .def("mate_of", &Matching::mate_of)
        .def("edges", &Matching::edges)
        .def("__len__", &Matching::size);

    py::class_<Partition>(m, "Partition")
        .def_readonly("k", &Partition::k)
        .def_property_readonly("n", &Partition::n)
        .def("owner_of", &Partition::owner_of)
        .def("loads", [](const Partition& p) {
            auto l = p.loads();
            return std::vector<int>(l.begin() + 1, l.end());
        });

    py::class_<Frontier>(m, "Frontier")
        .def_readonly("v_f", &Frontier::v_f)
        .def_readonly("v_prime", &Frontier::v_prime)
        .def_readonly("gamma", &Frontier::gamma);

    m.def("line_segment_graph", [](int q) { return gen_line_segment_graph(q).graph; },
          py::arg("q"));
    m.def("random_graph", &gen_random_graph, py::arg("n"), py::arg("m"), py::arg("seed"));
    m.def("random_partition", &gen_random_partition, py::arg("n"), py::arg("k"), py::arg("seed"));
    m.def("domino_partition", &gen_domino_partition, py::arg("q"), py::arg("k"));
    m.def(
        "oblivious_lb_batch",
        [](int q, int ell, std::uint64_t seed) {
            auto out = oblivious_lb_batch(q, ell, seed);
            return out.batch.deletions;
        },
        py::arg("q"), py::arg("ell"), py::arg("seed"));
    m.def(
        "adaptive_lb_batch",
        [](const Graph& g, const Matching& mm, const Partition& p, int ell, std::uint64_t seed) {
            auto out = adaptive_lb_batch(g, mm, p, ell, seed);
            py::dict d;
            d["deletions"] = out.batch.deletions;
            d["target_player"] = out.target_player;
            return d;
        },
        py::arg("graph"), py::arg("matching"), py::arg("partition"), py::arg("ell"),
        py::arg("seed"));

    m.def(
        "apply_batch",
        [](const Graph& g, const std::vector<std::pair<int, int>>& deletions,
           const std::vector<std::pair<int, int>>& insertions) {
            return apply_batch(g, batch_from_lists(deletions, insertions));
        },
        py::arg("graph"), py::arg("deletions"), py::arg("insertions"));
    m.def("free_degree", &free_degree, py::arg("graph"), py::arg("matching"), py::arg("u"));
    m.def("is_maximal", &is_maximal, py::arg("graph"), py::arg("matching"));
    m.def(
        "compute_frontier",
        [](const Graph& g_after, const Matching& m_before,
           const std::vector<std::pair<int, int>>& d, int gamma) {
            std::vector<Edge> dd;
            for (const auto& [u, v] : d) dd.push_back(make_edge(u, v));
            return compute_frontier(g_after, m_before, dd, gamma);
        },
        py::arg("g_after"), py::arg("m_before"), py::arg("deleted"), py::arg("gamma"));
    m.def(
        "validate_partition",
        [](const Partition& p, int n, const std::string& mode, double c_bal) {
            return validate_partition(
                p, n, mode == "balanced" ? PartitionMode::Balanced : PartitionMode::Any, c_bal);
        },
        py::arg("partition"), py::arg("n"), py::arg("mode") = "balanced", py::arg("c_bal") = 4.0);
    m.def(
        "local_matching_g",
        [](const std::vector<std::pair<int, int>>& edges) {
            std::vector<Edge> ee;
            for (const auto& [u, v] : edges) ee.push_back(make_edge(u, v));
            return deterministic_local_matching_g(std::move(ee)).edges();
        },
        py::arg("edges"));

    py::class_<PySimulator>(m, "Simulator")
        .def(py::init<const Graph&, const Partition&, int, std::uint64_t, const std::string&, int,
                      bool>(),
             py::arg("graph"), py::arg("partition"), py::arg("beta") = 1, py::arg("seed") = 1,
             py::arg("mode") = "oblivious", py::arg("gamma") = 0, py::arg("fastpath") = false)
        .def("initialize", &PySimulator::initialize)
        .def("process", &PySimulator::process, py::arg("deletions"),
             py::arg("insertions") = std::vector<std::pair<int, int>>{})
        .def("matching_edges", &PySimulator::matching_edges)
        .def("metrics", &PySimulator::metrics)
        .def("verify", &PySimulator::verify)
        .def("graph", &PySimulator::graph);

    m.def("run_experiment_json", &run_experiment_json, py::arg("n") = 60, py::arg("k") = 4,
          py::arg("beta") = 1, py::arg("ell") = 4, py::arg("batches") = 3,
          py::arg("mode") = "oblivious", py::arg("generator") = "line-segment",
          py::arg("seed") = 1, py::arg("gamma") = 0, py::arg("mix") = 0.5, py::arg("edges") = -1,
          py::arg("baseline") = false);
}
