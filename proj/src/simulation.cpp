#include "cliquemm/simulation.hpp"

namespace cliquemm {

Simulation::Simulation(Graph g, Partition p, NetworkConfig cfg)
    : g_(std::move(g)), part_(std::move(p)), net_(cfg) {
    if (part_.n() != g_.vertex_count()) {
        throw SimError("partition covers " + std::to_string(part_.n()) + " vertices, graph has " +
                       std::to_string(g_.vertex_count()));
    }
    if (part_.k != cfg.k) throw SimError("partition player count differs from network config");
    if (cfg.n != g_.vertex_count()) throw SimError("network ID universe differs from graph size");
    if (cfg.k > cfg.n) throw SimError("more players than vertices");

    players_.resize(static_cast<std::size_t>(part_.k) + 1);
    for (int i = 1; i <= part_.k; ++i) {
        PlayerState& ps = players_[static_cast<std::size_t>(i)];
        ps.me = i;
        ps.partition = &part_;
        ps.master_seed = cfg.master_seed;
        ps.player_rng = RngStream(
            RngStream::mix(RngStream::mix(cfg.master_seed, 0x706c617965727321ull),
                           static_cast<std::uint64_t>(i)));
        ps.believed_matched.assign(static_cast<std::size_t>(g_.vertex_count()) + 1, 0);
    }
    for (int v = 1; v <= g_.vertex_count(); ++v) {
        PlayerState& ps = players_[static_cast<std::size_t>(part_.owner_of(v))];
        ps.hosted.push_back(v);
        ps.local_adj[v] = g_.neighbors(v);
    }
}

void Simulation::apply_deletion(int u, int v) {
    g_.remove_edge(u, v);
    PlayerState& pu = players_[static_cast<std::size_t>(part_.owner_of(u))];
    PlayerState& pv = players_[static_cast<std::size_t>(part_.owner_of(v))];
    pu.local_adj[u].erase(v);
    pv.local_adj[v].erase(u);
}

void Simulation::apply_insertion(int u, int v) {
    g_.add_edge(u, v);
    PlayerState& pu = players_[static_cast<std::size_t>(part_.owner_of(u))];
    PlayerState& pv = players_[static_cast<std::size_t>(part_.owner_of(v))];
    pu.local_adj[u].insert(v);
    pv.local_adj[v].insert(u);
}

void Simulation::commit_match(int u, int v) {
    m_.add(u, v);
    players_[static_cast<std::size_t>(part_.owner_of(u))].mate[u] = v;
    players_[static_cast<std::size_t>(part_.owner_of(v))].mate[v] = u;
    for (int i = 1; i <= part_.k; ++i) {
        PlayerState& ps = players_[static_cast<std::size_t>(i)];
        ps.believed_matched[static_cast<std::size_t>(u)] = 1;
        ps.believed_matched[static_cast<std::size_t>(v)] = 1;
    }
}

void Simulation::drop_match(int u, int v) {
    m_.remove(u, v);
    PlayerState& pu = players_[static_cast<std::size_t>(part_.owner_of(u))];
    PlayerState& pv = players_[static_cast<std::size_t>(part_.owner_of(v))];
    pu.mate.erase(u);
    pv.mate.erase(v);
    // The hosting players observe their own vertices going free; everyone
    // else hears it from the V_f broadcast.
    pu.believed_matched[static_cast<std::size_t>(u)] = 0;
    pv.believed_matched[static_cast<std::size_t>(v)] = 0;
}

void Simulation::reset_matching() {
    m_.clear();
    for (int i = 1; i <= part_.k; ++i) {
        PlayerState& ps = players_[static_cast<std::size_t>(i)];
        ps.mate.clear();
        std::fill(ps.believed_matched.begin(), ps.believed_matched.end(), 0);
    }
}

}  // namespace cliquemm
