#pragma once

#include <memory>
#include <vector>

#include "cliquemm/graph.hpp"
#include "cliquemm/network.hpp"
#include "cliquemm/player.hpp"

namespace cliquemm {

/// Ground-truth world state plus the per-player views and the simulated
/// network. Algorithms mutate player views only through legitimate
/// message flows; the global matching mirrors what the broadcasts carry
/// and exists for the centralized oracles.
class Simulation {
  public:
    Simulation(Graph g, Partition p, NetworkConfig cfg);

    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    const Graph& graph() const { return g_; }
    const Partition& partition() const { return part_; }
    const Matching& matching() const { return m_; }
    Cluster& net() { return net_; }
    const Cluster& net() const { return net_; }
    int n() const { return g_.vertex_count(); }
    int k() const { return part_.k; }

    PlayerState& player(int i) { return players_[static_cast<std::size_t>(i)]; }
    const PlayerState& player(int i) const { return players_[static_cast<std::size_t>(i)]; }
    const std::vector<PlayerState>& players() const { return players_; }

    /// Topology updates; free of communication (owners observe their own
    /// vertices' neighborhoods per the model).
    void apply_deletion(int u, int v);
    void apply_insertion(int u, int v);

    /// Record edge {u,v} as matched: mates at the owners, believed flags
    /// at every player, ground truth. Call only from code paths where all
    /// players legitimately learned the match.
    void commit_match(int u, int v);

    /// Remove a matched edge from the owners' views and the ground truth.
    /// Remote believed flags are corrected by the V_f broadcast.
    void drop_match(int u, int v);

    /// Forget the entire matching everywhere (baseline recomputation).
    void reset_matching();

    long long rounds_init = 0;

  private:
    Graph g_;
    Partition part_;
    Matching m_;
    Cluster net_;
    std::vector<PlayerState> players_;
};

}  // namespace cliquemm
