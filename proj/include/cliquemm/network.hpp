#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cliquemm/errors.hpp"
#include "cliquemm/token.hpp"

namespace cliquemm {

struct NetworkConfig {
    int k = 2;         // player count
    int beta = 1;      // bandwidth parameter
    int n = 0;         // vertex-ID universe
    std::uint64_t master_seed = 0;

    int link_budget() const { return beta; }  // tokens per ordered link per round
};

struct PhaseStats {
    long long rounds = 0;
    long long tokens = 0;
};

struct Metrics {
    long long rounds = 0;
    long long tokens_sent = 0;
    int max_link_load = 0;
    std::map<std::string, PhaseStats> per_phase;
};

/// A token together with the player that sent it.
struct Envelope {
    int origin = 0;
    Token tok;
};

struct SpreadResult {
    std::vector<Envelope> tokens;  // canonical order: (origin, queue position)
    int rounds = 0;
};

/// Round-synchronous clique network. Players queue tokens into the
/// outbox; run_round() delivers everything and charges the metrics.
/// Per-link queues above the budget raise BandwidthViolation.
class Cluster {
  public:
    explicit Cluster(NetworkConfig cfg);

    const NetworkConfig& config() const { return cfg_; }
    Metrics& metrics() { return metrics_; }
    const Metrics& metrics() const { return metrics_; }

    void set_phase(std::string label) { phase_ = std::move(label); }
    const std::string& phase() const { return phase_; }

    void queue(int from, int to, const Token& t);

    /// One synchronous round: validates budgets, delivers all queued
    /// tokens, and returns per-player inboxes (index 1..k).
    std::vector<std::vector<Envelope>> run_round();

    /// Two-stage redistribute-then-broadcast dissemination. Every player
    /// ends up holding the union of all inputs; the returned list is that
    /// union in a canonical order. N = 0 short-circuits to 0 rounds.
    SpreadResult spreading(const std::vector<std::vector<Token>>& per_player);

    /// Alias over spreading for call sites that broadcast.
    SpreadResult broadcast_all(const std::vector<std::vector<Token>>& per_player);

    /// Spreading followed by discarding at every player but dest; the
    /// round cost is identical to spreading.
    SpreadResult gather_at(int dest, const std::vector<std::vector<Token>>& per_player);

    /// Sum of one per-player value: players send a Count token to player 1,
    /// player 1 broadcasts the total. Two rounds, charged.
    long long aggregate_count(const std::vector<long long>& per_player_values);

    /// Point-to-point sends paced at beta tokens per link per round.
    /// out[i] maps destination -> tokens from player i. Self-sends are
    /// delivered without using a link. Returns inboxes (canonical order:
    /// sender, then queue position) and the number of rounds used.
    std::pair<std::vector<std::vector<Envelope>>, int>
    deliver_direct(const std::vector<std::map<int, std::vector<Token>>>& out);

  private:
    void check_token(const Token& t) const;
    int link_target(int player, int link_index) const;

    NetworkConfig cfg_;
    Metrics metrics_;
    std::map<std::pair<int, int>, std::vector<Token>> outbox_;
    std::string phase_ = "default";
};

/// Scoped metrics label.
class PhaseScope {
  public:
    PhaseScope(Cluster& c, std::string label) : c_(c), prev_(c.phase()) {
        c_.set_phase(std::move(label));
    }
    ~PhaseScope() { c_.set_phase(prev_); }

  private:
    Cluster& c_;
    std::string prev_;
};

namespace detail {

/// Redistribution ranks r(m_j^a) = sum_{i<a} x'_i + j for residual counts
/// x' (index 1..k). Returned per player as the list of global ranks of
/// its residual tokens. Together they form a permutation of [1, sum x'].
std::vector<std::vector<long long>> redistribution_ranks(const std::vector<int>& x_prime);

}  // namespace detail

}  // namespace cliquemm
