#include "cliquemm/network.hpp"

#include <algorithm>
#include <cassert>

namespace cliquemm {

const char* tag_name(Tag t) {
    switch (t) {
        case Tag::Marked: return "MARKED";
        case Tag::Selected: return "SELECTED";
        case Tag::Request: return "REQUEST";
        case Tag::Matched: return "MATCHED";
        case Tag::MatchUp: return "MATCH_UP";
        case Tag::VfId: return "VF_ID";
        case Tag::Edge: return "EDGE";
        case Tag::Count: return "COUNT";
        case Tag::Ranked: return "RANKED";
    }
    return "?";
}

Cluster::Cluster(NetworkConfig cfg) : cfg_(cfg) {
    if (cfg_.k < 2) throw SimError("network needs k >= 2 players");
    if (cfg_.beta < 1) throw SimError("bandwidth parameter beta must be >= 1");
}

void Cluster::check_token(const Token& t) const {
    const int bound = std::max(cfg_.n, cfg_.k);
    for (int field : {t.a, t.b, t.c}) {
        if (field < 0 || field > bound) {
            throw SimError("token field " + std::to_string(field) + " outside ID universe [0," +
                           std::to_string(bound) + "] (tag " + tag_name(t.tag) + ")");
        }
    }
}

int Cluster::link_target(int player, int link_index) const {
    // Links of a player are its k-1 peers in ascending ID order.
    int t = link_index + 1;
    if (t >= player) ++t;
    return t;
}

void Cluster::queue(int from, int to, const Token& t) {
    assert(from >= 1 && from <= cfg_.k && to >= 1 && to <= cfg_.k && from != to);
    outbox_[{from, to}].push_back(t);
}

std::vector<std::vector<Envelope>> Cluster::run_round() {
    const int budget = cfg_.link_budget();
    long long total = 0;
    for (const auto& [link, tokens] : outbox_) {
        if (static_cast<int>(tokens.size()) > budget) {
            throw BandwidthViolation(link.first, link.second, static_cast<int>(tokens.size()),
                                     budget);
        }
        for (const Token& t : tokens) check_token(t);
        total += static_cast<long long>(tokens.size());
        metrics_.max_link_load = std::max(metrics_.max_link_load, static_cast<int>(tokens.size()));
    }
    std::vector<std::vector<Envelope>> inbox(static_cast<std::size_t>(cfg_.k) + 1);
    for (const auto& [link, tokens] : outbox_) {
        for (const Token& t : tokens) {
            inbox[static_cast<std::size_t>(link.second)].push_back({link.first, t});
        }
    }
    outbox_.clear();
    metrics_.rounds += 1;
    metrics_.tokens_sent += total;
    auto& ph = metrics_.per_phase[phase_];
    ph.rounds += 1;
    ph.tokens += total;
    return inbox;
}

namespace detail {

std::vector<std::vector<long long>> redistribution_ranks(const std::vector<int>& x_prime) {
    const std::size_t k = x_prime.size() - 1;
    std::vector<std::vector<long long>> ranks(k + 1);
    long long prefix = 0;
    for (std::size_t a = 1; a <= k; ++a) {
        for (int j = 1; j <= x_prime[a]; ++j) ranks[a].push_back(prefix + j);
        prefix += x_prime[a];
    }
    return ranks;
}

}  // namespace detail

SpreadResult Cluster::spreading(const std::vector<std::vector<Token>>& per_player) {
    assert(per_player.size() == static_cast<std::size_t>(cfg_.k) + 1);
    const int k = cfg_.k;
    const int beta = cfg_.beta;

    long long total = 0;
    for (const auto& v : per_player) total += static_cast<long long>(v.size());
    SpreadResult res;
    if (total == 0) return res;

    const int batch_sz = beta * (k - 1);
    // Provenance (origin, index) of the tokens each player owns after the
    // redistribution stage; payloads are looked up on demand.
    using Prov = std::pair<int, int>;
    std::vector<std::vector<Prov>> owned(static_cast<std::size_t>(k) + 1);
    auto payload = [&](const Prov& p) -> const Token& {
        return per_player[static_cast<std::size_t>(p.first)][static_cast<std::size_t>(p.second)];
    };

    int rounds = 0;

    // Redistribution, full batches: each player ships batches of exactly
    // beta*(k-1) tokens, one batch per round, beta per link.
    std::vector<int> full_batches(static_cast<std::size_t>(k) + 1, 0);
    int stage_a = 0;
    for (int i = 1; i <= k; ++i) {
        full_batches[static_cast<std::size_t>(i)] =
            static_cast<int>(per_player[static_cast<std::size_t>(i)].size()) / batch_sz;
        stage_a = std::max(stage_a, full_batches[static_cast<std::size_t>(i)]);
    }
    for (int r = 0; r < stage_a; ++r) {
        for (int i = 1; i <= k; ++i) {
            if (r >= full_batches[static_cast<std::size_t>(i)]) continue;
            for (int j = 0; j < batch_sz; ++j) {
                const int idx = r * batch_sz + j;
                const int target = link_target(i, j % (k - 1));
                queue(i, target, payload({i, idx}));
                owned[static_cast<std::size_t>(target)].push_back({i, idx});
            }
        }
        run_round();
        ++rounds;
    }

    // Residual-count exchange: every player announces x'_i.
    std::vector<int> x_prime(static_cast<std::size_t>(k) + 1, 0);
    for (int i = 1; i <= k; ++i) {
        x_prime[static_cast<std::size_t>(i)] =
            static_cast<int>(per_player[static_cast<std::size_t>(i)].size()) % batch_sz;
    }
    for (int i = 1; i <= k; ++i) {
        for (int t = 1; t <= k; ++t) {
            if (t == i) continue;
            queue(i, t, make_count(x_prime[static_cast<std::size_t>(i)], cfg_.n));
        }
    }
    run_round();
    ++rounds;

    // Rank distribution: the residual token with global rank r goes to
    // player (r mod k) + 1. Consecutive ranks spread the load so one
    // round always suffices.
    auto ranks = detail::redistribution_ranks(x_prime);
    bool any_cross = false;
    for (int a = 1; a <= k; ++a) {
        const int base = full_batches[static_cast<std::size_t>(a)] * batch_sz;
        for (std::size_t j = 0; j < ranks[static_cast<std::size_t>(a)].size(); ++j) {
            const long long r = ranks[static_cast<std::size_t>(a)][j];
            const int dest = static_cast<int>(r % k) + 1;
            const Prov p{a, base + static_cast<int>(j)};
            owned[static_cast<std::size_t>(dest)].push_back(p);
            if (dest != a) {
                queue(a, dest, payload(p));
                any_cross = true;
            }
        }
    }
    if (any_cross) {
        run_round();
        ++rounds;
    }

    // Dissemination: every player broadcasts its owned tokens, beta per
    // link per round, all players in parallel.
    int dissem = 0;
    for (int i = 1; i <= k; ++i) {
        const int mine = static_cast<int>(owned[static_cast<std::size_t>(i)].size());
        dissem = std::max(dissem, (mine + beta - 1) / beta);
    }
    for (int r = 0; r < dissem; ++r) {
        for (int i = 1; i <= k; ++i) {
            const auto& mine = owned[static_cast<std::size_t>(i)];
            const int lo = r * beta;
            const int hi = std::min<int>((r + 1) * beta, static_cast<int>(mine.size()));
            for (int s = lo; s < hi; ++s) {
                for (int t = 1; t <= k; ++t) {
                    if (t == i) continue;
                    queue(i, t, payload(mine[static_cast<std::size_t>(s)]));
                }
            }
        }
        run_round();
        ++rounds;
    }

    res.rounds = rounds;
    res.tokens.reserve(static_cast<std::size_t>(total));
    for (int i = 1; i <= k; ++i) {
        for (const Token& t : per_player[static_cast<std::size_t>(i)]) {
            res.tokens.push_back({i, t});
        }
    }
    return res;
}

SpreadResult Cluster::broadcast_all(const std::vector<std::vector<Token>>& per_player) {
    return spreading(per_player);
}

SpreadResult Cluster::gather_at(int dest, const std::vector<std::vector<Token>>& per_player) {
    assert(dest >= 1 && dest <= cfg_.k);
    (void)dest;  // round cost is identical; non-dest players discard
    return spreading(per_player);
}

long long Cluster::aggregate_count(const std::vector<long long>& per_player_values) {
    assert(per_player_values.size() == static_cast<std::size_t>(cfg_.k) + 1);
    long long total = 0;
    for (int i = 1; i <= cfg_.k; ++i) total += per_player_values[static_cast<std::size_t>(i)];
    for (int i = 2; i <= cfg_.k; ++i) {
        queue(i, 1, make_count(per_player_values[static_cast<std::size_t>(i)], cfg_.n));
    }
    run_round();
    for (int t = 2; t <= cfg_.k; ++t) queue(1, t, make_count(total, cfg_.n));
    run_round();
    return total;
}

std::pair<std::vector<std::vector<Envelope>>, int>
Cluster::deliver_direct(const std::vector<std::map<int, std::vector<Token>>>& out) {
    assert(out.size() == static_cast<std::size_t>(cfg_.k) + 1);
    const int k = cfg_.k;
    const int beta = cfg_.beta;

    std::vector<std::vector<Envelope>> inbox(static_cast<std::size_t>(k) + 1);
    // Canonical content, independent of pacing.
    for (int from = 1; from <= k; ++from) {
        for (const auto& [to, tokens] : out[static_cast<std::size_t>(from)]) {
            for (const Token& t : tokens) inbox[static_cast<std::size_t>(to)].push_back({from, t});
        }
    }

    std::map<std::pair<int, int>, std::size_t> pos;
    int rounds = 0;
    bool remaining = true;
    while (remaining) {
        remaining = false;
        bool queued = false;
        for (int from = 1; from <= k; ++from) {
            for (const auto& [to, tokens] : out[static_cast<std::size_t>(from)]) {
                if (to == from) continue;  // local hand-off, no link
                auto& p = pos[{from, to}];
                const std::size_t hi = std::min(p + static_cast<std::size_t>(beta), tokens.size());
                for (; p < hi; ++p) {
                    queue(from, to, tokens[p]);
                    queued = true;
                }
                if (p < tokens.size()) remaining = true;
            }
        }
        if (queued) {
            run_round();
            ++rounds;
        }
    }
    return {std::move(inbox), rounds};
}

}  // namespace cliquemm
