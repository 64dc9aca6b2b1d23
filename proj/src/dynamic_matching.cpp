#include "cliquemm/dynamic_matching.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "cliquemm/static_matching.hpp"

namespace cliquemm {

const char* adversary_mode_name(AdversaryMode m) {
    return m == AdversaryMode::Oblivious ? "oblivious" : "adaptive";
}

Matching deterministic_local_matching_g(std::vector<Edge> edges) {
    for (auto& e : edges) e = make_edge(e.first, e.second);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    Matching m;
    for (const auto& [u, v] : edges) {
        if (!m.is_matched(u) && !m.is_matched(v)) m.add(u, v);
    }
    return m;
}

namespace {

/// Free V'-neighbors of u as seen by u's owner: unmatched, outside V_f.
/// (Any unmatched non-V_f neighbor of a V_f vertex is in V' by
/// definition.) Sorted.
std::vector<int> free_vprime_neighbors(const Simulation& sim, int owner, int u,
                                       const std::set<int>& vf) {
    std::vector<int> out;
    const PlayerState& ps = sim.player(owner);
    for (int w : ps.local_adj.at(u)) {
        if (!ps.believes_matched(w) && !vf.count(w)) out.push_back(w);
    }
    return out;
}

/// T_P for one player: hosted V_f vertices that are free and have at
/// least 2*gamma+1 free neighbors in V'.
std::vector<int> compute_t_p(const Simulation& sim, int p, const std::vector<int>& vf_sorted,
                             const std::set<int>& vf, int gamma) {
    std::vector<int> t;
    const PlayerState& ps = sim.player(p);
    for (int u : vf_sorted) {
        if (!ps.hosts(u)) continue;
        if (ps.believes_matched(u)) continue;
        if (static_cast<int>(free_vprime_neighbors(sim, p, u, vf).size()) >= 2 * gamma + 1) {
            t.push_back(u);
        }
    }
    return t;
}

void phase1_loop(Simulation& sim, const std::vector<int>& vf_sorted, const std::set<int>& vf,
                 const UpdateConfig& cfg, std::vector<std::vector<int>>& t_p,
                 MinibatchReport& report) {
    Cluster& net = sim.net();
    PhaseScope phase(net, "del:phase1");
    const int k = sim.k();
    const int gamma = report.gamma;
    const long long threshold =
        static_cast<long long>(cfg.c1) * ceil_log2(std::max(sim.n(), 2));
    const int cap = cfg.iteration_cap_multiplier *
                    ceil_log2(std::max(net.config().beta * net.config().k, 4));

    for (int p = 1; p <= k; ++p) t_p[static_cast<std::size_t>(p)] =
        compute_t_p(sim, p, vf_sorted, vf, gamma);

    while (true) {
        std::vector<long long> sizes(static_cast<std::size_t>(k) + 1, 0);
        for (int p = 1; p <= k; ++p) sizes[static_cast<std::size_t>(p)] =
            static_cast<long long>(t_p[static_cast<std::size_t>(p)].size());
        const long long t_total = net.aggregate_count(sizes);
        if (t_total < threshold) break;
        if (report.phase1_iterations + 1 > cap) {
            throw IterationCapExceeded("phase 1 exceeded " + std::to_string(cap) +
                                       " iterations with |T|=" + std::to_string(t_total));
        }
        ++report.phase1_iterations;
        Phase1Trace::Iteration trace_iter;

        // Every T-vertex aims one match-up request at a player chosen
        // proportionally to its share of u's free V'-neighbors; the target
        // then samples the actual neighbor uniformly. The two-step draw is
        // uniform over u's free V'-neighbors.
        std::vector<std::vector<Token>> out(static_cast<std::size_t>(k) + 1);
        for (int p = 1; p <= k; ++p) {
            PlayerState& ps = sim.player(p);
            for (int u : t_p[static_cast<std::size_t>(p)]) {
                std::map<int, long long> by_owner;
                for (int w : free_vprime_neighbors(sim, p, u, vf)) ++by_owner[ps.owner_of(w)];
                std::vector<int> owners;
                std::vector<long long> weights;
                for (const auto& [o, c] : by_owner) {
                    owners.push_back(o);
                    weights.push_back(c);
                }
                const int target = owners[weighted_index(weights, ps.vertex_rng(u))];
                out[static_cast<std::size_t>(p)].push_back({Tag::MatchUp, u, target, 0});
            }
        }
        SpreadResult spread = net.spreading(out);

        // Target side: sample one hosted free V'-neighbor per request;
        // a vertex receiving two or more requests matches none of them.
        std::map<int, std::vector<int>> requests_at;  // target player -> sorted T-vertices
        for (const Envelope& e : spread.tokens) requests_at[e.tok.b].push_back(e.tok.a);
        std::map<int, std::vector<int>> proposals;  // V'-vertex -> proposers
        for (auto& [target, list] : requests_at) {
            std::sort(list.begin(), list.end());
            PlayerState& tp = sim.player(target);
            for (int u : list) {
                std::vector<int> cands;
                for (int w : sim.graph().neighbors(u)) {
                    if (tp.partition->owner_of(w) != target) continue;
                    if (tp.believes_matched(w) || vf.count(w)) continue;
                    cands.push_back(w);
                }
                // The sender sampled this player with weight equal to the
                // very same candidate count, so the set is non-empty.
                if (cands.empty()) {
                    throw SimError("match-up request for " + std::to_string(u) +
                                   " reached a player with no candidate neighbor");
                }
                const int v = cands[static_cast<std::size_t>(tp.player_rng.below(cands.size()))];
                proposals[v].push_back(u);
                trace_iter.proposals.emplace_back(u, v);
            }
        }

        out.assign(static_cast<std::size_t>(k) + 1, {});
        for (const auto& [v, us] : proposals) {
            if (us.size() != 1) continue;
            const Edge e = make_edge(us.front(), v);
            out[static_cast<std::size_t>(sim.partition().owner_of(v))].push_back(
                {Tag::Matched, e.first, e.second, 0});
        }
        SpreadResult matched = net.spreading(out);
        for (const Envelope& e : matched.tokens) {
            sim.commit_match(e.tok.a, e.tok.b);
            trace_iter.matched.emplace_back(e.tok.a, e.tok.b);
        }

        // Prune: drop matched T-vertices and those whose V'-free count
        // fell below 2*gamma+1.
        for (int p = 1; p <= k; ++p) {
            auto& mine = t_p[static_cast<std::size_t>(p)];
            std::vector<int> keep;
            for (int u : mine) {
                if (sim.player(p).believes_matched(u)) continue;
                if (static_cast<int>(free_vprime_neighbors(sim, p, u, vf).size()) <
                    2 * gamma + 1) {
                    continue;
                }
                keep.push_back(u);
            }
            mine = std::move(keep);
        }
        if (cfg.phase1_trace) cfg.phase1_trace->iterations.push_back(std::move(trace_iter));
    }
}

void phase1_finish(Simulation& sim, const std::set<int>& vf, const UpdateConfig& cfg,
                   const std::vector<std::vector<int>>& t_p, MinibatchReport& report) {
    Cluster& net = sim.net();
    PhaseScope phase(net, "del:phase1-finish");
    const int k = sim.k();
    const int log2n = ceil_log2(std::max(sim.n(), 2));
    const int sample_cap = std::max(cfg.c2 * log2n * log2n, cfg.c1 * log2n + 1);

    // Sample s free-edge endpoints per remaining T-vertex and spread the
    // sampled subgraph S; every player then derives the same matching.
    std::vector<std::vector<Token>> out(static_cast<std::size_t>(k) + 1);
    for (int p = 1; p <= k; ++p) {
        PlayerState& ps = sim.player(p);
        for (int u : t_p[static_cast<std::size_t>(p)]) {
            const auto cands = free_vprime_neighbors(sim, p, u, vf);
            const std::size_t s =
                std::min(cands.size(), static_cast<std::size_t>(sample_cap));
            for (int w : sample_k(cands, s, ps.vertex_rng(u))) {
                out[static_cast<std::size_t>(p)].push_back({Tag::Edge, u, w, 0});
            }
        }
    }
    SpreadResult spread = net.spreading(out);
    if (spread.tokens.empty()) return;

    // T-vertices in ascending ID order, each matched to its least sampled
    // free neighbor not yet taken.
    std::map<int, std::vector<int>> sampled;  // T-vertex -> sorted neighbors
    for (const Envelope& e : spread.tokens) sampled[e.tok.a].push_back(e.tok.b);
    std::set<int> taken;
    for (auto& [u, ws] : sampled) {
        std::sort(ws.begin(), ws.end());
        int chosen = 0;
        for (int w : ws) {
            if (!taken.count(w)) {
                chosen = w;
                break;
            }
        }
        if (chosen == 0) {
            // All sampled neighbors taken: reported, and u falls through
            // to L for phase 2.
            ++report.sample_deficits;
            continue;
        }
        taken.insert(chosen);
        sim.commit_match(u, chosen);
    }
}

void phase2_oblivious(Simulation& sim, const std::vector<int>& l_vertices,
                      const UpdateConfig& cfg) {
    const std::set<int> l_set(l_vertices.begin(), l_vertices.end());
    auto free_of = [&](int v) { return !sim.matching().is_matched(v); };

    std::vector<std::uint8_t> active(static_cast<std::size_t>(sim.n()) + 1, 0);
    int n_act = 0;
    for (int v = 1; v <= sim.n(); ++v) {
        if (!free_of(v)) continue;
        bool act = l_set.count(v) > 0;
        if (!act) {
            for (int u : sim.graph().neighbors(v)) {
                if (l_set.count(u) && free_of(u)) {
                    act = true;
                    break;
                }
            }
        }
        if (act) {
            active[static_cast<std::size_t>(v)] = 1;
            ++n_act;
        }
    }
    StaticOptions opt;
    opt.cap_multiplier = cfg.iteration_cap_multiplier;
    opt.phase_label = "del:phase2";
    run_static_matching(
        sim, active,
        [&](int a, int b) {
            return free_of(a) && free_of(b) && (l_set.count(a) || l_set.count(b));
        },
        n_act, opt);
}

void phase2_adaptive(Simulation& sim, const std::vector<int>& l_vertices,
                     const UpdateConfig& cfg) {
    (void)cfg;
    Cluster& net = sim.net();
    PhaseScope phase(net, "del:phase2");
    const int k = sim.k();
    auto free_of = [&](int v) { return !sim.matching().is_matched(v); };

    // G_L: free edges incident to L, emitted by the owner of the smaller
    // endpoint and gathered at player 1.
    std::set<Edge> gl;
    for (int v : l_vertices) {
        for (int w : sim.graph().neighbors(v)) {
            if (free_of(w)) gl.insert(make_edge(v, w));
        }
    }
    std::vector<std::vector<Token>> out(static_cast<std::size_t>(k) + 1);
    for (const auto& [u, v] : gl) {
        out[static_cast<std::size_t>(sim.partition().owner_of(u))].push_back(
            {Tag::Edge, u, v, 0});
    }
    SpreadResult gathered = net.gather_at(1, out);

    // Player 1 computes the matching locally and disseminates it.
    std::vector<Edge> edges;
    edges.reserve(gathered.tokens.size());
    for (const Envelope& e : gathered.tokens) edges.emplace_back(e.tok.a, e.tok.b);
    const Matching local = deterministic_local_matching_g(std::move(edges));

    out.assign(static_cast<std::size_t>(k) + 1, {});
    for (const auto& [u, v] : local.edges()) {
        out[1].push_back({Tag::Matched, u, v, 0});
    }
    SpreadResult spread = net.spreading(out);
    for (const Envelope& e : spread.tokens) sim.commit_match(e.tok.a, e.tok.b);
}

}  // namespace

std::vector<Edge> high_free_degree_fastpath(Simulation& sim, const std::vector<int>& v_f,
                                            const UpdateConfig& cfg) {
    if (!cfg.fastpath_enabled) {
        throw PreconditionFailed("high-free-degree fastpath invoked without its flag");
    }
    Cluster& net = sim.net();
    PhaseScope phase(net, "del:fastpath");
    const int k = sim.k();
    const std::set<int> vf(v_f.begin(), v_f.end());

    std::vector<int> order(v_f.begin(), v_f.end());
    std::sort(order.begin(), order.end());
    const int half = (static_cast<int>(order.size()) + 1) / 2;

    // Greedy pair-up, every player over its own hosted V'-vertices.
    std::vector<std::map<int, int>> pair_of(static_cast<std::size_t>(k) + 1);
    for (int p = 1; p <= k; ++p) {
        PlayerState& ps = sim.player(p);
        std::set<int> taken;
        for (int v : order) {
            int best = 0;
            for (int w : sim.graph().neighbors(v)) {
                if (!ps.hosts(w) || ps.believes_matched(w) || vf.count(w) || taken.count(w)) {
                    continue;
                }
                if (best == 0 || w < best) best = w;
            }
            if (best != 0) {
                pair_of[static_cast<std::size_t>(p)][v] = best;
                taken.insert(best);
            }
        }
    }

    // Candidate edges for v_i and v_{i+half} go directly to player
    // (i mod k) + 1; paced at beta per link per round.
    std::vector<std::map<int, std::vector<Token>>> direct(static_cast<std::size_t>(k) + 1);
    auto target_of_index = [&](int idx) { return (idx % k) + 1; };
    for (int p = 1; p <= k; ++p) {
        for (int idx = 1; idx <= half; ++idx) {
            const int dest = target_of_index(idx);
            for (int slot : {idx - 1, idx - 1 + half}) {
                if (slot >= static_cast<int>(order.size())) continue;
                const int v = order[static_cast<std::size_t>(slot)];
                auto it = pair_of[static_cast<std::size_t>(p)].find(v);
                if (it == pair_of[static_cast<std::size_t>(p)].end()) continue;
                direct[static_cast<std::size_t>(p)][dest].push_back({Tag::Edge, v, it->second, 0});
            }
        }
    }
    auto [inbox, rounds] = net.deliver_direct(direct);
    (void)rounds;

    // Filtering: keep one edge per assigned vertex (least neighbor ID),
    // then broadcast the matched edges.
    std::vector<std::map<int, std::vector<Token>>> announce(static_cast<std::size_t>(k) + 1);
    std::vector<Edge> matched;
    for (int j = 1; j <= k; ++j) {
        std::map<int, int> best;  // assigned vertex -> least proposed neighbor
        for (const Envelope& e : inbox[static_cast<std::size_t>(j)]) {
            auto it = best.find(e.tok.a);
            if (it == best.end() || e.tok.b < it->second) best[e.tok.a] = e.tok.b;
        }
        for (const auto& [v, w] : best) {
            matched.push_back(make_edge(v, w));
            for (int t = 1; t <= k; ++t) {
                if (t == j) continue;
                announce[static_cast<std::size_t>(j)][t].push_back({Tag::Matched, v, w, 0});
            }
        }
    }
    net.deliver_direct(announce);
    std::sort(matched.begin(), matched.end());
    for (const auto& [u, v] : matched) sim.commit_match(u, v);
    return matched;
}

std::vector<Edge> handle_insertions(Simulation& sim, const std::vector<Edge>& inserted,
                                    const UpdateConfig& cfg) {
    (void)cfg;
    Cluster& net = sim.net();
    PhaseScope phase(net, "ins");
    const int k = sim.k();

    // The owner of the smaller endpoint knows both matched flags (every
    // matching change is globally disseminated) and vouches free-free
    // inserted edges; edges touching a matched vertex need no action.
    std::vector<Edge> cands;
    for (const auto& e : inserted) {
        const Edge ne = make_edge(e.first, e.second);
        const PlayerState& ps = sim.player(sim.partition().owner_of(ne.first));
        if (!ps.believes_matched(ne.first) && !ps.believes_matched(ne.second)) {
            cands.push_back(ne);
        }
    }
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    if (cands.empty()) return {};

    std::vector<std::vector<Token>> out(static_cast<std::size_t>(k) + 1);
    for (const auto& [u, v] : cands) {
        out[static_cast<std::size_t>(sim.partition().owner_of(u))].push_back({Tag::Edge, u, v, 0});
    }
    SpreadResult spread = net.spreading(out);

    std::vector<Edge> edges;
    edges.reserve(spread.tokens.size());
    for (const Envelope& e : spread.tokens) edges.emplace_back(e.tok.a, e.tok.b);
    const Matching local = deterministic_local_matching_g(std::move(edges));
    auto matched = local.edges();
    for (const auto& [u, v] : matched) sim.commit_match(u, v);
    return matched;
}

MinibatchReport handle_deletion_minibatch(Simulation& sim, std::vector<Edge> d,
                                          const UpdateConfig& cfg, const BatchHooks* hooks) {
    MinibatchReport report;
    report.gamma = cfg.resolved_gamma(sim.net().config());
    if (d.empty()) return report;
    if (static_cast<int>(d.size()) > report.gamma) {
        throw PreconditionFailed("mini-batch of " + std::to_string(d.size()) +
                                 " exceeds gamma=" + std::to_string(report.gamma));
    }
    const long long rounds_before = sim.net().metrics().rounds;

    for (auto& e : d) e = make_edge(e.first, e.second);
    std::sort(d.begin(), d.end());
    for (const auto& [u, v] : d) {
        if (!sim.matching().contains_edge(u, v)) {
            throw NotMatchedEdge("mini-batch deletion {" + std::to_string(u) + "," +
                                 std::to_string(v) + "} is not a matched edge");
        }
    }
    std::set<int> vf;
    for (const auto& [u, v] : d) {
        sim.apply_deletion(u, v);
        sim.drop_match(u, v);
        vf.insert(u);
        vf.insert(v);
    }
    report.deleted = d;
    report.v_f.assign(vf.begin(), vf.end());
    if (hooks && hooks->before_minibatch) hooks->before_minibatch(sim, d);

    // Every player learns V_f (and thereby that those vertices are free).
    {
        PhaseScope phase(sim.net(), cfg.fastpath_enabled ? "del:fastpath" : "del:phase1");
        std::vector<std::vector<Token>> out(static_cast<std::size_t>(sim.k()) + 1);
        for (int v : report.v_f) {
            out[static_cast<std::size_t>(sim.partition().owner_of(v))].push_back(
                {Tag::VfId, v, 0, 0});
        }
        sim.net().spreading(out);
        for (int p = 1; p <= sim.k(); ++p) {
            for (int v : report.v_f) {
                sim.player(p).believed_matched[static_cast<std::size_t>(v)] = 0;
            }
        }
    }

    if (cfg.fastpath_enabled) {
        report.fastpath = true;
        high_free_degree_fastpath(sim, report.v_f, cfg);
    } else {
        std::vector<std::vector<int>> t_p(static_cast<std::size_t>(sim.k()) + 1);
        phase1_loop(sim, report.v_f, vf, cfg, t_p, report);
        phase1_finish(sim, vf, cfg, t_p, report);
        if (hooks && hooks->after_phase1) hooks->after_phase1(sim, report);

        std::vector<int> l_vertices;
        for (int v : report.v_f) {
            if (!sim.matching().is_matched(v)) l_vertices.push_back(v);
        }
        if (!l_vertices.empty()) {
            if (cfg.mode == AdversaryMode::Oblivious) {
                phase2_oblivious(sim, l_vertices, cfg);
            } else {
                phase2_adaptive(sim, l_vertices, cfg);
            }
        }
    }
    report.rounds = sim.net().metrics().rounds - rounds_before;
    if (hooks && hooks->after_minibatch) hooks->after_minibatch(sim, report);
    return report;
}

BatchStats process_batch(Simulation& sim, const UpdateBatch& b, const UpdateConfig& cfg,
                         const BatchHooks* hooks) {
    b.validate(sim.graph());
    BatchStats stats;
    const long long rounds_before = sim.net().metrics().rounds;
    const long long tokens_before = sim.net().metrics().tokens_sent;

    // Deletions of non-matched edges are silently dropped from the
    // pipeline; the topology update itself is free.
    std::vector<Edge> matched_deletions;
    for (const auto& e : b.deletions) {
        const Edge ne = make_edge(e.first, e.second);
        if (sim.matching().contains_edge(ne.first, ne.second)) {
            matched_deletions.push_back(ne);
        } else {
            sim.apply_deletion(ne.first, ne.second);
        }
    }

    const int gamma = cfg.resolved_gamma(sim.net().config());
    for (std::size_t lo = 0; lo < matched_deletions.size(); lo += static_cast<std::size_t>(gamma)) {
        const std::size_t hi =
            std::min(matched_deletions.size(), lo + static_cast<std::size_t>(gamma));
        std::vector<Edge> chunk(matched_deletions.begin() + static_cast<long>(lo),
                                matched_deletions.begin() + static_cast<long>(hi));
        auto report = handle_deletion_minibatch(sim, std::move(chunk), cfg, hooks);
        stats.sample_deficits += report.sample_deficits;
        stats.reports.push_back(std::move(report));
        ++stats.minibatches;
    }

    for (const auto& e : b.insertions) sim.apply_insertion(e.first, e.second);
    handle_insertions(sim, b.insertions, cfg);

    stats.rounds = sim.net().metrics().rounds - rounds_before;
    stats.tokens = sim.net().metrics().tokens_sent - tokens_before;
    return stats;
}

}  // namespace cliquemm
