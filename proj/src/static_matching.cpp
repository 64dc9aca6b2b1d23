#include "cliquemm/static_matching.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace cliquemm {

namespace {

// Residual active adjacency, per player. Symmetric across players:
// residual[u] contains v iff residual[v] contains u at v's owner.
struct Residuals {
    // hosted vertex -> surviving active neighbors
    std::vector<std::map<int, std::set<int>>> per_player;

    long long local_edge_count(const PlayerState& ps) const {
        // Each edge is counted by the owner of its smaller endpoint.
        long long c = 0;
        for (const auto& [u, nbrs] : per_player[static_cast<std::size_t>(ps.me)]) {
            for (int v : nbrs) {
                if (u < v) ++c;
            }
        }
        return c;
    }
};

}  // namespace

std::vector<Edge> run_static_matching(Simulation& sim, const std::vector<std::uint8_t>& active,
                                      const EdgePredicate& active_edge, int active_vertex_count,
                                      const StaticOptions& opt) {
    Cluster& net = sim.net();
    PhaseScope phase(net, opt.phase_label);
    const int k = sim.k();

    Residuals res;
    res.per_player.resize(static_cast<std::size_t>(k) + 1);
    for (int i = 1; i <= k; ++i) {
        const PlayerState& ps = sim.player(i);
        for (int u : ps.hosted) {
            if (!active[static_cast<std::size_t>(u)]) continue;
            std::set<int> nbrs;
            for (int v : ps.local_adj.at(u)) {
                if (active[static_cast<std::size_t>(v)] && active_edge(u, v)) nbrs.insert(v);
            }
            res.per_player[static_cast<std::size_t>(i)][u] = std::move(nbrs);
        }
    }

    const int cap = opt.cap_multiplier * ceil_log2(std::max(active_vertex_count, 4));
    std::vector<Edge> new_matches;
    int iterations = 0;

    while (true) {
        // Residual edges are distributed knowledge; each player reports
        // one count to player 1, which broadcasts the total.
        std::vector<long long> counts(static_cast<std::size_t>(k) + 1, 0);
        for (int i = 1; i <= k; ++i) counts[static_cast<std::size_t>(i)] =
            res.local_edge_count(sim.player(i));
        const long long residual_edges = net.aggregate_count(counts);
        if (residual_edges == 0) break;
        if (++iterations > cap) {
            throw IterationCapExceeded("static matching exceeded " + std::to_string(cap) +
                                       " iterations with " + std::to_string(residual_edges) +
                                       " residual edges");
        }

        StaticIterationTrace it;
        it.residual_edges_before = residual_edges;

        // Edge Sampling: every vertex with an incident residual edge marks
        // one uniformly; the choice is a directed edge shipped to the other
        // endpoint's owner via spreading.
        std::vector<std::vector<Token>> out(static_cast<std::size_t>(k) + 1);
        for (int i = 1; i <= k; ++i) {
            PlayerState& ps = sim.player(i);
            for (const auto& [u, nbrs] : res.per_player[static_cast<std::size_t>(i)]) {
                if (nbrs.empty()) continue;
                std::vector<int> pool(nbrs.begin(), nbrs.end());
                const int v = pool[static_cast<std::size_t>(ps.vertex_rng(u).below(pool.size()))];
                out[static_cast<std::size_t>(i)].push_back({Tag::Marked, u, v, 0});
            }
        }
        SpreadResult marked = net.spreading(out);
        it.tokens_marked = static_cast<long long>(marked.tokens.size());

        // Incoming marked edges per vertex, visible to the vertex's owner.
        std::map<int, std::vector<int>> in_marked;  // u -> sorted senders v'
        for (const Envelope& e : marked.tokens) {
            in_marked[e.tok.b].push_back(e.tok.a);
            it.marked.emplace_back(e.tok.a, e.tok.b);
        }
        for (auto& [u, senders] : in_marked) std::sort(senders.begin(), senders.end());

        // Reduce In-degrees: every vertex with incoming marked edges
        // selects one uniformly.
        out.assign(static_cast<std::size_t>(k) + 1, {});
        for (int i = 1; i <= k; ++i) {
            PlayerState& ps = sim.player(i);
            for (const auto& [u, nbrs] : res.per_player[static_cast<std::size_t>(i)]) {
                auto in = in_marked.find(u);
                if (in == in_marked.end()) continue;
                const auto& senders = in->second;
                const int vp =
                    senders[static_cast<std::size_t>(ps.vertex_rng(u).below(senders.size()))];
                out[static_cast<std::size_t>(i)].push_back({Tag::Selected, vp, u, 0});
            }
        }
        SpreadResult selected = net.spreading(out);
        it.tokens_selected = static_cast<long long>(selected.tokens.size());

        // Bar graph: edges that were marked (as v'->u) and selected back.
        std::set<Edge> bar;
        for (const Envelope& e : selected.tokens) bar.insert(make_edge(e.tok.a, e.tok.b));
        std::map<int, std::vector<int>> bar_adj;
        for (const auto& [u, v] : bar) {
            bar_adj[u].push_back(v);
            bar_adj[v].push_back(u);
            it.bar_edges.emplace_back(u, v);
        }
        for (auto& [u, nbrs] : bar_adj) std::sort(nbrs.begin(), nbrs.end());

        // Match-up: every bar vertex requests one incident bar edge; the
        // edge is matched iff both endpoints requested it.
        out.assign(static_cast<std::size_t>(k) + 1, {});
        for (int i = 1; i <= k; ++i) {
            PlayerState& ps = sim.player(i);
            for (const auto& [u, nbrs] : res.per_player[static_cast<std::size_t>(i)]) {
                auto ba = bar_adj.find(u);
                if (ba == bar_adj.end()) continue;
                const auto& cands = ba->second;
                const int v =
                    cands[static_cast<std::size_t>(ps.vertex_rng(u).below(cands.size()))];
                out[static_cast<std::size_t>(i)].push_back({Tag::Request, u, v, 0});
            }
        }
        SpreadResult requests = net.spreading(out);
        it.tokens_request = static_cast<long long>(requests.tokens.size());

        std::set<std::pair<int, int>> requested;
        for (const Envelope& e : requests.tokens) {
            requested.insert({e.tok.a, e.tok.b});
            it.requests.emplace_back(e.tok.a, e.tok.b);
        }
        std::vector<Edge> matched_now;
        for (const auto& [u, v] : requested) {
            if (u < v && requested.count({v, u})) matched_now.emplace_back(u, v);
        }

        // Pruning: the owner of the smaller endpoint is responsible for a
        // matched edge and broadcasts it; everyone discards incident edges
        // from the residual graph and updates its matched flags.
        out.assign(static_cast<std::size_t>(k) + 1, {});
        for (const auto& [u, v] : matched_now) {
            const int responsible = sim.partition().owner_of(u);
            out[static_cast<std::size_t>(responsible)].push_back({Tag::Matched, u, v, 0});
        }
        SpreadResult pruning = net.spreading(out);
        it.tokens_matched = static_cast<long long>(pruning.tokens.size());

        auto drop_from_residual = [&](int w) {
            auto& mine = res.per_player[static_cast<std::size_t>(sim.partition().owner_of(w))];
            auto hit = mine.find(w);
            if (hit == mine.end()) return;
            const std::vector<int> nbrs(hit->second.begin(), hit->second.end());
            hit->second.clear();
            for (int x : nbrs) {
                auto& theirs = res.per_player[static_cast<std::size_t>(sim.partition().owner_of(x))];
                auto hx = theirs.find(x);
                if (hx != theirs.end()) hx->second.erase(w);
            }
        };
        for (const Envelope& e : pruning.tokens) {
            const int u = e.tok.a;
            const int v = e.tok.b;
            sim.commit_match(u, v);
            new_matches.emplace_back(u, v);
            it.matched.emplace_back(u, v);
            it.matched_emitter.push_back(e.origin);
            drop_from_residual(u);
            drop_from_residual(v);
        }

        long long after = 0;
        for (int i = 1; i <= k; ++i) after += res.local_edge_count(sim.player(i));
        it.residual_edges_after = after;
        if (opt.trace) opt.trace->iterations.push_back(std::move(it));
    }

    std::sort(new_matches.begin(), new_matches.end());
    return new_matches;
}

std::vector<Edge> initialize_matching(Simulation& sim, const StaticOptions& opt) {
    std::vector<std::uint8_t> active(static_cast<std::size_t>(sim.n()) + 1, 1);
    const long long before = sim.net().metrics().rounds;
    auto matches = run_static_matching(
        sim, active, [](int, int) { return true; }, sim.n(), opt);
    sim.rounds_init = sim.net().metrics().rounds - before;
    return matches;
}

}  // namespace cliquemm
