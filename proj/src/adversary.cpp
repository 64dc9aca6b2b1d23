#include "cliquemm/adversary.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "cliquemm/rng.hpp"

namespace cliquemm {

LineSegmentGraph gen_line_segment_graph(int q) {
    if (q < 1) throw SimError("line-segment graph needs q >= 1");
    LineSegmentGraph out;
    out.q = q;
    out.graph = Graph(3 * q);
    for (int i = 1; i <= q; ++i) {
        out.graph.add_edge(LineSegmentGraph::vertex(i, 1), LineSegmentGraph::vertex(i, 2));
        out.graph.add_edge(LineSegmentGraph::vertex(i, 2), LineSegmentGraph::vertex(i, 3));
    }
    return out;
}

Partition gen_random_partition(int n, int k, std::uint64_t seed) {
    if (n < k || k < 2) throw SimError("random partition needs n >= k >= 2");
    Partition p;
    p.k = k;
    p.owner.assign(static_cast<std::size_t>(n) + 1, 0);
    RngStream rng(RngStream::mix(seed, 0x7061727469746e00ull));
    for (int v = 1; v <= n; ++v) {
        p.owner[static_cast<std::size_t>(v)] = 1 + static_cast<int>(rng.below(
                                                       static_cast<std::uint64_t>(k)));
    }
    return p;
}

Partition gen_domino_partition(int q, int k) {
    const int n = 3 * q;
    if (k < 3 || k % 3 != 0) {
        throw IndivisibleConfig("domino tiling needs k divisible by 3, got k=" +
                                std::to_string(k));
    }
    if (n % k != 0) {
        throw IndivisibleConfig("domino tiling needs k | 3q, got q=" + std::to_string(q) +
                                ", k=" + std::to_string(k));
    }
    const int strip = n / k;          // vertices per player
    const int per_column = q / strip;  // strips stacked in one column (= k/3)
    Partition p;
    p.k = k;
    p.owner.assign(static_cast<std::size_t>(n) + 1, 0);
    for (int i = 1; i <= k; ++i) {
        const int column = (i - 1) / per_column + 1;        // position within a segment
        const int row0 = ((i - 1) % per_column) * strip + 1;  // first segment of the strip
        for (int r = row0; r < row0 + strip; ++r) {
            p.owner[static_cast<std::size_t>(LineSegmentGraph::vertex(r, column))] = i;
        }
    }
    return p;
}

std::vector<UpdateBatch> oblivious_lb_script(int q, int ell, int batches, std::uint64_t seed) {
    const long long n = 3LL * q;
    RngStream rng(RngStream::mix(seed, 0x6f626c6976696f75ull));
    // The script tracks only its own past deletions; it never observes the
    // run. surviving[i] lists the edges of segment i still present.
    std::vector<std::vector<int>> surviving(static_cast<std::size_t>(q) + 1, {1, 2});
    std::vector<UpdateBatch> script;
    for (int b = 0; b < batches; ++b) {
        // Sample I with per-index probability ell/n; restart wholesale
        // while |I| > ell.
        std::vector<int> indices;
        while (true) {
            indices.clear();
            for (int i = 1; i <= q; ++i) {
                if (rng.unit() < static_cast<double>(ell) / static_cast<double>(n)) {
                    indices.push_back(i);
                }
            }
            if (static_cast<int>(indices.size()) <= ell) break;
        }
        UpdateBatch batch;
        for (int i : indices) {
            auto& edges = surviving[static_cast<std::size_t>(i)];
            if (edges.empty()) continue;
            const std::size_t pick = static_cast<std::size_t>(rng.below(edges.size()));
            const int which = edges[pick];
            edges.erase(edges.begin() + static_cast<long>(pick));
            const int mid = LineSegmentGraph::vertex(i, 2);
            const int other = LineSegmentGraph::vertex(i, which == 1 ? 1 : 3);
            batch.deletions.push_back(make_edge(mid, other));
        }
        script.push_back(std::move(batch));
    }
    return script;
}

ObliviousLbBatch oblivious_lb_batch(int q, int ell, std::uint64_t seed,
                                    const std::function<bool(int)>& vertex_is_free) {
    ObliviousLbBatch out;
    out.batch = oblivious_lb_script(q, ell, 1, seed).front();
    if (vertex_is_free) {
        out.matched_deletions = 0;
        for (const auto& [u, v] : out.batch.deletions) {
            if (!vertex_is_free(u) && !vertex_is_free(v)) ++out.matched_deletions;
        }
    }
    return out;
}

AdaptiveLbBatch adaptive_lb_batch(const Graph& g, const Matching& m, const Partition& p, int ell,
                                  std::uint64_t seed) {
    const int q = g.vertex_count() / 3;
    AdaptiveLbBatch out;

    // Player with the most hosted unmatched vertices; ties to smallest ID.
    std::vector<int> unmatched_hosted(static_cast<std::size_t>(p.k) + 1, 0);
    for (int v = 1; v <= g.vertex_count(); ++v) {
        if (!m.is_matched(v)) ++unmatched_hosted[static_cast<std::size_t>(p.owner_of(v))];
    }
    int target = 1;
    for (int i = 2; i <= p.k; ++i) {
        if (unmatched_hosted[static_cast<std::size_t>(i)] >
            unmatched_hosted[static_cast<std::size_t>(target)]) {
            target = i;
        }
    }
    out.target_player = target;

    // I_P: segments whose vertex at the target is unmatched and which
    // still carry a matched edge (otherwise there is nothing to delete).
    std::vector<int> candidates;
    std::map<int, Edge> matched_edge_of;
    for (int i = 1; i <= q; ++i) {
        bool hosts_unmatched = false;
        for (int pos = 1; pos <= 3; ++pos) {
            const int v = LineSegmentGraph::vertex(i, pos);
            if (p.owner_of(v) == target && !m.is_matched(v)) hosts_unmatched = true;
        }
        if (!hosts_unmatched) continue;
        const int mid = LineSegmentGraph::vertex(i, 2);
        const int mate = m.mate_of(mid);
        if (mate != 0 && g.has_edge(mid, mate)) {
            candidates.push_back(i);
            matched_edge_of[i] = make_edge(mid, mate);
        }
    }

    RngStream rng(RngStream::mix(seed, 0x6164617074697665ull));
    const std::size_t take =
        std::min<std::size_t>(candidates.size(), static_cast<std::size_t>(std::max(ell, 0)));
    for (int i : sample_k(candidates, take, rng)) {
        out.batch.deletions.push_back(matched_edge_of.at(i));
    }
    return out;
}

UpdateBatch gen_random_batch(const Graph& g, const Matching& m, int ell, double mix,
                             std::uint64_t seed, double matched_weight) {
    if (mix < 0.0 || mix > 1.0) throw SimError("mix must lie in [0,1]");
    UpdateBatch batch;
    RngStream rng(RngStream::mix(seed, 0x7374726573730000ull));
    const int want_del = static_cast<int>(mix * ell);
    const int want_ins = ell - want_del;

    // Weighted sampling without replacement over the edge list, matched
    // edges boosted by matched_weight.
    std::vector<Edge> edges = g.edges();
    if (static_cast<int>(edges.size()) < want_del) {
        throw Exhausted("graph has " + std::to_string(edges.size()) + " edges, need " +
                        std::to_string(want_del) + " deletions");
    }
    const long long scale = 1000;
    std::vector<long long> weights;
    weights.reserve(edges.size());
    for (const auto& [u, v] : edges) {
        const bool matched = m.contains_edge(u, v);
        weights.push_back(matched ? static_cast<long long>(matched_weight * scale) : scale);
    }
    for (int i = 0; i < want_del; ++i) {
        const std::size_t idx = weighted_index(weights, rng);
        batch.deletions.push_back(edges[idx]);
        edges.erase(edges.begin() + static_cast<long>(idx));
        weights.erase(weights.begin() + static_cast<long>(idx));
    }

    // Insertions: uniform non-edges. Enumerate the complement on small
    // graphs, rejection-sample on large sparse ones.
    const int n = g.vertex_count();
    const long long potential =
        static_cast<long long>(n) * (n - 1) / 2 - g.edge_count();
    if (potential < want_ins) {
        throw Exhausted("graph has only " + std::to_string(potential) + " non-edges, need " +
                        std::to_string(want_ins) + " insertions");
    }
    std::set<Edge> chosen;
    if (n <= 2000) {
        std::vector<Edge> complement;
        for (int u = 1; u <= n; ++u) {
            for (int v = u + 1; v <= n; ++v) {
                if (!g.has_edge(u, v)) complement.emplace_back(u, v);
            }
        }
        for (const Edge& e :
             sample_k(complement, static_cast<std::size_t>(want_ins), rng)) {
            chosen.insert(e);
        }
    } else {
        long long attempts = 0;
        const long long cap = 1000LL * (want_ins + 1);
        while (static_cast<int>(chosen.size()) < want_ins) {
            if (++attempts > cap) throw Exhausted("non-edge rejection sampling stalled");
            const int u = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
            const int v = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
            if (u == v || g.has_edge(u, v)) continue;
            chosen.insert(make_edge(u, v));
        }
    }
    batch.insertions.assign(chosen.begin(), chosen.end());
    return batch;
}

UpdateBatch gen_matched_deletion_batch(const Graph& g, const Matching& m, int ell,
                                       std::uint64_t seed) {
    (void)g;
    RngStream rng(RngStream::mix(seed, 0x6d625f64656c0000ull));
    auto edges = m.edges();
    UpdateBatch batch;
    batch.deletions =
        sample_k(edges, std::min<std::size_t>(edges.size(), static_cast<std::size_t>(ell)), rng);
    return batch;
}

Graph gen_random_graph(int n, long long m, std::uint64_t seed) {
    const long long potential = static_cast<long long>(n) * (n - 1) / 2;
    if (m > potential) {
        throw Exhausted("cannot place " + std::to_string(m) + " edges on " + std::to_string(n) +
                        " vertices");
    }
    RngStream rng(RngStream::mix(seed, 0x67726170680000ull));
    Graph g(n);
    if (2 * m > potential) {
        std::vector<Edge> all;
        all.reserve(static_cast<std::size_t>(potential));
        for (int u = 1; u <= n; ++u) {
            for (int v = u + 1; v <= n; ++v) all.emplace_back(u, v);
        }
        for (const Edge& e : sample_k(all, static_cast<std::size_t>(m), rng)) {
            g.add_edge(e.first, e.second);
        }
        return g;
    }
    std::set<Edge> edges;
    while (static_cast<long long>(edges.size()) < m) {
        const int u = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        const int v = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        if (u == v) continue;
        if (edges.insert(make_edge(u, v)).second) g.add_edge(u, v);
    }
    return g;
}

}  // namespace cliquemm
