#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "cliquemm/adversary.hpp"
#include "cliquemm/graph.hpp"
#include "cliquemm/rng.hpp"

using namespace cliquemm;

namespace {

// Independent oracle: rebuild the adjacency from the surviving edge list.
std::map<int, std::set<int>> adjacency_oracle(int n, std::vector<Edge> edges,
                                              const UpdateBatch& b) {
    std::set<Edge> set(edges.begin(), edges.end());
    for (const auto& e : b.deletions) set.erase(make_edge(e.first, e.second));
    for (const auto& e : b.insertions) set.insert(make_edge(e.first, e.second));
    std::map<int, std::set<int>> adj;
    for (int v = 1; v <= n; ++v) adj[v] = {};
    for (const auto& [u, v] : set) {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    return adj;
}

int free_degree_oracle(const Graph& g, const Matching& m, int u) {
    int c = 0;
    for (int w : g.neighbors(u)) {
        if (!m.is_matched(w)) ++c;
    }
    return c;
}

bool maximal_oracle(const Graph& g, const Matching& m) {
    for (const auto& [u, v] : g.edges()) {
        if (!m.is_matched(u) && !m.is_matched(v)) return false;
    }
    return true;
}

Matching random_matching(const Graph& g, std::uint64_t seed) {
    RngStream rng(seed);
    auto edges = g.edges();
    for (std::size_t i = edges.size(); i > 1; --i) {
        std::swap(edges[i - 1], edges[static_cast<std::size_t>(rng.below(i))]);
    }
    Matching m;
    for (const auto& [u, v] : edges) {
        if (!m.is_matched(u) && !m.is_matched(v) && rng.chance(0.7)) m.add(u, v);
    }
    return m;
}

}  // namespace

TEST_CASE("apply_batch removes and adds edges") {
    // path 1-2-3, delete {1,2} -> path 2-3 plus isolated 1
    Graph g = Graph::from_edges(3, {{1, 2}, {2, 3}});
    UpdateBatch b;
    b.deletions = {{1, 2}};
    Graph out = apply_batch(g, b);
    CHECK(out.edge_count() == 1);
    CHECK(out.has_edge(2, 3));
    CHECK_FALSE(out.has_edge(1, 2));
    CHECK(out.neighbors(1).empty());
}

TEST_CASE("apply_batch with an empty batch is the identity") {
    Graph g = Graph::from_edges(4, {{1, 2}, {3, 4}});
    Graph out = apply_batch(g, UpdateBatch{});
    CHECK(out.edges() == g.edges());
}

TEST_CASE("apply_batch agrees with an edge-list rebuild oracle") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Graph g = gen_random_graph(20, 40, seed);
        UpdateBatch b = gen_random_batch(g, Matching{}, 5, 0.5, seed + 100);
        Graph out = apply_batch(g, b);
        auto oracle = adjacency_oracle(20, g.edges(), b);
        for (int v = 1; v <= 20; ++v) {
            CHECK(out.neighbors(v) == oracle.at(v));
        }
    }
}

TEST_CASE("apply_batch then the inverse batch is the identity") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Graph g = gen_random_graph(15, 30, seed);
        UpdateBatch b = gen_random_batch(g, Matching{}, 6, 0.5, seed + 7);
        UpdateBatch inverse;
        inverse.deletions = b.insertions;
        inverse.insertions = b.deletions;
        Graph round_trip = apply_batch(apply_batch(g, b), inverse);
        CHECK(round_trip.edges() == g.edges());
    }
}

TEST_CASE("apply_batch rejects invalid batches") {
    Graph g = Graph::from_edges(3, {{1, 2}});
    UpdateBatch missing;
    missing.deletions = {{2, 3}};
    CHECK_THROWS_AS(apply_batch(g, missing), InvalidBatch);

    UpdateBatch existing;
    existing.insertions = {{1, 2}};
    CHECK_THROWS_AS(apply_batch(g, existing), InvalidBatch);

    UpdateBatch twice;
    twice.deletions = {{1, 2}};
    twice.insertions = {{1, 2}};
    CHECK_THROWS_AS(apply_batch(g, twice), InvalidBatch);
}

TEST_CASE("free_degree on small fixtures") {
    Graph triangle = Graph::from_edges(3, {{1, 2}, {2, 3}, {1, 3}});
    CHECK(free_degree(triangle, Matching{}, 1) == 2);

    Graph path = Graph::from_edges(3, {{1, 2}, {2, 3}});
    Matching m;
    m.add(1, 2);
    CHECK(free_degree(path, m, 3) == 0);

    CHECK_THROWS_AS(free_degree(path, m, 9), UnknownVertex);
}

TEST_CASE("free_degree matches brute-force enumeration") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        Graph g = gen_random_graph(30, 70, seed);
        Matching m = random_matching(g, seed * 31);
        for (int u = 1; u <= 30; ++u) {
            CHECK(free_degree(g, m, u) == free_degree_oracle(g, m, u));
        }
    }
}

TEST_CASE("compute_frontier on a path") {
    // path 1-2-3-4, matching {2,3}, delete {2,3}
    Graph g = Graph::from_edges(4, {{1, 2}, {2, 3}, {3, 4}});
    Matching m;
    m.add(2, 3);
    Graph after = g;
    after.remove_edge(2, 3);
    Frontier f = compute_frontier(after, m, {{2, 3}}, 1);
    CHECK(f.v_f == std::vector<int>{2, 3});
    CHECK(f.v_prime == std::vector<int>{1, 4});
}

TEST_CASE("compute_frontier with no deletions is empty") {
    Graph g = Graph::from_edges(3, {{1, 2}});
    Matching m;
    m.add(1, 2);
    Frontier f = compute_frontier(g, m, {}, 2);
    CHECK(f.v_f.empty());
    CHECK(f.v_prime.empty());
}

TEST_CASE("compute_frontier rejects unmatched deletions") {
    Graph g = Graph::from_edges(3, {{1, 2}, {2, 3}});
    Matching m;
    m.add(1, 2);
    Graph after = g;
    after.remove_edge(2, 3);
    CHECK_THROWS_AS(compute_frontier(after, m, {{2, 3}}, 1), NotMatchedEdge);
}

TEST_CASE("compute_frontier on a line-segment instance matches the definitions") {
    auto ls = gen_line_segment_graph(4);
    Matching m;
    for (int i = 1; i <= 4; ++i) {
        m.add(LineSegmentGraph::vertex(i, 1), LineSegmentGraph::vertex(i, 2));
    }
    // delete the matched edges of segments 1 and 3
    std::vector<Edge> d = {make_edge(1, 2), make_edge(7, 8)};
    Graph after = ls.graph;
    for (const auto& [u, v] : d) after.remove_edge(u, v);
    Frontier f = compute_frontier(after, m, d, 2);

    // brute-force evaluation of the definitions
    Matching m1 = m;
    std::set<int> vf_oracle;
    for (const auto& [u, v] : d) {
        m1.remove(u, v);
        vf_oracle.insert(u);
        vf_oracle.insert(v);
    }
    std::set<int> vp_oracle;
    for (int w = 1; w <= after.vertex_count(); ++w) {
        if (m1.is_matched(w) || vf_oracle.count(w)) continue;
        for (int x : after.neighbors(w)) {
            if (vf_oracle.count(x)) vp_oracle.insert(w);
        }
    }
    CHECK(std::set<int>(f.v_f.begin(), f.v_f.end()) == vf_oracle);
    CHECK(std::set<int>(f.v_prime.begin(), f.v_prime.end()) == vp_oracle);
    CHECK(static_cast<int>(f.v_f.size()) == 4);
    CHECK(static_cast<int>(f.v_f.size()) <= 2 * f.gamma);
}

TEST_CASE("frontier invariants hold on random instances") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        Graph g = gen_random_graph(60, 150, seed);
        // greedy maximal matching as the pre-deletion state
        Matching m;
        for (const auto& [u, v] : g.edges()) {
            if (!m.is_matched(u) && !m.is_matched(v)) m.add(u, v);
        }
        REQUIRE(maximal_oracle(g, m));
        const int gamma = 3;
        auto batch = gen_matched_deletion_batch(g, m, gamma, seed + 55);
        Graph after = g;
        for (const auto& [u, v] : batch.deletions) after.remove_edge(u, v);
        Frontier f = compute_frontier(after, m, batch.deletions, gamma);

        CHECK(static_cast<int>(f.v_f.size()) <= 2 * gamma);
        Matching m1 = m;
        for (const auto& [u, v] : batch.deletions) m1.remove(u, v);
        for (int a : f.v_prime) {
            for (int b : f.v_prime) {
                if (a < b) CHECK_FALSE(g.has_edge(a, b));  // independent pre-deletion
            }
            CHECK(free_degree(after, m1, a) <= 2 * gamma);
        }
    }
}

TEST_CASE("is_maximal on fixtures and against the scan oracle") {
    Graph path = Graph::from_edges(3, {{1, 2}, {2, 3}});
    Matching m;
    m.add(1, 2);
    CHECK(is_maximal(path, m));

    Graph single = Graph::from_edges(2, {{1, 2}});
    CHECK_FALSE(is_maximal(single, Matching{}));

    Matching bogus;
    bogus.add(1, 3);  // not an edge of path
    CHECK_THROWS_AS(is_maximal(path, bogus), InvalidMatching);

    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Graph g = gen_random_graph(25, 60, seed);
        Matching rm = random_matching(g, seed * 13);
        CHECK(is_maximal(g, rm) == maximal_oracle(g, rm));
    }
}

TEST_CASE("validate_partition checks balance bounds") {
    Partition even;
    even.k = 3;
    even.owner.assign(13, 0);
    for (int v = 1; v <= 12; ++v) even.owner[static_cast<std::size_t>(v)] = (v - 1) % 3 + 1;
    CHECK(validate_partition(even, 12, PartitionMode::Balanced));

    Partition lopsided;
    lopsided.k = 3;
    lopsided.owner.assign(13, 1);
    lopsided.owner[0] = 0;
    CHECK_FALSE(validate_partition(lopsided, 12, PartitionMode::Balanced));
    CHECK(validate_partition(lopsided, 12, PartitionMode::Any));
}

TEST_CASE("random partitions are balanced with observed frequency >= 0.99") {
    int balanced = 0;
    const int trials = 100;
    for (int s = 0; s < trials; ++s) {
        auto p = gen_random_partition(4096, 16, static_cast<std::uint64_t>(s));
        if (validate_partition(p, 4096, PartitionMode::Balanced)) ++balanced;
    }
    CHECK(balanced >= 99);
}

TEST_CASE("matching mate map stays an involution") {
    Matching m;
    m.add(1, 2);
    m.add(3, 7);
    CHECK(m.mate_of(2) == 1);
    CHECK(m.mate_of(7) == 3);
    CHECK_THROWS_AS(m.add(2, 5), InvalidMatching);
    m.remove(1, 2);
    CHECK_FALSE(m.is_matched(1));
    CHECK_THROWS_AS(m.remove(1, 2), InvalidMatching);
}
