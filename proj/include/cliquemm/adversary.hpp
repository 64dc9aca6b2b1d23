#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cliquemm/graph.hpp"

namespace cliquemm {

/// q disjoint paths of length 2; segment i holds vertices 3(i-1)+1..3i.
struct LineSegmentGraph {
    int q = 0;
    Graph graph;

    static int vertex(int segment, int pos) { return 3 * (segment - 1) + pos; }  // pos in 1..3
    static int segment_of(int v) { return (v - 1) / 3 + 1; }
    static int pos_of(int v) { return (v - 1) % 3 + 1; }
};

LineSegmentGraph gen_line_segment_graph(int q);

/// Every vertex assigned independently and uniformly to one of k players.
Partition gen_random_partition(int n, int k, std::uint64_t seed);

/// Column-major tiling of the q x 3 board by k vertical strips of length
/// n/k; player i owns strip i. Requires k % 3 == 0 and k | 3q; throws
/// IndivisibleConfig otherwise. Every player hosts at most one vertex per
/// segment.
Partition gen_domino_partition(int q, int k);

struct ObliviousLbBatch {
    UpdateBatch batch;
    /// How many deletions hit matched edges, when a freeness oracle was
    /// supplied for labeling; -1 otherwise. The batch itself never
    /// depends on it.
    int matched_deletions = -1;
};

/// Oblivious lower-bound strategy on the pristine line-segment graph:
/// sample indices with probability ell/n each (wholesale resampling while
/// more than ell survive), then delete one uniform edge per sampled
/// segment. A pure function of (q, ell, seed).
ObliviousLbBatch oblivious_lb_batch(int q, int ell, std::uint64_t seed,
                                    const std::function<bool(int)>& vertex_is_free = {});

/// Multi-batch oblivious script committed in advance: each batch deletes
/// a uniform surviving edge of every sampled segment, tracked against the
/// script's own history only.
std::vector<UpdateBatch> oblivious_lb_script(int q, int ell, int batches, std::uint64_t seed);

struct AdaptiveLbBatch {
    UpdateBatch batch;
    int target_player = 0;
};

/// Adaptive lower-bound strategy: pick the player hosting the most
/// unmatched vertices (ties to the smallest ID), sample ell of the
/// segments where it hosts the unmatched vertex and a matched edge still
/// exists, and delete those matched edges. Under the domino partition the
/// deleted edges have no endpoint at the targeted player.
AdaptiveLbBatch adaptive_lb_batch(const Graph& g, const Matching& m, const Partition& p, int ell,
                                  std::uint64_t seed);

/// Generic stress batch: floor(mix*ell) deletions of existing edges
/// (matched edges weighted by matched_weight), remaining insertions of
/// uniform non-edges. Throws Exhausted when the graph runs out of edges
/// or non-edges.
UpdateBatch gen_random_batch(const Graph& g, const Matching& m, int ell, double mix,
                             std::uint64_t seed, double matched_weight = 4.0);

/// Exactly min(ell, |m|) uniformly chosen matched edges, deletions only.
UpdateBatch gen_matched_deletion_batch(const Graph& g, const Matching& m, int ell,
                                       std::uint64_t seed);

/// Erdos-Renyi style G(n, m): m distinct edges drawn uniformly.
Graph gen_random_graph(int n, long long m, std::uint64_t seed);

}  // namespace cliquemm
