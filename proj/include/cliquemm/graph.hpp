#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "cliquemm/errors.hpp"

namespace cliquemm {

/// Undirected edge, normalized to first < second.
using Edge = std::pair<int, int>;

inline Edge make_edge(int u, int v) { return u < v ? Edge{u, v} : Edge{v, u}; }

/// Undirected simple graph on vertex IDs 1..n. Adjacency sets are kept
/// symmetric; self-loops and parallel edges are rejected.
class Graph {
  public:
    Graph() = default;
    explicit Graph(int n);
    static Graph from_edges(int n, const std::vector<Edge>& edges);

    int vertex_count() const { return n_; }
    long long edge_count() const { return m_; }
    bool has_vertex(int u) const { return u >= 1 && u <= n_; }
    bool has_edge(int u, int v) const;
    void add_edge(int u, int v);
    void remove_edge(int u, int v);
    const std::set<int>& neighbors(int u) const;
    std::vector<Edge> edges() const;  // sorted lexicographically

  private:
    void check_vertex(int u) const;
    int n_ = 0;
    long long m_ = 0;
    std::vector<std::set<int>> adj_;  // index 0 unused
};

/// Partial mate map; an involution over vertex IDs.
class Matching {
  public:
    bool is_matched(int u) const { return mate_of(u) != 0; }
    int mate_of(int u) const;  // 0 when unmatched
    bool contains_edge(int u, int v) const { return mate_of(u) == v && v != 0; }
    void add(int u, int v);
    void remove(int u, int v);
    std::size_t size() const { return mate_.size() / 2; }
    std::vector<Edge> edges() const;  // sorted
    void clear() { mate_.clear(); }

    /// Every matched pair is an edge of g. (Involution and disjointness
    /// hold by construction.)
    bool valid_for(const Graph& g) const;

  private:
    std::map<int, int> mate_;
};

/// Total map vertex -> player for vertices 1..n.
struct Partition {
    int k = 0;
    std::vector<int> owner;  // size n+1, index 0 unused

    int n() const { return static_cast<int>(owner.size()) - 1; }
    int owner_of(int v) const;
    std::vector<int> loads() const;  // index 0 unused, size k+1
};

/// Ordered batch of edge deletions and insertions.
struct UpdateBatch {
    std::vector<Edge> deletions;
    std::vector<Edge> insertions;

    std::size_t size() const { return deletions.size() + insertions.size(); }
    bool empty() const { return deletions.empty() && insertions.empty(); }

    /// Deletions must exist in g, insertions must not, no edge may appear
    /// twice across the whole batch, and size() <= ell when ell >= 0.
    void validate(const Graph& g, long long ell = -1) const;
};

/// Deletion frontier of one mini-batch: the freed endpoints v_f and the
/// previously-free vertices v_prime adjacent to them.
struct Frontier {
    std::vector<int> v_f;      // sorted
    std::vector<int> v_prime;  // sorted
    int gamma = 0;
};

enum class PartitionMode { Balanced, Any };

/// Deletions first, then insertions; throws InvalidBatch.
Graph apply_batch(const Graph& g, const UpdateBatch& b);

/// Number of u's neighbors that are free under m.
int free_degree(const Graph& g, const Matching& m, int u);

/// Centralized frontier oracle. d must be matched edges of m_before and
/// g_after the graph with d already removed.
Frontier compute_frontier(const Graph& g_after, const Matching& m_before,
                          const std::vector<Edge>& d, int gamma);

/// True iff no edge of g has both endpoints unmatched. Throws
/// InvalidMatching when m is not a matching of g.
bool is_maximal(const Graph& g, const Matching& m);

/// Balanced mode: every player load in [n/(2k), c_bal*(n/k)*ln(max(n,3))].
bool validate_partition(const Partition& p, int n, PartitionMode mode, double c_bal = 4.0);

}  // namespace cliquemm
