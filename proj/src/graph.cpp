#include "cliquemm/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cliquemm {

namespace {

std::string edge_str(int u, int v) {
    return "{" + std::to_string(u) + "," + std::to_string(v) + "}";
}

}  // namespace

Graph::Graph(int n) : n_(n), adj_(static_cast<std::size_t>(n) + 1) {}

Graph Graph::from_edges(int n, const std::vector<Edge>& edges) {
    Graph g(n);
    for (const auto& [u, v] : edges) g.add_edge(u, v);
    return g;
}

void Graph::check_vertex(int u) const {
    if (!has_vertex(u)) throw UnknownVertex(u);
}

bool Graph::has_edge(int u, int v) const {
    if (!has_vertex(u) || !has_vertex(v)) return false;
    return adj_[static_cast<std::size_t>(u)].count(v) > 0;
}

void Graph::add_edge(int u, int v) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw InvalidBatch("self-loop at vertex " + std::to_string(u));
    if (has_edge(u, v)) throw InvalidBatch("edge " + edge_str(u, v) + " already present");
    adj_[static_cast<std::size_t>(u)].insert(v);
    adj_[static_cast<std::size_t>(v)].insert(u);
    ++m_;
}

void Graph::remove_edge(int u, int v) {
    check_vertex(u);
    check_vertex(v);
    if (!has_edge(u, v)) throw InvalidBatch("edge " + edge_str(u, v) + " not present");
    adj_[static_cast<std::size_t>(u)].erase(v);
    adj_[static_cast<std::size_t>(v)].erase(u);
    --m_;
}

const std::set<int>& Graph::neighbors(int u) const {
    check_vertex(u);
    return adj_[static_cast<std::size_t>(u)];
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(static_cast<std::size_t>(m_));
    for (int u = 1; u <= n_; ++u) {
        for (int v : adj_[static_cast<std::size_t>(u)]) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

int Matching::mate_of(int u) const {
    auto it = mate_.find(u);
    return it == mate_.end() ? 0 : it->second;
}

void Matching::add(int u, int v) {
    if (u == v) throw InvalidMatching("cannot match vertex to itself: " + std::to_string(u));
    if (is_matched(u) || is_matched(v)) {
        throw InvalidMatching("endpoint of " + edge_str(u, v) + " already matched");
    }
    mate_[u] = v;
    mate_[v] = u;
}

void Matching::remove(int u, int v) {
    if (mate_of(u) != v) throw InvalidMatching("edge " + edge_str(u, v) + " not in matching");
    mate_.erase(u);
    mate_.erase(v);
}

std::vector<Edge> Matching::edges() const {
    std::vector<Edge> out;
    out.reserve(mate_.size() / 2);
    for (const auto& [u, v] : mate_) {
        if (u < v) out.emplace_back(u, v);
    }
    return out;
}

bool Matching::valid_for(const Graph& g) const {
    for (const auto& [u, v] : mate_) {
        if (!g.has_edge(u, v)) return false;
    }
    return true;
}

int Partition::owner_of(int v) const {
    if (v < 1 || v >= static_cast<int>(owner.size())) throw UnknownVertex(v);
    return owner[static_cast<std::size_t>(v)];
}

std::vector<int> Partition::loads() const {
    std::vector<int> load(static_cast<std::size_t>(k) + 1, 0);
    for (int v = 1; v <= n(); ++v) {
        int p = owner[static_cast<std::size_t>(v)];
        if (p >= 1 && p <= k) ++load[static_cast<std::size_t>(p)];
    }
    return load;
}

void UpdateBatch::validate(const Graph& g, long long ell) const {
    if (ell >= 0 && static_cast<long long>(size()) > ell) {
        throw InvalidBatch("batch of " + std::to_string(size()) + " updates exceeds ell=" +
                           std::to_string(ell));
    }
    std::set<Edge> seen;
    auto check_unique = [&](int u, int v) {
        if (u == v) throw InvalidBatch("self-loop at vertex " + std::to_string(u));
        if (!g.has_vertex(u)) throw InvalidBatch("unknown vertex " + std::to_string(u));
        if (!g.has_vertex(v)) throw InvalidBatch("unknown vertex " + std::to_string(v));
        if (!seen.insert(make_edge(u, v)).second) {
            throw InvalidBatch("edge " + edge_str(u, v) + " appears twice in one batch");
        }
    };
    for (const auto& [u, v] : deletions) {
        check_unique(u, v);
        if (!g.has_edge(u, v)) {
            throw InvalidBatch("deletion targets missing edge " + edge_str(u, v));
        }
    }
    for (const auto& [u, v] : insertions) {
        check_unique(u, v);
        if (g.has_edge(u, v)) {
            throw InvalidBatch("insertion targets existing edge " + edge_str(u, v));
        }
    }
}

Graph apply_batch(const Graph& g, const UpdateBatch& b) {
    b.validate(g);
    Graph out = g;
    for (const auto& [u, v] : b.deletions) out.remove_edge(u, v);
    for (const auto& [u, v] : b.insertions) out.add_edge(u, v);
    return out;
}

int free_degree(const Graph& g, const Matching& m, int u) {
    int count = 0;
    for (int w : g.neighbors(u)) {
        if (!m.is_matched(w)) ++count;
    }
    return count;
}

Frontier compute_frontier(const Graph& g_after, const Matching& m_before,
                          const std::vector<Edge>& d, int gamma) {
    Frontier f;
    f.gamma = gamma;
    Matching m1 = m_before;
    std::set<int> vf;
    for (const auto& [u, v] : d) {
        if (!m_before.contains_edge(u, v)) {
            throw NotMatchedEdge("deleted edge " + edge_str(u, v) + " was not matched");
        }
        m1.remove(u, v);
        vf.insert(u);
        vf.insert(v);
    }
    f.v_f.assign(vf.begin(), vf.end());
    for (int w = 1; w <= g_after.vertex_count(); ++w) {
        if (m1.is_matched(w) || vf.count(w)) continue;
        for (int x : g_after.neighbors(w)) {
            if (vf.count(x)) {
                f.v_prime.push_back(w);
                break;
            }
        }
    }
    return f;
}

bool is_maximal(const Graph& g, const Matching& m) {
    if (!m.valid_for(g)) throw InvalidMatching("matching contains a non-edge");
    for (int u = 1; u <= g.vertex_count(); ++u) {
        if (m.is_matched(u)) continue;
        for (int v : g.neighbors(u)) {
            if (!m.is_matched(v)) return false;
        }
    }
    return true;
}

bool validate_partition(const Partition& p, int n, PartitionMode mode, double c_bal) {
    if (p.n() != n || p.k < 1) return false;
    for (int v = 1; v <= n; ++v) {
        int o = p.owner[static_cast<std::size_t>(v)];
        if (o < 1 || o > p.k) return false;
    }
    if (mode == PartitionMode::Any) return true;
    const double lower = static_cast<double>(n) / (2.0 * p.k);
    const double upper =
        c_bal * (static_cast<double>(n) / p.k) * std::log(static_cast<double>(std::max(n, 3)));
    auto loads = p.loads();
    for (int i = 1; i <= p.k; ++i) {
        double load = loads[static_cast<std::size_t>(i)];
        if (load < lower || load > upper) return false;
    }
    return true;
}

}  // namespace cliquemm
