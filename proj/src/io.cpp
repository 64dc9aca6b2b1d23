#include "cliquemm/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace cliquemm {

namespace {

std::string trimmed(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& what, int line_no) {
    throw FormatError(what + " (line " + std::to_string(line_no) + ")");
}

}  // namespace

void write_graph(std::ostream& os, const Graph& g) {
    os << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (const auto& [u, v] : g.edges()) os << u << ' ' << v << '\n';
}

Graph read_graph(std::istream& is) {
    std::string line;
    int line_no = 0;
    long long n = -1, m = -1;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string t = trimmed(line);
        if (t.empty()) continue;
        std::istringstream ss(t);
        if (!(ss >> n >> m) || n < 1 || m < 0) bad("expected header 'n m'", line_no);
        break;
    }
    if (n < 0) throw FormatError("empty graph file");
    Graph g(static_cast<int>(n));
    long long read = 0;
    while (read < m && std::getline(is, line)) {
        ++line_no;
        const std::string t = trimmed(line);
        if (t.empty()) continue;
        std::istringstream ss(t);
        int u = 0, v = 0;
        if (!(ss >> u >> v)) bad("expected edge 'u v'", line_no);
        try {
            g.add_edge(u, v);
        } catch (const SimError& e) {
            bad(e.what(), line_no);
        }
        ++read;
    }
    if (read != m) {
        throw FormatError("graph file promised " + std::to_string(m) + " edges, found " +
                          std::to_string(read));
    }
    return g;
}

void write_partition(std::ostream& os, const Partition& p) {
    for (int v = 1; v <= p.n(); ++v) os << v << ' ' << p.owner_of(v) << '\n';
}

Partition read_partition(std::istream& is, int expect_n) {
    std::map<int, int> owner;
    std::string line;
    int line_no = 0;
    int max_v = 0, max_p = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string t = trimmed(line);
        if (t.empty()) continue;
        std::istringstream ss(t);
        int v = 0, p = 0;
        if (!(ss >> v >> p) || v < 1 || p < 1) bad("expected 'v p'", line_no);
        if (!owner.emplace(v, p).second) bad("vertex assigned twice", line_no);
        max_v = std::max(max_v, v);
        max_p = std::max(max_p, p);
    }
    const int n = expect_n > 0 ? expect_n : max_v;
    if (static_cast<int>(owner.size()) != n || max_v > n) {
        throw FormatError("partition does not cover exactly vertices 1.." + std::to_string(n));
    }
    Partition part;
    part.k = max_p;
    part.owner.assign(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& [v, p] : owner) part.owner[static_cast<std::size_t>(v)] = p;
    for (int v = 1; v <= n; ++v) {
        if (part.owner[static_cast<std::size_t>(v)] == 0) {
            throw FormatError("vertex " + std::to_string(v) + " has no owner");
        }
    }
    return part;
}

void write_batches(std::ostream& os, const std::vector<UpdateBatch>& batches) {
    for (std::size_t i = 0; i < batches.size(); ++i) {
        if (i > 0) os << "---\n";
        for (const auto& [u, v] : batches[i].deletions) os << "- " << u << ' ' << v << '\n';
        for (const auto& [u, v] : batches[i].insertions) os << "+ " << u << ' ' << v << '\n';
    }
}

std::vector<UpdateBatch> read_batches(std::istream& is) {
    std::vector<UpdateBatch> out;
    UpdateBatch current;
    bool any_line = false;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string t = trimmed(line);
        if (t.empty()) continue;
        if (t == "---") {
            out.push_back(std::move(current));
            current = UpdateBatch{};
            any_line = true;
            continue;
        }
        std::istringstream ss(t);
        char op = 0;
        int u = 0, v = 0;
        if (!(ss >> op >> u >> v) || (op != '-' && op != '+')) {
            bad("expected '- u v' or '+ u v'", line_no);
        }
        if (op == '-') {
            current.deletions.push_back(make_edge(u, v));
        } else {
            current.insertions.push_back(make_edge(u, v));
        }
        any_line = true;
    }
    if (any_line) out.push_back(std::move(current));
    return out;
}

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw FormatError("cannot open " + path);
    return f;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw FormatError("cannot open " + path + " for writing");
    return f;
}

}  // namespace

Graph load_graph(const std::string& path) {
    auto f = open_in(path);
    return read_graph(f);
}

Partition load_partition(const std::string& path, int expect_n) {
    auto f = open_in(path);
    return read_partition(f, expect_n);
}

std::vector<UpdateBatch> load_batches(const std::string& path) {
    auto f = open_in(path);
    return read_batches(f);
}

void save_graph(const std::string& path, const Graph& g) {
    auto f = open_out(path);
    write_graph(f, g);
}

void save_partition(const std::string& path, const Partition& p) {
    auto f = open_out(path);
    write_partition(f, p);
}

void save_batches(const std::string& path, const std::vector<UpdateBatch>& batches) {
    auto f = open_out(path);
    write_batches(f, batches);
}

}  // namespace cliquemm
