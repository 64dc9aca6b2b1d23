#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cliquemm/graph.hpp"

namespace cliquemm {

// Graph file: first line "n m", then m lines "u v" (1-based).
// Partition file: n lines "v p".
// Batch file: batches separated by a line "---"; update lines
// "- u v" (delete) or "+ u v" (insert).

void write_graph(std::ostream& os, const Graph& g);
Graph read_graph(std::istream& is);

void write_partition(std::ostream& os, const Partition& p);
Partition read_partition(std::istream& is, int expect_n = -1);

void write_batches(std::ostream& os, const std::vector<UpdateBatch>& batches);
std::vector<UpdateBatch> read_batches(std::istream& is);

Graph load_graph(const std::string& path);
Partition load_partition(const std::string& path, int expect_n = -1);
std::vector<UpdateBatch> load_batches(const std::string& path);

void save_graph(const std::string& path, const Graph& g);
void save_partition(const std::string& path, const Partition& p);
void save_batches(const std::string& path, const std::vector<UpdateBatch>& batches);

}  // namespace cliquemm
