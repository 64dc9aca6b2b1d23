#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "cliquemm/graph.hpp"
#include "cliquemm/rng.hpp"

namespace cliquemm {

/// One player's local view: hosted vertices, their adjacency, mates of
/// hosted vertices, and the believed matched-flag per vertex. The belief
/// array covers all IDs for convenience, but every entry is fed only by
/// traffic this player legitimately received (pruning and V_f broadcasts
/// reach everyone); the verification oracle checks the flags of actual
/// neighbors against ground truth.
struct PlayerState {
    int me = 0;
    std::vector<int> hosted;                 // sorted vertex IDs
    std::map<int, std::set<int>> local_adj;  // hosted vertex -> neighbors
    std::map<int, int> mate;                 // hosted vertex -> mate
    std::vector<std::uint8_t> believed_matched;  // index 1..n
    const Partition* partition = nullptr;
    std::uint64_t master_seed = 0;
    RngStream player_rng{0};

    bool hosts(int v) const { return local_adj.count(v) > 0; }

    int owner_of(int v) const { return partition->owner_of(v); }

    int mate_of(int v) const {
        auto it = mate.find(v);
        return it == mate.end() ? 0 : it->second;
    }

    bool believes_matched(int v) const {
        return believed_matched[static_cast<std::size_t>(v)] != 0;
    }

    /// Per-vertex sampling stream, created on first use.
    RngStream& vertex_rng(int v) {
        auto it = vertex_rng_.find(v);
        if (it == vertex_rng_.end()) {
            it = vertex_rng_
                     .emplace(v, RngStream(RngStream::mix(master_seed,
                                                          static_cast<std::uint64_t>(v))))
                     .first;
        }
        return it->second;
    }

  private:
    std::map<int, RngStream> vertex_rng_;
};

}  // namespace cliquemm
