#pragma once

#include <stdexcept>
#include <string>

namespace cliquemm {

/// Base class for all simulator errors.
struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A batch update references a missing edge, a duplicate edge, or an
/// edge that already exists.
struct InvalidBatch : SimError {
    using SimError::SimError;
};

struct UnknownVertex : SimError {
    explicit UnknownVertex(int v)
        : SimError("unknown vertex " + std::to_string(v)), vertex(v) {}
    int vertex;
};

/// A deletion handed to the frontier computation was not part of the
/// matching it was checked against.
struct NotMatchedEdge : SimError {
    using SimError::SimError;
};

struct InvalidMatching : SimError {
    using SimError::SimError;
};

/// An algorithm queued more than link_budget tokens on one ordered link
/// in a single round. Always a bug in the caller, never silently queued.
struct BandwidthViolation : SimError {
    BandwidthViolation(int from_, int to_, int count_, int budget_)
        : SimError("bandwidth violation on link " + std::to_string(from_) + "->" +
                   std::to_string(to_) + ": " + std::to_string(count_) + " tokens, budget " +
                   std::to_string(budget_)),
          from(from_), to(to_), count(count_), budget(budget_) {}
    int from;
    int to;
    int count;
    int budget;
};

/// A randomized loop ran past its with-high-probability iteration budget.
struct IterationCapExceeded : SimError {
    using SimError::SimError;
};

struct PreconditionFailed : SimError {
    using SimError::SimError;
};

/// Divisibility requirements of the domino tiling are not met.
struct IndivisibleConfig : SimError {
    using SimError::SimError;
};

/// A generator ran out of edges or non-edges to sample from.
struct Exhausted : SimError {
    using SimError::SimError;
};

/// A centralized verification oracle rejected the state of a run.
struct OracleFailure : SimError {
    OracleFailure(const std::string& msg, std::string dump_)
        : SimError(msg), dump(std::move(dump_)) {}
    std::string dump;
};

/// Malformed input file.
struct FormatError : SimError {
    using SimError::SimError;
};

}  // namespace cliquemm
