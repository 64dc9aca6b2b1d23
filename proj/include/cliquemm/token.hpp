#pragma once

#include <cstdint>

namespace cliquemm {

/// Wire tags. One Token stands for one Theta(log n)-bit message.
enum class Tag : std::uint8_t {
    Marked,    // sampled directed edge (a -> b)
    Selected,  // chosen incoming edge (a -> b)
    Request,   // match-up request along edge {a, b}
    Matched,   // edge {a, b} joined the matching
    MatchUp,   // phase-1 request: vertex a, addressed to player b
    VfId,      // vertex a lost its matched edge
    Edge,      // plain edge payload {a, b}, c as auxiliary flag
    Count,     // integer payload split into base-(n+1) digits a, b
    Ranked,    // redistribution payload (spreading internals)
};

const char* tag_name(Tag t);

/// A Token carries a tag plus up to three integers, each of which must
/// fit the ID universe (values in [0, max(n, k)]).
struct Token {
    Tag tag = Tag::Edge;
    int a = 0;
    int b = 0;
    int c = 0;
};

/// Counts can exceed one ID's range (up to ~n^2 residual edges), so they
/// travel as two base-(n+1) digits.
inline Token make_count(long long value, int n) {
    const long long base = static_cast<long long>(n) + 1;
    Token t;
    t.tag = Tag::Count;
    t.a = static_cast<int>(value / base);
    t.b = static_cast<int>(value % base);
    return t;
}

inline long long read_count(const Token& t, int n) {
    const long long base = static_cast<long long>(n) + 1;
    return static_cast<long long>(t.a) * base + t.b;
}

}  // namespace cliquemm
