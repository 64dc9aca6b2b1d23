#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "cliquemm/network.hpp"
#include "cliquemm/rng.hpp"

using namespace cliquemm;

namespace {

NetworkConfig cfg(int k, int beta, int n = 1000, std::uint64_t seed = 7) {
    NetworkConfig c;
    c.k = k;
    c.beta = beta;
    c.n = n;
    c.master_seed = seed;
    return c;
}

std::vector<std::vector<Token>> token_loads(const std::vector<int>& counts, int n_universe) {
    std::vector<std::vector<Token>> out(counts.size());
    int id = 1;
    for (std::size_t i = 1; i < counts.size(); ++i) {
        for (int j = 0; j < counts[i]; ++j) {
            out[i].push_back({Tag::Edge, id % n_universe + 1, 0, 0});
            ++id;
        }
    }
    return out;
}

// Hand-derivable schedule oracle for the two-stage spreading plan.
struct ScheduleOracle {
    int rounds = 0;
    long long sends = 0;
};

ScheduleOracle expected_schedule(const std::vector<int>& counts, int k, int beta) {
    ScheduleOracle o;
    long long total = 0;
    for (std::size_t i = 1; i < counts.size(); ++i) total += counts[i];
    if (total == 0) return o;
    const int batch = beta * (k - 1);
    int stage_a = 0;
    std::vector<int> x_prime(counts.size(), 0);
    std::vector<long long> owned(counts.size(), 0);
    for (std::size_t i = 1; i < counts.size(); ++i) {
        const int b = counts[i] / batch;
        stage_a = std::max(stage_a, b);
        x_prime[i] = counts[i] % batch;
        o.sends += static_cast<long long>(b) * batch;
        for (std::size_t j = 1; j < counts.size(); ++j) {
            if (j != i) owned[j] += static_cast<long long>(beta) * b;
        }
    }
    auto ranks = detail::redistribution_ranks(x_prime);
    bool cross = false;
    for (std::size_t a = 1; a < counts.size(); ++a) {
        for (long long r : ranks[a]) {
            const std::size_t dest = static_cast<std::size_t>(r % k) + 1;
            owned[dest] += 1;
            if (dest != a) {
                cross = true;
                o.sends += 1;
            }
        }
    }
    o.sends += static_cast<long long>(k) * (k - 1);  // residual-count exchange
    int dissem = 0;
    for (std::size_t i = 1; i < counts.size(); ++i) {
        dissem = std::max(dissem, static_cast<int>((owned[i] + beta - 1) / beta));
        o.sends += owned[i] * (k - 1);
    }
    o.rounds = stage_a + 1 + (cross ? 1 : 0) + dissem;
    return o;
}

}  // namespace

TEST_CASE("run_round counts an empty round") {
    Cluster net(cfg(4, 2));
    auto inbox = net.run_round();
    CHECK(net.metrics().rounds == 1);
    for (int i = 1; i <= 4; ++i) CHECK(inbox[static_cast<std::size_t>(i)].empty());
}

TEST_CASE("run_round delivers exactly-at-budget traffic") {
    Cluster net(cfg(4, 2));
    for (int t = 2; t <= 4; ++t) {
        net.queue(1, t, {Tag::Edge, 1, 2, 0});
        net.queue(1, t, {Tag::Edge, 3, 4, 0});
    }
    auto inbox = net.run_round();
    for (int t = 2; t <= 4; ++t) CHECK(inbox[static_cast<std::size_t>(t)].size() == 2);
    CHECK(net.metrics().max_link_load == 2);
    CHECK(net.metrics().tokens_sent == 6);
}

TEST_CASE("run_round rejects over-budget queues") {
    Cluster net(cfg(4, 1));
    net.queue(1, 2, {Tag::Edge, 1, 2, 0});
    net.queue(1, 2, {Tag::Edge, 3, 4, 0});
    CHECK_THROWS_AS(net.run_round(), BandwidthViolation);
}

TEST_CASE("run_round rejects tokens outside the ID universe") {
    Cluster net(cfg(4, 2, 50));
    net.queue(1, 2, {Tag::Edge, 51, 0, 0});
    CHECK_THROWS_AS(net.run_round(), SimError);
}

TEST_CASE("spreading with no tokens costs nothing") {
    Cluster net(cfg(8, 1));
    auto res = net.spreading(std::vector<std::vector<Token>>(9));
    CHECK(res.rounds == 0);
    CHECK(res.tokens.empty());
    CHECK(net.metrics().rounds == 0);
}

TEST_CASE("spreading k=4 beta=1 with 3 tokens per player takes exactly 5 rounds") {
    // Hand simulation: one full batch per player (1 round), residuals all
    // zero, count exchange (1 round), no rank round, then each player
    // owns 3 tokens -> 3 dissemination rounds.
    Cluster net(cfg(4, 1));
    auto res = net.spreading(token_loads({0, 3, 3, 3, 3}, 1000));
    CHECK(res.rounds == 5);
    CHECK(res.tokens.size() == 12);
    CHECK(res.rounds <= 12 / (1 * 4) + 2);  // ceil(N/(beta k)) + c0, c0 = 2 here
    CHECK(net.metrics().max_link_load <= 1);
}

TEST_CASE("spreading matches the schedule oracle on random loads") {
    RngStream rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const int k = 2 + static_cast<int>(rng.below(9));
        const int beta = 1 + static_cast<int>(rng.below(4));
        std::vector<int> counts(static_cast<std::size_t>(k) + 1, 0);
        for (int i = 1; i <= k; ++i) counts[static_cast<std::size_t>(i)] =
            static_cast<int>(rng.below(200));
        Cluster net(cfg(k, beta));
        const long long sends_before = net.metrics().tokens_sent;
        auto res = net.spreading(token_loads(counts, 1000));
        auto oracle = expected_schedule(counts, k, beta);
        long long total = 0;
        for (int c : counts) total += c;
        if (total == 0) {
            CHECK(res.rounds == 0);
            continue;
        }
        CHECK(res.rounds == oracle.rounds);
        CHECK(net.metrics().tokens_sent - sends_before == oracle.sends);
        CHECK(static_cast<long long>(res.tokens.size()) == total);
        CHECK(net.metrics().max_link_load <= beta);
    }
}

TEST_CASE("spreading rounds stay within a constant of ceil(N/(beta k))") {
    const int k = 16, beta = 2;
    for (int mult : {1, 4, 16, 64}) {
        const int n_tokens = mult * k;
        std::vector<int> balanced(static_cast<std::size_t>(k) + 1, n_tokens / k);
        balanced[0] = 0;
        Cluster net(cfg(k, beta, 100000));
        auto res = net.spreading(token_loads(balanced, 100000));
        const int bound = 3 * ((n_tokens + beta * k - 1) / (beta * k)) + 5;
        CHECK(res.rounds <= bound);
    }
}

TEST_CASE("redistribution ranks form a permutation") {
    RngStream rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const int k = 2 + static_cast<int>(rng.below(12));
        std::vector<int> x_prime(static_cast<std::size_t>(k) + 1, 0);
        for (int i = 1; i <= k; ++i) x_prime[static_cast<std::size_t>(i)] =
            static_cast<int>(rng.below(25));
        auto ranks = detail::redistribution_ranks(x_prime);
        std::vector<long long> all;
        for (int i = 1; i <= k; ++i) {
            all.insert(all.end(), ranks[static_cast<std::size_t>(i)].begin(),
                       ranks[static_cast<std::size_t>(i)].end());
        }
        std::sort(all.begin(), all.end());
        long long total = std::accumulate(x_prime.begin(), x_prime.end(), 0LL);
        REQUIRE(static_cast<long long>(all.size()) == total);
        for (long long r = 1; r <= total; ++r) CHECK(all[static_cast<std::size_t>(r - 1)] == r);
    }
}

TEST_CASE("broadcast_all of a single token reaches everyone quickly") {
    Cluster net(cfg(8, 1));
    std::vector<std::vector<Token>> loads(9);
    loads[1].push_back({Tag::VfId, 42, 0, 0});
    auto res = net.broadcast_all(loads);
    CHECK(res.tokens.size() == 1);
    CHECK(res.tokens[0].tok.a == 42);
    CHECK(res.rounds <= 3);  // c0 + 1
}

TEST_CASE("gather_at collects every token at the destination") {
    Cluster net(cfg(9, 1));
    std::vector<std::vector<Token>> loads(10);
    for (int i = 1; i <= 9; ++i) loads[static_cast<std::size_t>(i)].push_back({Tag::Edge, i, 0, 0});
    auto res = net.gather_at(3, loads);
    CHECK(res.tokens.size() == 9);
    std::set<int> values;
    for (const auto& e : res.tokens) values.insert(e.tok.a);
    CHECK(values == std::set<int>{1, 2, 3, 4, 5, 6, 7, 8, 9});

    Cluster empty_net(cfg(9, 1));
    auto empty = empty_net.gather_at(2, std::vector<std::vector<Token>>(10));
    CHECK(empty.rounds == 0);
}

TEST_CASE("gather_at of N = 8*beta*k tokens finishes in constant rounds") {
    for (int k : {8, 16}) {
        for (int beta : {1, 4}) {
            const int n_tokens = 8 * beta * k;
            std::vector<int> counts(static_cast<std::size_t>(k) + 1, 0);
            RngStream rng(11);
            for (int t = 0; t < n_tokens; ++t) {
                counts[1 + rng.below(static_cast<std::uint64_t>(k))] += 1;
            }
            Cluster net(cfg(k, beta, 100000));
            auto res = net.gather_at(1, token_loads(counts, 100000));
            CHECK(res.rounds <= 35);  // independent of any n
        }
    }
}

TEST_CASE("aggregate_count sums in two rounds") {
    Cluster net(cfg(5, 1, 100));
    std::vector<long long> values = {0, 3, 0, 7, 2, 9999};
    values.resize(6);
    values[5] = 4;
    const long long before = net.metrics().rounds;
    CHECK(net.aggregate_count(values) == 16);
    CHECK(net.metrics().rounds - before == 2);
}

TEST_CASE("deliver_direct paces sends at the budget") {
    Cluster net(cfg(3, 1, 100));
    std::vector<std::map<int, std::vector<Token>>> out(4);
    for (int j = 0; j < 5; ++j) out[1][2].push_back({Tag::Edge, j + 1, 0, 0});
    out[1][1].push_back({Tag::Edge, 99, 0, 0});  // self, free
    auto [inbox, rounds] = net.deliver_direct(out);
    CHECK(rounds == 5);
    CHECK(inbox[2].size() == 5);
    CHECK(inbox[1].size() == 1);
    CHECK(net.metrics().max_link_load <= 1);
}

TEST_CASE("identical seeds give identical traffic") {
    auto run = [] {
        Cluster net(cfg(6, 2));
        std::vector<int> counts = {0, 5, 0, 13, 2, 2, 40};
        auto res = net.spreading(token_loads(counts, 1000));
        return std::tuple{res.rounds, net.metrics().tokens_sent, net.metrics().max_link_load};
    };
    CHECK(run() == run());
}
