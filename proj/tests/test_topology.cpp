#include <algorithm>
#include <sstream>

#include "catch_amalgamated.hpp"
#include "zkpcn/topology.hpp"

using namespace zkpcn;

TEST_CASE("load_snapshot parses a minimal topology", "[topology]") {
    Network net = load_snapshot("channel A B 10\n");
    REQUIRE(net.node_count() == 2);
    REQUIRE(net.channel_count() == 1);
    REQUIRE(net.channel(0).capacity == 10);
}

TEST_CASE("load_snapshot merges duplicate node ids", "[topology]") {
    Network net = load_snapshot(
        "# comment line\n"
        "channel A B 10\n"
        "channel A C 4\n");
    REQUIRE(net.node_count() == 3);
    REQUIRE(net.node_name(0) == "A");
    REQUIRE(net.incident(0).size() == 2);
}

TEST_CASE("load_snapshot rejects bad capacities with line numbers", "[topology]") {
    REQUIRE_THROWS_WITH(load_snapshot("channel A B 10\nchannel B C 0\n"),
                        Catch::Matchers::ContainsSubstring("line 2"));
    REQUIRE_THROWS_WITH(load_snapshot("channel A B -5\n"),
                        Catch::Matchers::ContainsSubstring("capacity"));
    REQUIRE_THROWS_WITH(load_snapshot("edge A B 10\n"),
                        Catch::Matchers::ContainsSubstring("line 1"));
    REQUIRE_THROWS_AS(load_snapshot("channel A A 3\n"), ParseError);
}

TEST_CASE("network invariants reject malformed channel lists", "[topology]") {
    REQUIRE_THROWS_AS(Network({"A", "B"}, {{0, 0, 5}}), std::invalid_argument);
    REQUIRE_THROWS_AS(Network({"A", "B"}, {{0, 1, 5}, {1, 0, 7}}), std::invalid_argument);
    REQUIRE_THROWS_AS(Network({"A", "B"}, {{0, 1, 0}}), std::invalid_argument);
}

TEST_CASE("generate_synthetic on two nodes yields the only possible graph", "[topology]") {
    Network net = generate_synthetic(2, 1, CapacitySampler::constant(10), 7);
    REQUIRE(net.node_count() == 2);
    REQUIRE(net.channel_count() == 1);
    REQUIRE(net.channel(0).capacity == 10);
}

TEST_CASE("generate_synthetic is deterministic per seed", "[topology]") {
    Network a = generate_synthetic(50, 120, CapacitySampler::log_uniform(10, 1000), 3);
    Network b = generate_synthetic(50, 120, CapacitySampler::log_uniform(10, 1000), 3);
    REQUIRE(a.node_names() == b.node_names());
    REQUIRE(a.channel_count() == b.channel_count());
    for (ChannelId c = 0; c < a.channel_count(); ++c) {
        REQUIRE(a.channel(c).a == b.channel(c).a);
        REQUIRE(a.channel(c).b == b.channel(c).b);
        REQUIRE(a.channel(c).capacity == b.channel(c).capacity);
    }
    Network other = generate_synthetic(50, 120, CapacitySampler::log_uniform(10, 1000), 4);
    bool any_diff = false;
    for (ChannelId c = 0; c < a.channel_count() && !any_diff; ++c)
        any_diff = a.channel(c).a != other.channel(c).a ||
                   a.channel(c).b != other.channel(c).b ||
                   a.channel(c).capacity != other.channel(c).capacity;
    REQUIRE(any_diff);
}

TEST_CASE("generate_synthetic builds a connected heavy-tailed graph", "[topology]") {
    Network net = generate_synthetic(1000, 4000, CapacitySampler::log_uniform(10, 1000), 1);
    REQUIRE(net.channel_count() == 4000);
    REQUIRE(net.connected());

    std::vector<std::size_t> degree(net.node_count());
    for (NodeId n = 0; n < net.node_count(); ++n) degree[n] = net.incident(n).size();
    std::vector<std::size_t> sorted = degree;
    std::sort(sorted.begin(), sorted.end());
    std::size_t median = sorted[(sorted.size() - 1) / 2];
    std::size_t max_deg = sorted.back();
    REQUIRE(max_deg >= 5 * median);
}

TEST_CASE("generate_synthetic validates parameters", "[topology]") {
    REQUIRE_THROWS_AS(generate_synthetic(1, 1, CapacitySampler::constant(1), 0),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(generate_synthetic(4, 2, CapacitySampler::constant(1), 0),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(generate_synthetic(4, 7, CapacitySampler::constant(1), 0),
                      std::invalid_argument);
}

TEST_CASE("apply_capacity_factor scales capacities only", "[topology]") {
    Network net = load_snapshot("channel A B 10\nchannel B C 3\n");
    Network same = apply_capacity_factor(net, 1);
    REQUIRE(same.channel(0).capacity == 10);
    REQUIRE(same.channel(1).capacity == 3);

    Network scaled = apply_capacity_factor(net, 25);
    REQUIRE(scaled.channel(0).capacity == 250);
    REQUIRE(scaled.channel(1).capacity == 75);
    REQUIRE(scaled.node_names() == net.node_names());

    Amount before = 0;
    Amount after = 0;
    for (const auto& c : net.channels()) before += c.capacity;
    for (const auto& c : scaled.channels()) after += c.capacity;
    REQUIRE(after == before * 25);
}

TEST_CASE("apply_capacity_factor composes multiplicatively", "[topology]") {
    Network net = generate_synthetic(20, 40, CapacitySampler::uniform(1, 50), 11);
    Network once = apply_capacity_factor(net, 6);
    Network twice = apply_capacity_factor(apply_capacity_factor(net, 2), 3);
    for (ChannelId c = 0; c < net.channel_count(); ++c)
        REQUIRE(once.channel(c).capacity == twice.channel(c).capacity);
}

TEST_CASE("median_capacity picks the lower middle value", "[topology]") {
    REQUIRE(median_capacity(load_snapshot("channel A B 10\n")) == 10);
    REQUIRE(median_capacity(load_snapshot("channel A B 1\nchannel B C 2\nchannel C D 3\n")) == 2);
    REQUIRE(median_capacity(load_snapshot(
                "channel A B 1\nchannel B C 2\nchannel C D 3\nchannel D E 4\n")) == 2);
    REQUIRE_THROWS_AS(median_capacity(Network({}, {})), std::invalid_argument);
}

TEST_CASE("k_hop_view collects channels inside the horizon", "[topology]") {
    Network net = load_snapshot("channel A B 5\nchannel B C 5\n");
    StaticView v1 = k_hop_view(net, 0, 1);
    REQUIRE(v1.channels == std::vector<ChannelId>{0});
    StaticView v2 = k_hop_view(net, 0, 2);
    REQUIRE(v2.channels == std::vector<ChannelId>{0, 1});
    StaticView v9 = k_hop_view(net, 0, 9);  // beyond the diameter
    REQUIRE(v9.channels == std::vector<ChannelId>{0, 1});
    REQUIRE_THROWS_AS(k_hop_view(net, 99, 1), std::invalid_argument);
}

TEST_CASE("k_hop_view is monotone in k", "[topology]") {
    Network net = generate_synthetic(60, 130, CapacitySampler::constant(5), 9);
    for (NodeId owner : {NodeId{0}, NodeId{17}, NodeId{59}}) {
        StaticView prev = k_hop_view(net, owner, 1);
        for (std::uint32_t k = 2; k <= 5; ++k) {
            StaticView cur = k_hop_view(net, owner, k);
            REQUIRE(std::includes(cur.channels.begin(), cur.channels.end(),
                                  prev.channels.begin(), prev.channels.end()));
            prev = cur;
        }
    }
}

TEST_CASE("initial_balance_split favors the lexicographically smaller name", "[topology]") {
    Network net = load_snapshot("channel B A 7\n");  // endpoints out of order on purpose
    auto [to_b, to_a] = initial_balance_split(net, 0);
    // A is lexicographically smaller, so A gets floor(7/2) = 3.
    REQUIRE(to_a == 3);
    REQUIRE(to_b == 4);
    REQUIRE(to_a + to_b == 7);
}
