#ifndef ZKPCN_TOPOLOGY_HPP
#define ZKPCN_TOPOLOGY_HPP

#include <algorithm>
#include <cstdint>
#include <deque>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "zkpcn/random.hpp"
#include "zkpcn/types.hpp"

namespace zkpcn {

struct ChannelSpec {
    NodeId a = 0;
    NodeId b = 0;
    Amount capacity = 0;
};

// Undirected channel graph with static capacities. Balances never live here;
// they belong to the protocol layer. Immutable once built, safe to share.
class Network {
public:
    Network() = default;
    Network(std::vector<std::string> node_names, std::vector<ChannelSpec> channels)
        : node_names_(std::move(node_names)), channels_(std::move(channels)) {
        rebuild_adjacency();
        validate();
    }

    std::size_t node_count() const { return node_names_.size(); }
    std::size_t channel_count() const { return channels_.size(); }
    const std::vector<std::string>& node_names() const { return node_names_; }
    const std::string& node_name(NodeId n) const { return node_names_.at(n); }
    const std::vector<ChannelSpec>& channels() const { return channels_; }
    const ChannelSpec& channel(ChannelId c) const { return channels_.at(c); }
    const std::vector<ChannelId>& incident(NodeId n) const { return adjacency_.at(n); }

    NodeId other_end(ChannelId c, NodeId n) const {
        const ChannelSpec& ch = channels_.at(c);
        if (ch.a == n) return ch.b;
        if (ch.b == n) return ch.a;
        throw std::invalid_argument("other_end: node not incident to channel");
    }

    bool has_node(NodeId n) const { return n < node_names_.size(); }

    // BFS hop distances from src; unreachable nodes get UINT32_MAX.
    std::vector<std::uint32_t> hop_distances(NodeId src) const {
        std::vector<std::uint32_t> dist(node_count(), UINT32_MAX);
        std::deque<NodeId> queue;
        dist.at(src) = 0;
        queue.push_back(src);
        while (!queue.empty()) {
            NodeId u = queue.front();
            queue.pop_front();
            for (ChannelId c : adjacency_[u]) {
                NodeId v = other_end(c, u);
                if (dist[v] == UINT32_MAX) {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        return dist;
    }

    bool connected() const {
        if (node_count() == 0) return true;
        auto dist = hop_distances(0);
        return std::none_of(dist.begin(), dist.end(),
                            [](std::uint32_t d) { return d == UINT32_MAX; });
    }

private:
    void rebuild_adjacency() {
        adjacency_.assign(node_names_.size(), {});
        for (ChannelId c = 0; c < channels_.size(); ++c) {
            adjacency_.at(channels_[c].a).push_back(c);
            adjacency_.at(channels_[c].b).push_back(c);
        }
    }

    void validate() const {
        std::set<std::pair<NodeId, NodeId>> seen;
        for (ChannelId c = 0; c < channels_.size(); ++c) {
            const ChannelSpec& ch = channels_[c];
            if (ch.a >= node_names_.size() || ch.b >= node_names_.size())
                throw std::invalid_argument("channel " + std::to_string(c) + ": unknown endpoint");
            if (ch.a == ch.b)
                throw std::invalid_argument("channel " + std::to_string(c) + ": self-loop");
            if (ch.capacity == 0)
                throw std::invalid_argument("channel " + std::to_string(c) + ": zero capacity");
            auto key = std::minmax(ch.a, ch.b);
            if (!seen.insert(key).second)
                throw std::invalid_argument("channel " + std::to_string(c) +
                                            ": duplicate endpoint pair");
        }
    }

    std::vector<std::string> node_names_;
    std::vector<ChannelSpec> channels_;
    std::vector<std::vector<ChannelId>> adjacency_;
};

// Capacity-only local subgraph: every channel has both endpoints within
// `horizon` hops of `owner`. Dynamic state (balances, fees) is deliberately
// not representable here.
struct StaticView {
    NodeId owner = 0;
    std::uint32_t horizon = 1;
    std::vector<ChannelId> channels;  // sorted ascending

    bool contains(ChannelId c) const {
        return std::binary_search(channels.begin(), channels.end(), c);
    }
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Topology file grammar: one `channel <a> <b> <capacity>` record per line,
// `#` comments and blank lines ignored. Node ids are opaque tokens; first
// appearance fixes a node's index (and with it the workload hot-node order).
inline Network load_snapshot(std::istream& in) {
    std::vector<std::string> names;
    std::unordered_map<std::string, NodeId> index;
    std::vector<ChannelSpec> channels;

    auto intern = [&](const std::string& token) -> NodeId {
        auto it = index.find(token);
        if (it != index.end()) return it->second;
        NodeId id = static_cast<NodeId>(names.size());
        names.push_back(token);
        index.emplace(token, id);
        return id;
    };

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw) || kw[0] == '#') continue;
        if (kw != "channel")
            throw ParseError("line " + std::to_string(lineno) + ": expected 'channel', got '" +
                             kw + "'");
        std::string a, b;
        long long cap = 0;
        if (!(ls >> a >> b >> cap))
            throw ParseError("line " + std::to_string(lineno) + ": malformed channel record");
        if (cap <= 0)
            throw ParseError("line " + std::to_string(lineno) + ": channel " + a + "-" + b +
                             " capacity must be positive");
        channels.push_back({intern(a), intern(b), static_cast<Amount>(cap)});
    }
    try {
        return Network(std::move(names), std::move(channels));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("invalid topology: ") + e.what());
    }
}

inline Network load_snapshot(const std::string& text) {
    std::istringstream in(text);
    return load_snapshot(in);
}

// Channel capacity distribution for synthetic graphs.
struct CapacitySampler {
    enum class Kind { Constant, UniformRange, LogUniform };
    Kind kind = Kind::LogUniform;
    Amount lo = 10;
    Amount hi = 1000;

    static CapacitySampler constant(Amount v) { return {Kind::Constant, v, v}; }
    static CapacitySampler uniform(Amount lo, Amount hi) { return {Kind::UniformRange, lo, hi}; }
    static CapacitySampler log_uniform(Amount lo, Amount hi) { return {Kind::LogUniform, lo, hi}; }

    Amount sample(Rng& rng) const {
        switch (kind) {
            case Kind::Constant:
                return lo;
            case Kind::UniformRange:
                return lo + rand_below(rng, hi - lo + 1);
            case Kind::LogUniform: {
                double u = rand_unit_open(rng);
                double lg = std::log(static_cast<double>(lo)) +
                            u * (std::log(static_cast<double>(hi)) -
                                 std::log(static_cast<double>(lo)));
                Amount v = static_cast<Amount>(std::llround(std::exp(lg)));
                return std::clamp(v, lo, hi);
            }
        }
        return lo;
    }
};

// Connected preferential-attachment graph: a Barabasi-Albert style tree
// first (node i attaches to an existing node picked degree-proportionally),
// then extra edges with both ends degree-proportional. LN is hub-dominated,
// and the skewed-workload experiments are sensitive to hubs, so the degree
// distribution matters more here than the exact generative model.
inline Network generate_synthetic(std::size_t n, std::size_t target_channels,
                                  const CapacitySampler& caps, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("generate_synthetic: need at least 2 nodes");
    if (target_channels < n - 1)
        throw std::invalid_argument("generate_synthetic: target_channels below spanning tree");
    if (target_channels > n * (n - 1) / 2)
        throw std::invalid_argument("generate_synthetic: target_channels exceeds simple-graph max");

    Rng rng(split_seed(seed, 0x7090));
    std::vector<std::string> names(n);
    for (std::size_t i = 0; i < n; ++i) names[i] = "n" + std::to_string(i);

    std::vector<NodeId> endpoint_pool;  // node appears once per incident edge
    std::set<std::pair<NodeId, NodeId>> pairs;
    std::vector<ChannelSpec> channels;

    auto add_edge = [&](NodeId u, NodeId v) {
        channels.push_back({u, v, caps.sample(rng)});
        pairs.insert(std::minmax(u, v));
        endpoint_pool.push_back(u);
        endpoint_pool.push_back(v);
    };

    add_edge(0, 1);
    for (NodeId i = 2; i < n; ++i) {
        NodeId target = endpoint_pool[rand_below(rng, endpoint_pool.size())];
        add_edge(i, target);
    }

    while (channels.size() < target_channels) {
        NodeId u = endpoint_pool[rand_below(rng, endpoint_pool.size())];
        NodeId v = endpoint_pool[rand_below(rng, endpoint_pool.size())];
        if (u == v || pairs.count(std::minmax(u, v))) continue;
        add_edge(u, v);
    }

    return Network(std::move(names), std::move(channels));
}

inline Network apply_capacity_factor(const Network& net, std::uint64_t factor) {
    if (factor < 1) throw std::invalid_argument("apply_capacity_factor: factor must be >= 1");
    std::vector<ChannelSpec> channels = net.channels();
    for (ChannelSpec& c : channels) c.capacity *= factor;
    return Network(net.node_names(), std::move(channels));
}

// Median channel capacity; even counts take the lower middle value so the
// result is always an exact representable amount.
inline Amount median_capacity(const Network& net) {
    if (net.channel_count() == 0)
        throw std::invalid_argument("median_capacity: no channels");
    std::vector<Amount> caps;
    caps.reserve(net.channel_count());
    for (const ChannelSpec& c : net.channels()) caps.push_back(c.capacity);
    std::sort(caps.begin(), caps.end());
    return caps[(caps.size() - 1) / 2];
}

// Each endpoint funds half the capacity; odd units go to the
// lexicographically larger name so the smaller one holds exactly
// floor(capacity/2). Returned in channel (a, b) order.
inline std::pair<Amount, Amount> initial_balance_split(const Network& net, ChannelId c) {
    const ChannelSpec& ch = net.channel(c);
    Amount half = ch.capacity / 2;
    Amount rest = ch.capacity - half;
    if (net.node_name(ch.a) < net.node_name(ch.b)) return {half, rest};
    return {rest, half};
}

inline StaticView k_hop_view(const Network& net, NodeId owner, std::uint32_t k) {
    if (!net.has_node(owner)) throw std::invalid_argument("k_hop_view: unknown owner");
    if (k < 1) throw std::invalid_argument("k_hop_view: k must be >= 1");
    auto dist = net.hop_distances(owner);
    StaticView view{owner, k, {}};
    for (ChannelId c = 0; c < net.channel_count(); ++c) {
        const ChannelSpec& ch = net.channel(c);
        if (dist[ch.a] <= k && dist[ch.b] <= k) view.channels.push_back(c);
    }
    return view;
}

}  // namespace zkpcn

#endif  // ZKPCN_TOPOLOGY_HPP
