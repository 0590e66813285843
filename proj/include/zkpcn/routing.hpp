#ifndef ZKPCN_ROUTING_HPP
#define ZKPCN_ROUTING_HPP

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "zkpcn/topology.hpp"
#include "zkpcn/types.hpp"
#include "zkpcn/zk.hpp"

namespace zkpcn {

struct Hop {
    ChannelId channel = 0;
    Direction direction = Direction::AtoB;  // sender side relative to channel (A,B)
};

using Path = std::vector<Hop>;

inline Direction direction_from(const Network& net, ChannelId c, NodeId from) {
    return net.channel(c).a == from ? Direction::AtoB : Direction::BtoA;
}

inline std::vector<NodeId> path_nodes(const Network& net, NodeId src, const Path& path) {
    std::vector<NodeId> nodes{src};
    for (const Hop& h : path) nodes.push_back(net.other_end(h.channel, nodes.back()));
    return nodes;
}

// Lexicographic channel-id sequence; the global deterministic tie-break.
inline bool path_id_less(const Path& lhs, const Path& rhs) {
    auto key = [](const Path& p) {
        std::vector<ChannelId> ids;
        ids.reserve(p.size());
        for (const Hop& h : p) ids.push_back(h.channel);
        return ids;
    };
    return key(lhs) < key(rhs);
}

struct FeePolicy {
    Amount base_fee = 1;
    std::uint64_t proportional_ppm = 1;

    Amount fee(Amount amount) const { return base_fee + amount * proportional_ppm / 1'000'000; }
};

// ---------------------------------------------------------------------------
// Routing table (zk-PCN global mode)
// ---------------------------------------------------------------------------

struct TableEntry {
    Amount public_a = 0;
    Amount public_b = 0;
    Amount capacity = 0;
    std::uint64_t last_seen_version = 0;
    bool verified = false;
};

struct Announcement {
    ChannelId channel = 0;
    Statement statement;
    Proof proof;
    std::uint64_t version_hint = 0;  // per-channel announcement sequence, monotone
};

enum class TableUpdate { Applied, RejectedProof, RejectedStale, RejectedBounds };

// One node's view of every channel's announced public balances. Entries
// start from the channel-open state, which is the one state that is
// genuinely public.
class RoutingTable {
public:
    RoutingTable() = default;

    static RoutingTable initial(const Network& net, NodeId owner) {
        RoutingTable t;
        t.owner_ = owner;
        t.entries_.resize(net.channel_count());
        for (ChannelId c = 0; c < net.channel_count(); ++c) {
            auto [pa, pb] = initial_balance_split(net, c);
            t.entries_[c] = TableEntry{pa, pb, net.channel(c).capacity, 0, true};
        }
        return t;
    }

    NodeId owner() const { return owner_; }
    const TableEntry& entry(ChannelId c) const { return entries_.at(c); }
    std::size_t size() const { return entries_.size(); }
    std::uint64_t rejected_proof() const { return rejected_proof_; }
    std::uint64_t rejected_stale() const { return rejected_stale_; }

    TableUpdate apply(const Announcement& ann, const PublicParams& pp) {
        return apply_prechecked(ann, verify(pp, ann.statement, ann.proof));
    }

    // verify() is deterministic, so when one announcement fans out to many
    // receivers the caller may verify once and share the result.
    TableUpdate apply_prechecked(const Announcement& ann, bool proof_ok) {
        TableEntry& e = entries_.at(ann.channel);
        if (ann.version_hint <= e.last_seen_version) {
            ++rejected_stale_;
            return TableUpdate::RejectedStale;
        }
        if (!proof_ok) {
            ++rejected_proof_;
            return TableUpdate::RejectedProof;
        }
        const auto& pub = ann.statement.public_balances;
        if (pub.first > e.capacity || pub.second > e.capacity) return TableUpdate::RejectedBounds;
        e.public_a = pub.first;
        e.public_b = pub.second;
        e.last_seen_version = ann.version_hint;
        e.verified = true;
        return TableUpdate::Applied;
    }

    // Channel parties track their own state without waiting for gossip.
    void set_direct(ChannelId c, Amount pub_a, Amount pub_b, std::uint64_t seq) {
        TableEntry& e = entries_.at(c);
        if (seq <= e.last_seen_version) return;
        e.public_a = pub_a;
        e.public_b = pub_b;
        e.last_seen_version = seq;
        e.verified = true;
    }

    // Sender-side announced balance for a hop crossing `c` from `from`.
    Amount directional_public(const Network& net, ChannelId c, NodeId from) const {
        const TableEntry& e = entries_.at(c);
        return net.channel(c).a == from ? e.public_a : e.public_b;
    }

private:
    NodeId owner_ = 0;
    std::vector<TableEntry> entries_;
    std::uint64_t rejected_proof_ = 0;
    std::uint64_t rejected_stale_ = 0;
};

inline TableUpdate update_routing_table(RoutingTable& table, const Announcement& ann,
                                        const PublicParams& pp) {
    return table.apply(ann, pp);
}

// ---------------------------------------------------------------------------
// Shortest-path selection
// ---------------------------------------------------------------------------

namespace detail {

// BFS from dst over edges admitted by `usable(channel, from)`, then a greedy
// forward walk that always takes the smallest admissible channel id. Yields
// the lexicographically smallest among all hop-count-shortest paths.
template <typename UsableFn>
std::optional<Path> shortest_path(const Network& net, NodeId src, NodeId dst, UsableFn usable) {
    if (src == dst) return Path{};
    std::vector<std::uint32_t> dist(net.node_count(), UINT32_MAX);
    std::deque<NodeId> queue;
    dist[dst] = 0;
    queue.push_back(dst);
    while (!queue.empty()) {
        NodeId v = queue.front();
        queue.pop_front();
        for (ChannelId c : net.incident(v)) {
            NodeId u = net.other_end(c, v);
            if (dist[u] != UINT32_MAX) continue;
            if (!usable(c, u)) continue;  // edge traversed u -> v
            dist[u] = dist[v] + 1;
            queue.push_back(u);
        }
    }
    if (dist[src] == UINT32_MAX) return std::nullopt;

    Path path;
    NodeId u = src;
    while (u != dst) {
        ChannelId best = UINT32_MAX;
        NodeId best_next = 0;
        for (ChannelId c : net.incident(u)) {
            NodeId v = net.other_end(c, u);
            if (dist[v] != dist[u] - 1 || !usable(c, u)) continue;
            if (c < best) {
                best = c;
                best_next = v;
            }
        }
        path.push_back({best, direction_from(net, best, u)});
        u = best_next;
    }
    return path;
}

}  // namespace detail

// Shortest hop-count route over channels whose sender-side announced public
// balance covers the amount. NoRoute is the nullopt value, not an error.
inline std::optional<Path> zkpcn_select_route(const RoutingTable& table, const Network& net,
                                              NodeId src, NodeId dst, Amount amount) {
    if (src == dst) throw std::invalid_argument("zkpcn_select_route: src == dst");
    if (amount == 0) throw std::invalid_argument("zkpcn_select_route: amount must be positive");
    return detail::shortest_path(net, src, dst, [&](ChannelId c, NodeId from) {
        return table.entry(c).verified && table.directional_public(net, c, from) >= amount;
    });
}

// ---------------------------------------------------------------------------
// Candidate discovery (Yen's k shortest loop-free paths)
// ---------------------------------------------------------------------------

// Lazy Yen enumeration, shortest first, ties by path id. `usable` filters
// edges globally (capacity checks); spur bans are layered on top.
template <typename UsableFn>
class KShortestPaths {
public:
    KShortestPaths(const Network& net, NodeId src, NodeId dst, UsableFn usable)
        : net_(net), src_(src), dst_(dst), usable_(usable) {}

    std::optional<Path> next() {
        if (!started_) {
            started_ = true;
            auto first = detail::shortest_path(net_, src_, dst_, usable_);
            if (!first) return std::nullopt;
            emitted_.push_back(*first);
            return *first;
        }
        if (emitted_.empty()) return std::nullopt;
        expand(emitted_.back());
        if (candidates_.empty()) return std::nullopt;
        Path next_path = *candidates_.begin();
        candidates_.erase(candidates_.begin());
        emitted_.push_back(next_path);
        return next_path;
    }

private:
    struct PathOrder {
        bool operator()(const Path& lhs, const Path& rhs) const {
            if (lhs.size() != rhs.size()) return lhs.size() < rhs.size();
            return path_id_less(lhs, rhs);
        }
    };

    void expand(const Path& base) {
        std::vector<NodeId> base_nodes = path_nodes(net_, src_, base);
        for (std::size_t spur = 0; spur < base.size(); ++spur) {
            std::set<ChannelId> banned_edges;
            for (const Path& p : emitted_) {
                if (p.size() <= spur) continue;
                bool same_root = true;
                for (std::size_t j = 0; j < spur; ++j) {
                    if (p[j].channel != base[j].channel) {
                        same_root = false;
                        break;
                    }
                }
                if (same_root) banned_edges.insert(p[spur].channel);
            }
            std::vector<char> banned_node(net_.node_count(), 0);
            for (std::size_t j = 0; j < spur; ++j) banned_node[base_nodes[j]] = 1;

            NodeId spur_node = base_nodes[spur];
            auto spur_usable = [&](ChannelId c, NodeId from) {
                if (banned_edges.count(c)) return false;
                if (banned_node[from] || banned_node[net_.other_end(c, from)]) return false;
                return usable_(c, from);
            };
            auto tail = detail::shortest_path(net_, spur_node, dst_, spur_usable);
            if (!tail) continue;
            Path candidate(base.begin(), base.begin() + spur);
            candidate.insert(candidate.end(), tail->begin(), tail->end());
            if (already_known(candidate)) continue;
            candidates_.insert(std::move(candidate));
        }
    }

    bool already_known(const Path& p) const {
        auto same = [&](const Path& q) {
            return q.size() == p.size() && !path_id_less(p, q) && !path_id_less(q, p);
        };
        return std::any_of(emitted_.begin(), emitted_.end(), same) || candidates_.count(p) > 0;
    }

    const Network& net_;
    NodeId src_;
    NodeId dst_;
    UsableFn usable_;
    bool started_ = false;
    std::vector<Path> emitted_;
    std::set<Path, PathOrder> candidates_;
};

// Up to `max_routes` loop-free candidate routes whose every channel capacity
// covers the amount. Static information only; balances are probed later.
// When the destination lies beyond the view, discovery falls back to the
// full topology (topology and capacities are global static knowledge).
inline std::vector<Path> find_candidate_routes(const Network& net, const StaticView& view,
                                               NodeId src, NodeId dst, Amount amount,
                                               std::size_t max_routes) {
    auto dist = net.hop_distances(view.owner);
    bool within_view = dst < dist.size() && dist[dst] <= view.horizon;
    auto usable = [&](ChannelId c, NodeId) {
        if (net.channel(c).capacity < amount) return false;
        return !within_view || view.contains(c);
    };
    KShortestPaths gen(net, src, dst, usable);
    std::vector<Path> routes;
    while (routes.size() < max_routes) {
        auto p = gen.next();
        if (!p) break;
        routes.push_back(std::move(*p));
    }
    return routes;
}

inline std::vector<Path> find_candidate_routes(const Network& net, NodeId src, NodeId dst,
                                               Amount amount, std::size_t max_routes) {
    auto usable = [&](ChannelId c, NodeId) { return net.channel(c).capacity >= amount; };
    KShortestPaths gen(net, src, dst, usable);
    std::vector<Path> routes;
    while (routes.size() < max_routes) {
        auto p = gen.next();
        if (!p) break;
        routes.push_back(std::move(*p));
    }
    return routes;
}

// ---------------------------------------------------------------------------
// Reactive proof gathering (RPG) messages
// ---------------------------------------------------------------------------

struct ProofPair {
    ChannelId channel = 0;
    Direction direction = Direction::AtoB;
    Statement statement;
    Proof proof;
};

// One onion layer; in a real deployment only the layer owner could decrypt
// it. Here the opacity is structural: hops read exactly their own layer.
struct OnionLayer {
    NodeId from = 0;
    NodeId to = 0;
    ChannelId channel = 0;
};

struct RoutePost {
    std::uint64_t route_id = 0;
    Amount tran = 0;
    std::vector<OnionLayer> layers;
    std::size_t position = 0;  // layers already traversed
    std::vector<ProofPair> accumulated;
    Amount fee = 0;
};

// Everything a forwarding hop can see. Deliberately no sender identity and
// no hops beyond its own layer.
struct HopView {
    NodeId prev = 0;
    NodeId next = 0;
    Amount tran = 0;
    std::size_t pairs_so_far = 0;
    Amount fee_so_far = 0;
};

struct RouteResponse {
    std::uint64_t route_id = 0;
    std::vector<ProofPair> pairs;
    Amount total_fee = 0;
};

enum class RpgError { DropPost, NotAtDestination };

inline RoutePost make_route_post(const Network& net, std::uint64_t route_id, Amount tran,
                                 NodeId src, const Path& path) {
    RoutePost post;
    post.route_id = route_id;
    post.tran = tran;
    NodeId at = src;
    for (const Hop& h : path) {
        NodeId to = net.other_end(h.channel, at);
        post.layers.push_back({at, to, h.channel});
        at = to;
    }
    return post;
}

inline HopView hop_view(const RoutePost& post) {
    if (post.position >= post.layers.size())
        throw std::logic_error("hop_view: post already at destination");
    const OnionLayer& layer = post.layers[post.position];
    NodeId prev = post.position == 0 ? layer.from : post.layers[post.position - 1].from;
    return HopView{prev, layer.to, post.tran, post.accumulated.size(), post.fee};
}

// Forward step: the hop attests its channel with (proof, statement), adds
// its charge, and peels one layer. A hop that cannot serve the amount drops
// the post; the sender only ever learns via timeout.
inline Expected<RoutePost, RpgError> rpg_forward(RoutePost post, Amount hop_public_balance,
                                                 ProofPair pair, Amount fee_charge) {
    if (post.position >= post.layers.size()) return RpgError::NotAtDestination;
    if (hop_public_balance < post.tran) return RpgError::DropPost;
    post.accumulated.push_back(std::move(pair));
    post.fee += fee_charge;
    post.position += 1;
    return post;
}

inline Expected<RouteResponse, RpgError> rpg_response(const RoutePost& post) {
    if (post.position != post.layers.size()) return RpgError::NotAtDestination;
    return RouteResponse{post.route_id, post.accumulated, post.fee};
}

// Sender-side validation of one response: every attested pair must verify
// and every hop's announced sender-side balance must cover the amount.
inline bool validate_response(const RouteResponse& resp, const PublicParams& pp, Amount tran) {
    for (const ProofPair& pair : resp.pairs) {
        if (!verify(pp, pair.statement, pair.proof)) return false;
        Amount side = pair.direction == Direction::AtoB ? pair.statement.public_balances.first
                                                        : pair.statement.public_balances.second;
        if (side < tran) return false;
    }
    return true;
}

enum class RankStrategy : std::uint8_t {
    Cheapest,  // minimum total fee
    Priority,  // highest fee within budget, to incentivize forwarding
};

struct RankedRoute {
    Path path;
    Amount total_fee = 0;
};

// Route choice over the collected fee map. Ties break on fewer hops, then
// path id, so reruns pick identical routes.
inline std::optional<std::size_t> range_rank(const std::vector<RankedRoute>& total_fee,
                                             RankStrategy strategy, Amount budget = 0) {
    std::optional<std::size_t> best;
    auto better = [&](std::size_t i, std::size_t j) {
        const RankedRoute& a = total_fee[i];
        const RankedRoute& b = total_fee[j];
        if (a.total_fee != b.total_fee)
            return strategy == RankStrategy::Cheapest ? a.total_fee < b.total_fee
                                                      : a.total_fee > b.total_fee;
        if (a.path.size() != b.path.size()) return a.path.size() < b.path.size();
        return path_id_less(a.path, b.path);
    };
    for (std::size_t i = 0; i < total_fee.size(); ++i) {
        if (strategy == RankStrategy::Priority && total_fee[i].total_fee > budget) continue;
        if (!best || better(i, *best)) best = i;
    }
    return best;
}

}  // namespace zkpcn

#endif  // ZKPCN_ROUTING_HPP
