#ifndef ZKPCN_SIM_HPP
#define ZKPCN_SIM_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

#include "zkpcn/channel.hpp"
#include "zkpcn/random.hpp"
#include "zkpcn/routing.hpp"
#include "zkpcn/topology.hpp"
#include "zkpcn/types.hpp"
#include "zkpcn/workload.hpp"
#include "zkpcn/zk.hpp"

namespace zkpcn {

enum class Mode : std::uint8_t { LN, ZKPCN, ZKIPCN };

inline const char* to_string(Mode m) {
    switch (m) {
        case Mode::LN: return "ln";
        case Mode::ZKPCN: return "zkpcn";
        case Mode::ZKIPCN: return "zkipcn";
    }
    return "?";
}

enum class ProverAlternation : std::uint8_t { Deterministic, Seeded };

enum class FailureReason : std::uint8_t {
    None,
    NoRoute,
    InsufficientFunds,
    StaleBalance,
    Timeout,
};

struct SimConfig {
    Mode mode = Mode::ZKPCN;
    std::uint64_t capacity_factor = 1;
    WorkloadSpec workload;
    double reachability = 1.0;
    LatencyModel latency = LatencyModel::zero();
    double per_hop_delay_ms = 1.0;
    double inter_arrival_ms = 1.0;
    std::uint32_t decoy_count = 2;
    std::uint32_t k_hop = 3;
    std::uint32_t ln_max_retries = 10;
    std::uint32_t max_candidate_routes = 3;
    ProverAlternation alternation = ProverAlternation::Deterministic;
    PublicBalancePolicy public_policy = PublicBalancePolicy::DeltaFollow;
    double fraction_rho = 0.5;
    std::uint64_t reset_threshold = 1000;
    std::uint32_t fixed_hash_count = 0;  // >0 pins every prover cost to this hash count
    RankStrategy rank_strategy = RankStrategy::Cheapest;
    Amount rank_budget = 0;
    FeePolicy fee_policy;
    bool decoy_jitter_publics = false;
    std::uint64_t seed = 1;

    void validate() const {
        workload.validate();
        if (capacity_factor < 1) throw std::invalid_argument("config: capacity_factor >= 1");
        if (reachability < 0.0 || reachability > 1.0)
            throw std::invalid_argument("config: reachability must be in [0,1]");
        if (!(inter_arrival_ms > 0.0))
            throw std::invalid_argument("config: inter_arrival_ms must be positive");
        if (per_hop_delay_ms < 0.0)
            throw std::invalid_argument("config: per_hop_delay_ms must be >= 0");
        if (fraction_rho < 0.0 || fraction_rho > 1.0)
            throw std::invalid_argument("config: fraction_rho must be in [0,1]");
        if (k_hop < 1) throw std::invalid_argument("config: k_hop >= 1");
        if (ln_max_retries < 1) throw std::invalid_argument("config: ln_max_retries >= 1");
        if (max_candidate_routes < 1)
            throw std::invalid_argument("config: max_candidate_routes >= 1");
        if (reset_threshold < 1) throw std::invalid_argument("config: reset_threshold >= 1");
    }
};

struct PaymentOutcome {
    bool success = false;
    FailureReason reason = FailureReason::None;
    Path path;
    std::uint32_t hops = 0;
    Amount fees = 0;
    std::uint32_t proofs_generated = 0;
    std::uint32_t retries = 0;
    double latency_ms = 0.0;
};

struct Metrics {
    std::uint64_t tx_count = 0;
    std::uint64_t successes = 0;
    std::uint64_t fail_no_route = 0;
    std::uint64_t fail_insufficient = 0;
    std::uint64_t fail_stale = 0;
    std::uint64_t fail_timeout = 0;
    std::uint64_t proofs_generated = 0;
    std::uint64_t broadcast_messages = 0;
    std::uint64_t retries_total = 0;
    double success_rate = 0.0;
    double mean_path_length = 0.0;
    double proofs_per_tx_slope = 0.0;
    std::vector<std::uint64_t> cumulative_proofs;  // index 0 = before any payment

    bool operator==(const Metrics&) const = default;
};

// Least-squares slope of y over x = 0..n-1.
inline double least_squares_slope(std::span<const std::uint64_t> series) {
    if (series.size() < 2) throw std::invalid_argument("least_squares_slope: need >= 2 points");
    double n = static_cast<double>(series.size());
    double mean_x = (n - 1.0) / 2.0;
    double mean_y = 0.0;
    for (std::uint64_t y : series) mean_y += static_cast<double>(y);
    mean_y /= n;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        double dx = static_cast<double>(i) - mean_x;
        num += dx * (static_cast<double>(series[i]) - mean_y);
        den += dx * dx;
    }
    return num / den;
}

// Per-receiver Bernoulli(reachability) delivery; channel parties are never
// in the recipient set because they already hold their own state.
inline std::vector<NodeId> sample_broadcast_recipients(Rng& rng, std::size_t node_count,
                                                       NodeId party_a, NodeId party_b,
                                                       double reachability) {
    std::vector<NodeId> delivered;
    for (NodeId n = 0; n < node_count; ++n) {
        if (n == party_a || n == party_b) continue;
        if (rand_bernoulli(rng, reachability)) delivered.push_back(n);
    }
    return delivered;
}

inline bool maybe_reset_channel(Channel& ch, std::uint64_t reset_threshold) {
    if (ch.log().size() < reset_threshold) return false;
    ch.reset_baseline();
    return true;
}

// Deterministic discrete-event simulator. One event loop, a total event
// order keyed by (time, sequence), and every random draw from seed-derived
// substreams, so Metrics is a pure function of (SimConfig, Network).
class SimEngine {
public:
    // `base_net` carries unfactored capacities; the engine applies
    // cfg.capacity_factor itself so that transaction amounts stay anchored
    // to the base median while capacities expand.
    SimEngine(SimConfig cfg, const Network& base_net)
        : cfg_(std::move(cfg)),
          net_(apply_capacity_factor(base_net, cfg_.capacity_factor)),
          pp_(setup(std::max<std::uint64_t>(cfg_.reset_threshold, 1), 128)),
          workload_rng_(split_seed(cfg_.seed, 1)),
          proto_rng_(split_seed(cfg_.seed, 2)),
          gossip_rng_(split_seed(cfg_.seed, 3)),
          decoy_rng_(split_seed(cfg_.seed, 4)) {
        cfg_.validate();
        if (!net_.connected()) throw std::invalid_argument("SimEngine: network must be connected");
        amount_upper_ = cfg_.workload.amount_upper != 0 ? cfg_.workload.amount_upper
                                                        : median_capacity(base_net);

        channels_.reserve(net_.channel_count());
        for (ChannelId c = 0; c < net_.channel_count(); ++c) {
            const ChannelSpec& spec = net_.channel(c);
            auto [xa, xb] = initial_balance_split(net_, c);
            LiveChannel lc{open_channel(net_.node_name(spec.a), net_.node_name(spec.b), xa, xb, c)};
            // The open state is public knowledge; every channel starts with
            // a valid cached announcement for it (not metered as payment
            // work).
            Statement stmt = channel_statement(lc.ch);
            auto proved = prove(pp_, stmt, channel_witness(lc.ch), cfg_.latency);
            lc.cache_stmt = std::move(stmt);
            lc.cache_proof = proved->proof;
            channels_.push_back(std::move(lc));
        }

        if (cfg_.mode == Mode::ZKPCN) {
            tables_.reserve(net_.node_count());
            for (NodeId n = 0; n < net_.node_count(); ++n)
                tables_.push_back(RoutingTable::initial(net_, n));
        }
        if (cfg_.mode == Mode::ZKIPCN) views_.resize(net_.node_count());
    }

    const Network& network() const { return net_; }
    Amount amount_upper() const { return amount_upper_; }
    const Channel& channel_state(ChannelId c) const { return channels_.at(c).ch; }
    const RoutingTable& table(NodeId n) const { return tables_.at(n); }

    Amount total_true_balance() const {
        Amount sum = 0;
        for (const LiveChannel& lc : channels_) {
            auto [a, b] = lc.ch.true_balances();
            sum += a + b;
        }
        return sum;
    }

    // Runs the configured workload.
    Metrics run() {
        std::vector<Payment> payments;
        payments.reserve(cfg_.workload.tx_count);
        for (std::uint64_t i = 0; i < cfg_.workload.tx_count; ++i)
            payments.push_back(
                sample_payment(workload_rng_, cfg_.workload, net_.node_count(), amount_upper_));
        return run_scripted(payments);
    }

    // Runs an explicit payment list on the arrival schedule; outcomes land
    // in payment order regardless of event resolution order.
    Metrics run_scripted(const std::vector<Payment>& payments) {
        outcomes_.assign(payments.size(), {});
        if (cfg_.mode == Mode::ZKIPCN) probes_.assign(payments.size(), {});
        for (std::size_t i = 0; i < payments.size(); ++i)
            push_event(arrival_time(i), EventKind::PaymentArrival, i, 0, 0);

        while (!events_.empty()) {
            Event ev = events_.top();
            events_.pop();
            now_ = ev.time;
            switch (ev.kind) {
                case EventKind::PaymentArrival:
                    handle_arrival(payments[ev.pay], ev.pay);
                    break;
                case EventKind::AnnouncementReady:
                    handle_announcement_ready(ev.gen);
                    break;
                case EventKind::ProbeHop:
                    handle_probe_hop(payments[ev.pay], ev.pay, ev.route);
                    break;
                case EventKind::ProbeResponse:
                    handle_probe_response(payments[ev.pay], ev.pay, ev.route);
                    break;
                case EventKind::ProbeDecision:
                    handle_probe_decision(payments[ev.pay], ev.pay);
                    break;
            }
        }
        return finalize(payments.size());
    }

    const std::vector<PaymentOutcome>& outcomes() const { return outcomes_; }

private:
    struct LiveChannel {
        Channel ch;
        std::uint64_t announce_seq = 0;
        std::uint64_t latest_gen = 0;  // supersedes older in-flight generations
        bool dirty = false;            // state changed since cached announcement
        double gen_ready_at = 0.0;     // when the cached announcement exists
        Statement cache_stmt;
        Proof cache_proof;
        Direction next_prover = Direction::AtoB;
    };

    enum class EventKind : std::uint8_t {
        PaymentArrival,
        AnnouncementReady,
        ProbeHop,
        ProbeResponse,
        ProbeDecision,
    };

    struct Event {
        double time = 0.0;
        std::uint64_t seq = 0;
        EventKind kind = EventKind::PaymentArrival;
        std::uint32_t pay = 0;
        std::uint32_t route = 0;
        std::uint64_t gen = 0;

        bool operator>(const Event& o) const {
            if (time != o.time) return time > o.time;
            return seq > o.seq;
        }
    };

    struct PendingGen {
        ChannelId channel = 0;
        std::uint64_t gen_id = 0;
        std::uint64_t announce_seq = 0;
        Statement stmt;
        Proof proof;
        bool adjacent_only = false;
    };

    struct ProbeRoute {
        Path path;
        RoutePost post;
        bool dead = false;
        bool responded = false;
        RouteResponse response;
    };

    struct ProbeState {
        double arrival = 0.0;
        std::vector<ProbeRoute> routes;
        std::size_t outstanding = 0;
        std::size_t candidate_hops = 0;
        bool decided = false;
    };

    double arrival_time(std::size_t i) const {
        return (static_cast<double>(i) + 1.0) * cfg_.inter_arrival_ms;
    }

    void push_event(double t, EventKind kind, std::uint32_t pay, std::uint32_t route,
                    std::uint64_t gen) {
        events_.push(Event{t, event_seq_++, kind, pay, route, gen});
    }

    double prover_cost(std::size_t digest_count) const {
        std::uint64_t n = cfg_.fixed_hash_count != 0
                              ? cfg_.fixed_hash_count
                              : std::max<std::uint64_t>(1, digest_count);
        return cfg_.latency.prover_ms(n);
    }

    // ---- commit machinery (shared by all modes) ----

    bool hops_have_true_balance(const Path& path, Amount amount) const {
        return std::all_of(path.begin(), path.end(), [&](const Hop& h) {
            return channels_[h.channel].ch.true_balance(h.direction) >= amount;
        });
    }

    // Applies the full update protocol along the path. Callers must have
    // checked balances; a mid-path failure here would be an engine bug, so
    // it throws rather than unwinding.
    void commit_path(const Path& path, Amount amount) {
        for (const Hop& h : path) {
            LiveChannel& lc = channels_[h.channel];
            auto msg = make_update(lc.ch, h.direction, amount, proto_rng_);
            if (!msg.ok()) throw std::logic_error("commit_path: unchecked balance");
            auto next = apply_update(lc.ch, msg.value(), cfg_.public_policy, cfg_.fraction_rho);
            if (!next.ok()) throw std::logic_error("commit_path: update rejected");
            lc.ch = std::move(next.value());
            lc.dirty = true;
        }
    }

    Amount path_fees(const Path& path, Amount amount) const {
        return static_cast<Amount>(path.size()) * cfg_.fee_policy.fee(amount);
    }

    // ---- proof generation & gossip (zk-PCN) ----

    Direction pick_prover(LiveChannel& lc) {
        if (cfg_.alternation == ProverAlternation::Seeded)
            return rand_below(decoy_rng_, 2) == 0 ? Direction::AtoB : Direction::BtoA;
        Direction d = lc.next_prover;
        lc.next_prover = reverse(d);
        return d;
    }

    // Starts one proof generation for the channel's current state and
    // schedules its network-wide (or adjacent-only) broadcast at completion.
    // Returns the simulated prover cost.
    double start_generation(ChannelId c, std::uint32_t pay, bool adjacent_only) {
        LiveChannel& lc = channels_[c];
        pick_prover(lc);
        lc.announce_seq += 1;
        lc.latest_gen = ++gen_counter_;

        PendingGen g;
        g.channel = c;
        g.gen_id = lc.latest_gen;
        g.announce_seq = lc.announce_seq;
        g.stmt = channel_statement(lc.ch);
        auto proved = prove(pp_, g.stmt, channel_witness(lc.ch), cfg_.latency);
        if (!proved.ok()) throw std::logic_error("start_generation: relation refused");
        g.proof = std::move(proved->proof);
        g.adjacent_only = adjacent_only;
        double cost = prover_cost(g.stmt.tx_digests.size());

        outcomes_[pay].proofs_generated += 1;
        metrics_proofs_ += 1;

        // The channel parties learn the new publics instantly.
        if (cfg_.mode == Mode::ZKPCN) {
            const ChannelSpec& spec = net_.channel(c);
            auto pub = lc.ch.public_balances();
            tables_[spec.a].set_direct(c, pub.first, pub.second, lc.announce_seq);
            tables_[spec.b].set_direct(c, pub.first, pub.second, lc.announce_seq);
        }

        pending_gens_.push_back(std::move(g));
        push_event(now_ + cost, EventKind::AnnouncementReady, pay, 0, gen_counter_);
        return cost;
    }

    void handle_announcement_ready(std::uint64_t gen_id) {
        auto it = std::find_if(pending_gens_.begin(), pending_gens_.end(),
                               [&](const PendingGen& g) { return g.gen_id == gen_id; });
        if (it == pending_gens_.end()) return;
        PendingGen g = std::move(*it);
        pending_gens_.erase(it);

        LiveChannel& lc = channels_[g.channel];
        if (g.gen_id != lc.latest_gen) return;  // superseded by a newer commit

        lc.cache_stmt = g.stmt;
        lc.cache_proof = g.proof;
        lc.gen_ready_at = now_;
        // dirty stays set if the state changed again meanwhile
        if (lc.cache_stmt.public_balances == lc.ch.public_balances() &&
            lc.cache_stmt.tx_digests.size() == lc.ch.log().size())
            lc.dirty = false;

        Announcement ann{g.channel, std::move(g.stmt), std::move(g.proof), g.announce_seq};
        const ChannelSpec& spec = net_.channel(g.channel);
        if (g.adjacent_only) {
            // Update Channel*: proofs travel one hop only.
            std::vector<NodeId> neighbors;
            for (NodeId party : {spec.a, spec.b})
                for (ChannelId c : net_.incident(party))
                    neighbors.push_back(net_.other_end(c, party));
            std::sort(neighbors.begin(), neighbors.end());
            neighbors.erase(std::unique(neighbors.begin(), neighbors.end()), neighbors.end());
            for (NodeId n : neighbors) {
                if (n == spec.a || n == spec.b) continue;
                if (rand_bernoulli(gossip_rng_, cfg_.reachability)) metrics_broadcasts_ += 1;
            }
            return;
        }

        bool proof_ok = verify(pp_, ann.statement, ann.proof);  // same result for all receivers
        auto delivered = sample_broadcast_recipients(gossip_rng_, net_.node_count(), spec.a,
                                                     spec.b, cfg_.reachability);
        metrics_broadcasts_ += delivered.size();
        if (cfg_.mode == Mode::ZKPCN)
            for (NodeId n : delivered) tables_[n].apply_prechecked(ann, proof_ok);
    }

    // Decoy cover traffic: channels adjacent to the path refresh their
    // announcements so observers cannot tell which channels moved funds.
    std::vector<ChannelId> pick_decoys(const Path& path, NodeId src) {
        if (cfg_.decoy_count == 0) return {};
        std::vector<char> on_path(net_.channel_count(), 0);
        for (const Hop& h : path) on_path[h.channel] = 1;
        std::vector<ChannelId> candidates;
        for (NodeId n : path_nodes(net_, src, path))
            for (ChannelId c : net_.incident(n))
                if (!on_path[c]) candidates.push_back(c);
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

        std::size_t want = std::min<std::size_t>(cfg_.decoy_count, candidates.size());
        for (std::size_t i = 0; i < want; ++i) {
            std::size_t j = i + rand_below(decoy_rng_, candidates.size() - i);
            std::swap(candidates[i], candidates[j]);
        }
        candidates.resize(want);
        std::sort(candidates.begin(), candidates.end());
        return candidates;
    }

    void run_decoys(const Path& path, NodeId src, std::uint32_t pay) {
        for (ChannelId c : pick_decoys(path, src)) {
            LiveChannel& lc = channels_[c];
            if (cfg_.decoy_jitter_publics) {
                auto [pa, pb] = lc.ch.public_balances();
                if (pa > 0) pa -= rand_below(decoy_rng_, pa / 8 + 1);
                if (pb > 0) pb -= rand_below(decoy_rng_, pb / 8 + 1);
                lc.ch.set_public_balances(pa, pb);
                lc.dirty = true;
            }
            start_generation(c, pay, /*adjacent_only=*/false);
        }
    }

    // ---- per-mode payment execution ----

    void handle_arrival(const Payment& p, std::uint32_t pay) {
        switch (cfg_.mode) {
            case Mode::LN: execute_ln(p, pay); break;
            case Mode::ZKPCN: execute_zkpcn(p, pay); break;
            case Mode::ZKIPCN: begin_zkipcn_probe(p, pay); break;
        }
    }

    void execute_ln(const Payment& p, std::uint32_t pay) {
        PaymentOutcome& out = outcomes_[pay];
        auto usable = [&](ChannelId c, NodeId) { return net_.channel(c).capacity >= p.amount; };
        KShortestPaths gen(net_, p.sender, p.recipient, usable);

        std::uint32_t attempts = 0;
        while (attempts < cfg_.ln_max_retries) {
            auto path = gen.next();
            if (!path) break;
            ++attempts;
            if (!hops_have_true_balance(*path, p.amount)) continue;
            commit_path(*path, p.amount);
            for (const Hop& h : *path) maybe_reset_channel(channels_[h.channel].ch, cfg_.reset_threshold);
            out.success = true;
            out.path = std::move(*path);
            out.hops = static_cast<std::uint32_t>(out.path.size());
            out.fees = path_fees(out.path, p.amount);
            out.retries = attempts - 1;
            out.latency_ms = static_cast<double>(out.hops) * cfg_.per_hop_delay_ms;
            return;
        }
        out.success = false;
        out.retries = attempts > 0 ? attempts - 1 : 0;
        out.reason = attempts == 0 ? FailureReason::NoRoute : FailureReason::InsufficientFunds;
    }

    void execute_zkpcn(const Payment& p, std::uint32_t pay) {
        PaymentOutcome& out = outcomes_[pay];
        auto route = zkpcn_select_route(tables_[p.sender], net_, p.sender, p.recipient, p.amount);
        if (!route) {
            out.reason = FailureReason::NoRoute;
            return;
        }
        if (!hops_have_true_balance(*route, p.amount)) {
            // The table promised balance the channel no longer has.
            out.reason = FailureReason::StaleBalance;
            out.path = std::move(*route);
            out.hops = static_cast<std::uint32_t>(out.path.size());
            return;
        }
        commit_path(*route, p.amount);
        for (const Hop& h : *route) {
            start_generation(h.channel, pay, /*adjacent_only=*/false);
            maybe_reset_channel(channels_[h.channel].ch, cfg_.reset_threshold);
        }
        run_decoys(*route, p.sender, pay);
        out.success = true;
        out.path = std::move(*route);
        out.hops = static_cast<std::uint32_t>(out.path.size());
        out.fees = path_fees(out.path, p.amount);
        out.latency_ms = static_cast<double>(out.hops) * cfg_.per_hop_delay_ms;
    }

    // ---- zk-IPCN: probe, respond, decide, commit ----

    const StaticView& sender_view(NodeId n) {
        if (!views_[n]) views_[n] = k_hop_view(net_, n, cfg_.k_hop);
        return *views_[n];
    }

    void begin_zkipcn_probe(const Payment& p, std::uint32_t pay) {
        ProbeState& ps = probes_[pay];
        ps.arrival = now_;
        auto routes = find_candidate_routes(net_, sender_view(p.sender), p.sender, p.recipient,
                                            p.amount, cfg_.max_candidate_routes);
        if (routes.empty()) {
            outcomes_[pay].reason = FailureReason::NoRoute;
            ps.decided = true;
            return;
        }
        std::size_t max_len = 0;
        for (std::size_t r = 0; r < routes.size(); ++r) {
            ProbeRoute pr;
            pr.path = std::move(routes[r]);
            max_len = std::max(max_len, pr.path.size());
            ps.candidate_hops += pr.path.size();
            pr.post = make_route_post(net_, pay * 1000 + r, p.amount, p.sender, pr.path);
            ps.routes.push_back(std::move(pr));
        }
        ps.outstanding = ps.routes.size();
        for (std::uint32_t r = 0; r < ps.routes.size(); ++r)
            push_event(now_ + cfg_.per_hop_delay_ms, EventKind::ProbeHop, pay, r, 0);

        // Sender timeout: full round trip plus a worst-case reactive
        // regeneration at every hop, plus a strict margin so a response
        // landing exactly on the bound still wins. It only fires when a
        // post was dropped.
        double worst_gen = prover_cost(cfg_.reset_threshold);
        double timeout = 2.0 * static_cast<double>(max_len) * cfg_.per_hop_delay_ms +
                         static_cast<double>(max_len) * worst_gen + 1e-6;
        push_event(now_ + timeout, EventKind::ProbeDecision, pay, 0, 0);
    }

    void handle_probe_hop(const Payment& p, std::uint32_t pay, std::uint32_t route) {
        ProbeState& ps = probes_[pay];
        if (ps.decided) return;
        ProbeRoute& pr = ps.routes[route];
        if (pr.dead) return;

        const Hop& hop = pr.path[pr.post.position];
        LiveChannel& lc = channels_[hop.channel];

        double wait = 0.0;
        if (lc.dirty) {
            // Reactive proof generation: this is where zk-IPCN pays prover
            // time, and the only place it generates proofs at all.
            wait = start_generation(hop.channel, pay, /*adjacent_only=*/true);
            lc.gen_ready_at = now_ + wait;
            lc.dirty = false;
            const PendingGen& g = pending_gens_.back();
            lc.cache_stmt = g.stmt;
            lc.cache_proof = g.proof;
        } else if (lc.gen_ready_at > now_) {
            wait = lc.gen_ready_at - now_;  // a probe already triggered one
        }

        ProofPair pair{hop.channel, hop.direction, lc.cache_stmt, lc.cache_proof};
        auto forwarded = rpg_forward(std::move(pr.post), lc.ch.public_balance(hop.direction),
                                     std::move(pair), cfg_.fee_policy.fee(p.amount));
        if (!forwarded.ok()) {
            // Silent drop. The sender cannot observe it, so it keeps
            // waiting until its timeout fires.
            pr.dead = true;
            return;
        }
        pr.post = std::move(forwarded.value());

        if (pr.post.position == pr.path.size()) {
            double back = static_cast<double>(pr.path.size()) * cfg_.per_hop_delay_ms;
            push_event(now_ + wait + back, EventKind::ProbeResponse, pay, route, 0);
        } else {
            push_event(now_ + wait + cfg_.per_hop_delay_ms, EventKind::ProbeHop, pay, route, 0);
        }
    }

    void handle_probe_response(const Payment& p, std::uint32_t pay, std::uint32_t route) {
        ProbeState& ps = probes_[pay];
        if (ps.decided) return;
        ProbeRoute& pr = ps.routes[route];
        // Responses ride the same lossy links as announcements.
        if (!rand_bernoulli(gossip_rng_, cfg_.reachability)) {
            pr.dead = true;
            return;
        }
        auto resp = rpg_response(pr.post);
        if (!resp.ok()) throw std::logic_error("probe response before destination");
        pr.response = std::move(resp.value());
        pr.responded = true;
        ps.outstanding -= 1;
        if (ps.outstanding == 0) decide_zkipcn(p, pay);  // every candidate answered
    }

    void handle_probe_decision(const Payment& p, std::uint32_t pay) {
        ProbeState& ps = probes_[pay];
        if (ps.decided) return;
        decide_zkipcn(p, pay);
    }

    void decide_zkipcn(const Payment& p, std::uint32_t pay) {
        ProbeState& ps = probes_[pay];
        ps.decided = true;
        PaymentOutcome& out = outcomes_[pay];

        std::vector<RankedRoute> ranked;
        std::vector<std::size_t> origin;
        for (std::size_t r = 0; r < ps.routes.size(); ++r) {
            const ProbeRoute& pr = ps.routes[r];
            if (!pr.responded) continue;
            if (!validate_response(pr.response, pp_, p.amount)) continue;
            ranked.push_back({pr.path, pr.response.total_fee});
            origin.push_back(r);
        }
        auto pick = range_rank(ranked, cfg_.rank_strategy, cfg_.rank_budget);
        if (!pick) {
            out.reason = FailureReason::Timeout;
            out.latency_ms = now_ - ps.arrival;
            return;
        }
        const Path& path = ranked[*pick].path;
        if (!hops_have_true_balance(path, p.amount)) {
            out.reason = FailureReason::StaleBalance;
            out.path = path;
            out.hops = static_cast<std::uint32_t>(path.size());
            out.latency_ms = now_ - ps.arrival;
            return;
        }
        commit_path(path, p.amount);
        for (const Hop& h : path) maybe_reset_channel(channels_[h.channel].ch, cfg_.reset_threshold);
        out.success = true;
        out.path = path;
        out.hops = static_cast<std::uint32_t>(path.size());
        out.fees = ranked[*pick].total_fee;
        out.latency_ms = (now_ - ps.arrival) +
                         static_cast<double>(path.size()) * cfg_.per_hop_delay_ms;
        (void)origin;
    }

    Metrics finalize(std::size_t tx_count) {
        Metrics m;
        m.tx_count = tx_count;
        m.cumulative_proofs.reserve(tx_count + 1);
        m.cumulative_proofs.push_back(0);
        std::uint64_t cum = 0;
        std::uint64_t path_hops = 0;
        for (const PaymentOutcome& out : outcomes_) {
            cum += out.proofs_generated;
            m.cumulative_proofs.push_back(cum);
            m.retries_total += out.retries;
            if (out.success) {
                m.successes += 1;
                path_hops += out.hops;
            } else {
                switch (out.reason) {
                    case FailureReason::NoRoute: m.fail_no_route += 1; break;
                    case FailureReason::InsufficientFunds: m.fail_insufficient += 1; break;
                    case FailureReason::StaleBalance: m.fail_stale += 1; break;
                    case FailureReason::Timeout: m.fail_timeout += 1; break;
                    case FailureReason::None: break;
                }
            }
        }
        m.proofs_generated = metrics_proofs_;
        m.broadcast_messages = metrics_broadcasts_;
        m.success_rate =
            tx_count == 0 ? 0.0 : static_cast<double>(m.successes) / static_cast<double>(tx_count);
        m.mean_path_length =
            m.successes == 0 ? 0.0
                             : static_cast<double>(path_hops) / static_cast<double>(m.successes);
        if (m.cumulative_proofs.size() >= 2)
            m.proofs_per_tx_slope = least_squares_slope(m.cumulative_proofs);
        return m;
    }

    SimConfig cfg_;
    Network net_;
    PublicParams pp_;
    Amount amount_upper_ = 0;
    Rng workload_rng_;
    Rng proto_rng_;
    Rng gossip_rng_;
    Rng decoy_rng_;

    std::vector<LiveChannel> channels_;
    std::vector<RoutingTable> tables_;
    std::vector<std::optional<StaticView>> views_;
    std::vector<PaymentOutcome> outcomes_;
    std::vector<ProbeState> probes_;
    std::vector<PendingGen> pending_gens_;

    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events_;
    std::uint64_t event_seq_ = 0;
    std::uint64_t gen_counter_ = 0;
    double now_ = 0.0;
    std::uint64_t metrics_proofs_ = 0;
    std::uint64_t metrics_broadcasts_ = 0;
};

inline Metrics run_simulation(const SimConfig& cfg, const Network& base_net) {
    SimEngine engine(cfg, base_net);
    return engine.run();
}

}  // namespace zkpcn

#endif  // ZKPCN_SIM_HPP
