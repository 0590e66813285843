#ifndef ZKPCN_CHANNEL_HPP
#define ZKPCN_CHANNEL_HPP

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "zkpcn/hash.hpp"
#include "zkpcn/random.hpp"
#include "zkpcn/types.hpp"

namespace zkpcn {

using BalancePair = std::pair<Amount, Amount>;  // (side A, side B)

// h = H(nonce || amount || version || sig), all fields in the canonical
// little-endian layout (nonce 16 B, amount 8 B, version 8 B, sig tag 32 B).
inline Hash256 tx_digest(const Nonce& nonce, Amount amount, std::uint64_t version,
                         const Hash256& sig) {
    HashWriter w;
    w.bytes(nonce).u64le(amount).u64le(version).bytes(sig);
    return w.finish();
}

// Modeled signature: keyed tag of the sender over (channel, version, amount,
// direction).
inline Hash256 update_sig(const Hash256& sender_secret, std::uint64_t channel_id,
                          std::uint64_t version, Amount amount, Direction dir) {
    HashWriter w;
    w.str("zkpcn.update-sig.v1");
    w.bytes(sender_secret).u64le(channel_id).u64le(version).u64le(amount);
    w.u8(static_cast<std::uint8_t>(dir));
    return w.finish();
}

inline Hash256 close_sig(const Hash256& party_secret, std::uint64_t channel_id,
                         std::uint64_t version) {
    HashWriter w;
    w.str("zkpcn.close-sig.v1");
    w.bytes(party_secret).u64le(channel_id).u64le(version);
    return w.finish();
}

struct LoggedTx {
    std::uint64_t version = 0;  // channel version this entry produced
    Amount amount = 0;
    Direction direction = Direction::AtoB;
    Nonce nonce{};
    Hash256 sig{};
    Hash256 digest{};
};

struct UpdateMsg {
    std::uint64_t channel_id = 0;
    Hash256 sig{};
    std::uint64_t version = 0;
    Amount amount = 0;
    Hash256 digest{};
    Direction direction = Direction::AtoB;
    // The protocol-box message omits the nonce, but the receiver cannot
    // re-derive the digest (nor later serve as circuit prover) without it.
    Nonce nonce{};
};

struct CloseView {
    std::uint64_t version = 0;
    Hash256 sig{};
};

struct Settlement {
    std::uint64_t channel_id = 0;
    BalancePair final_balances{0, 0};
    std::uint64_t settled_version = 0;
};

enum class PublicBalancePolicy : std::uint8_t {
    // p_sender -= amount (floored at 0), p_receiver += amount (capped at the
    // receiver's true balance). Never re-reveals true balances after t=0.
    DeltaFollow,
    // p = floor(rho * true), both sides.
    Fraction,
};

// Replay a transaction log from initial balances. Digest failures and
// negative intermediate balances are reported, not thrown: callers treat a
// bad log as data (a fraudulent or corrupt counterparty view).
inline Expected<BalancePair, ChannelError> replay_log(BalancePair initial,
                                                      std::span<const LoggedTx> log) {
    Amount a = initial.first;
    Amount b = initial.second;
    for (const LoggedTx& tx : log) {
        if (tx_digest(tx.nonce, tx.amount, tx.version, tx.sig) != tx.digest)
            return ChannelError::TamperDetected;
        Amount& from = tx.direction == Direction::AtoB ? a : b;
        Amount& to = tx.direction == Direction::AtoB ? b : a;
        if (from < tx.amount) return ChannelError::InvalidLog;
        from -= tx.amount;
        to += tx.amount;
    }
    return BalancePair{a, b};
}

// Two-party channel state. Operations are value-in/value-out transitions;
// the object itself holds no hidden references and copies freely.
class Channel {
public:
    Channel(std::uint64_t id, std::string party_a, std::string party_b, Amount x_a, Amount x_b)
        : id_(id),
          party_a_(std::move(party_a)),
          party_b_(std::move(party_b)),
          initial_{x_a, x_b},
          true_{x_a, x_b},
          public_{x_a, x_b} {}

    std::uint64_t id() const { return id_; }
    const std::string& party_a() const { return party_a_; }
    const std::string& party_b() const { return party_b_; }
    BalancePair initial_balances() const { return initial_; }
    BalancePair true_balances() const { return true_; }
    BalancePair public_balances() const { return public_; }
    Amount capacity() const { return true_.first + true_.second; }
    std::uint64_t version() const { return version_base_ + log_.size(); }
    std::uint64_t version_base() const { return version_base_; }
    const std::vector<LoggedTx>& log() const { return log_; }

    Amount true_balance(Direction sender_side) const {
        return sender_side == Direction::AtoB ? true_.first : true_.second;
    }
    Amount public_balance(Direction sender_side) const {
        return sender_side == Direction::AtoB ? public_.first : public_.second;
    }

    void set_public_balances(Amount p_a, Amount p_b) {
        if (p_a > true_.first || p_b > true_.second)
            throw std::invalid_argument("public balance above true balance");
        public_ = {p_a, p_b};
    }

    // Log compaction: current true balances become the new replay baseline
    // and the log empties. The channel version keeps counting so the
    // highest-version close rule stays sound across resets.
    void reset_baseline() {
        version_base_ = version();
        initial_ = true_;
        log_.clear();
    }

    friend Expected<Channel, ChannelError> apply_update(const Channel&, const UpdateMsg&,
                                                        PublicBalancePolicy, double);

private:
    std::uint64_t id_;
    std::string party_a_;
    std::string party_b_;
    BalancePair initial_;
    BalancePair true_;
    BalancePair public_;
    std::uint64_t version_base_ = 0;
    std::vector<LoggedTx> log_;
};

inline Channel open_channel(const std::string& a, const std::string& b, Amount x_a, Amount x_b,
                            std::uint64_t id = 0) {
    if (a == b) throw std::invalid_argument("open_channel: parties must differ");
    if (x_a + x_b == 0) throw std::invalid_argument("open_channel: zero total deposit");
    return Channel(id, a, b, x_a, x_b);
}

// Sender-side half of an update: next version, fresh nonce, modeled
// signature, digest per the hash chain.
inline Expected<UpdateMsg, ChannelError> make_update(const Channel& ch, Direction direction,
                                                     Amount amount, Rng& rng) {
    if (amount == 0) throw std::invalid_argument("make_update: amount must be positive");
    if (ch.true_balance(direction) < amount) return ChannelError::InsufficientFunds;

    const std::string& sender =
        direction == Direction::AtoB ? ch.party_a() : ch.party_b();
    UpdateMsg msg;
    msg.channel_id = ch.id();
    msg.version = ch.version() + 1;
    msg.amount = amount;
    msg.direction = direction;
    msg.nonce = rand_nonce(rng);
    msg.sig = update_sig(node_secret(sender), ch.id(), msg.version, amount, direction);
    msg.digest = tx_digest(msg.nonce, msg.amount, msg.version, msg.sig);
    return msg;
}

// Receiver-side half: validates version, digest, signature and funds, then
// returns the advanced channel state.
inline Expected<Channel, ChannelError> apply_update(
    const Channel& ch, const UpdateMsg& msg,
    PublicBalancePolicy policy = PublicBalancePolicy::DeltaFollow, double fraction_rho = 0.5) {
    if (msg.version != ch.version() + 1) return ChannelError::VersionMismatch;
    if (tx_digest(msg.nonce, msg.amount, msg.version, msg.sig) != msg.digest)
        return ChannelError::TamperDetected;
    const std::string& sender =
        msg.direction == Direction::AtoB ? ch.party_a() : ch.party_b();
    if (update_sig(node_secret(sender), ch.id(), msg.version, msg.amount, msg.direction) !=
        msg.sig)
        return ChannelError::TamperDetected;
    if (ch.true_balance(msg.direction) < msg.amount) return ChannelError::InsufficientFunds;

    Channel next = ch;
    Amount& from = msg.direction == Direction::AtoB ? next.true_.first : next.true_.second;
    Amount& to = msg.direction == Direction::AtoB ? next.true_.second : next.true_.first;
    from -= msg.amount;
    to += msg.amount;

    switch (policy) {
        case PublicBalancePolicy::DeltaFollow: {
            Amount& p_from =
                msg.direction == Direction::AtoB ? next.public_.first : next.public_.second;
            Amount& p_to =
                msg.direction == Direction::AtoB ? next.public_.second : next.public_.first;
            p_from = p_from > msg.amount ? p_from - msg.amount : 0;
            p_to = std::min(p_to + msg.amount, to);
            break;
        }
        case PublicBalancePolicy::Fraction: {
            double rho = std::clamp(fraction_rho, 0.0, 1.0);
            next.public_.first = static_cast<Amount>(rho * static_cast<double>(next.true_.first));
            next.public_.second =
                static_cast<Amount>(rho * static_cast<double>(next.true_.second));
            break;
        }
    }

    next.log_.push_back(
        {msg.version, msg.amount, msg.direction, msg.nonce, msg.sig, msg.digest});
    return next;
}

inline CloseView make_close_view(const Channel& ch, Direction party, std::uint64_t version) {
    const std::string& name = party == Direction::AtoB ? ch.party_a() : ch.party_b();
    return CloseView{version, close_sig(node_secret(name), ch.id(), version)};
}

// Settles at the higher of the two submitted versions; the final balances
// are the log replay at that version. Claims outside the retained log are
// fraudulent.
inline Expected<Settlement, ChannelError> close_channel(const Channel& ch,
                                                        const CloseView& view_a,
                                                        const CloseView& view_b) {
    if (view_a.sig != close_sig(node_secret(ch.party_a()), ch.id(), view_a.version) ||
        view_b.sig != close_sig(node_secret(ch.party_b()), ch.id(), view_b.version))
        return ChannelError::FraudulentClaim;

    std::uint64_t settle_at = std::max(view_a.version, view_b.version);
    if (settle_at > ch.version() || settle_at < ch.version_base())
        return ChannelError::FraudulentClaim;

    std::size_t prefix = static_cast<std::size_t>(settle_at - ch.version_base());
    auto replay =
        replay_log(ch.initial_balances(), std::span(ch.log().data(), prefix));
    if (!replay.ok()) return replay.error();
    return Settlement{ch.id(), replay.value(), settle_at};
}

}  // namespace zkpcn

#endif  // ZKPCN_CHANNEL_HPP
