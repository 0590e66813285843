#ifndef ZKPCN_TYPES_HPP
#define ZKPCN_TYPES_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

namespace zkpcn {

// Coin amounts are integer base units; all balance arithmetic is exact.
using Amount = std::uint64_t;

// Dense indices into Network::node_names / Network::channels.
using NodeId = std::uint32_t;
using ChannelId = std::uint32_t;

using Hash256 = std::array<std::uint8_t, 32>;
using Nonce = std::array<std::uint8_t, 16>;

// Payment direction relative to a channel's (A, B) party order.
enum class Direction : std::uint8_t { AtoB = 0, BtoA = 1 };

inline Direction reverse(Direction d) {
    return d == Direction::AtoB ? Direction::BtoA : Direction::AtoB;
}

enum class ChannelError {
    InsufficientFunds,
    VersionMismatch,
    TamperDetected,
    InvalidLog,
    FraudulentClaim,
};

inline const char* to_string(ChannelError e) {
    switch (e) {
        case ChannelError::InsufficientFunds: return "InsufficientFunds";
        case ChannelError::VersionMismatch: return "VersionMismatch";
        case ChannelError::TamperDetected: return "TamperDetected";
        case ChannelError::InvalidLog: return "InvalidLog";
        case ChannelError::FraudulentClaim: return "FraudulentClaim";
    }
    return "?";
}

// Minimal result type: value or typed error. Used where failure is an
// expected outcome the caller branches on; hard contract violations throw.
template <typename T, typename E>
class Expected {
public:
    Expected(T value) : store_(std::move(value)) {}
    Expected(E error) : store_(std::move(error)) {}

    bool ok() const { return std::holds_alternative<T>(store_); }
    explicit operator bool() const { return ok(); }

    T& value() {
        if (!ok()) throw std::logic_error("Expected: no value");
        return std::get<T>(store_);
    }
    const T& value() const {
        if (!ok()) throw std::logic_error("Expected: no value");
        return std::get<T>(store_);
    }
    E error() const {
        if (ok()) throw std::logic_error("Expected: no error");
        return std::get<E>(store_);
    }

    T& operator*() { return value(); }
    const T& operator*() const { return value(); }
    T* operator->() { return &value(); }
    const T* operator->() const { return &value(); }

private:
    std::variant<T, E> store_;
};

}  // namespace zkpcn

#endif  // ZKPCN_TYPES_HPP
