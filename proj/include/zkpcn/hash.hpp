#ifndef ZKPCN_HASH_HPP
#define ZKPCN_HASH_HPP

#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/evp.h>

#include "zkpcn/types.hpp"

namespace zkpcn {

inline Hash256 sha256(std::span<const std::uint8_t> data) {
    Hash256 out{};
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr);
    return out;
}

// Accumulates the canonical byte encoding: integers little-endian, fixed
// widths, raw byte arrays appended as-is. All digests, signature tags and
// proof bodies in this library are hashes of writer output, so the layout
// here is the wire format (see tests/data/golden_vectors.txt).
class HashWriter {
public:
    HashWriter& u8(std::uint8_t v) {
        buf_.push_back(v);
        return *this;
    }
    HashWriter& u64le(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        return *this;
    }
    HashWriter& bytes(std::span<const std::uint8_t> b) {
        buf_.insert(buf_.end(), b.begin(), b.end());
        return *this;
    }
    HashWriter& str(std::string_view s) {
        buf_.insert(buf_.end(), s.begin(), s.end());
        return *this;
    }

    const std::vector<std::uint8_t>& data() const { return buf_; }

    Hash256 finish() const { return sha256(buf_); }

private:
    std::vector<std::uint8_t> buf_;
};

// Modeled per-node signing secret. Signatures in this library are
// unforgeable-by-convention tags, not real cryptography: every party derives
// the same secret from the node name, which is enough to detect tampering
// inside the simulation's trust model.
inline Hash256 node_secret(std::string_view node_name) {
    HashWriter w;
    w.str("zkpcn.node-secret.v1");
    w.str(node_name);
    return w.finish();
}

inline std::string hex(std::span<const std::uint8_t> data) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0xf]);
    }
    return s;
}

inline std::vector<std::uint8_t> from_hex(std::string_view s) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument("from_hex: bad character");
    };
    if (s.size() % 2 != 0) throw std::invalid_argument("from_hex: odd length");
    std::vector<std::uint8_t> out(s.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint8_t>(nibble(s[2 * i]) << 4 | nibble(s[2 * i + 1]));
    return out;
}

}  // namespace zkpcn

#endif  // ZKPCN_HASH_HPP
