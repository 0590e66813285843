#ifndef ZKPCN_ZK_HPP
#define ZKPCN_ZK_HPP

#include <algorithm>
#include <cstdint>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "zkpcn/channel.hpp"
#include "zkpcn/hash.hpp"
#include "zkpcn/types.hpp"

namespace zkpcn {

inline constexpr std::size_t kProofSize = 193;

// Public circuit inputs: initial balances, the per-transaction digest chain,
// and the announced public balances.
struct Statement {
    BalancePair initial_balances{0, 0};
    std::vector<Hash256> tx_digests;
    BalancePair public_balances{0, 0};

    Hash256 digest() const {
        HashWriter w;
        w.str("zkpcn.stmt.v1");
        w.u64le(initial_balances.first).u64le(initial_balances.second);
        w.u64le(tx_digests.size());
        for (const Hash256& h : tx_digests) w.bytes(h);
        w.u64le(public_balances.first).u64le(public_balances.second);
        return w.finish();
    }
};

// Private circuit inputs, aligned index-by-index with Statement::tx_digests.
struct WitnessTx {
    Nonce nonce{};
    Amount amount = 0;
    std::uint64_t version = 0;
    Hash256 sig{};
    Direction direction = Direction::AtoB;
};

struct Witness {
    std::vector<WitnessTx> transactions;
};

struct Proof {
    std::vector<std::uint8_t> body;  // exactly kProofSize bytes when honest
    Hash256 statement_digest{};
};

struct PublicParams {
    Hash256 key{};
    std::uint64_t circuit_size = 0;  // max supported digest count
    std::uint64_t security = 0;
};

enum class ZkError { CapacityExceeded, ProveRefused };

// The statement/witness pair for a channel's current state, as a prover
// party would assemble it.
inline Statement channel_statement(const Channel& ch) {
    Statement s;
    s.initial_balances = ch.initial_balances();
    s.public_balances = ch.public_balances();
    s.tx_digests.reserve(ch.log().size());
    for (const LoggedTx& tx : ch.log()) s.tx_digests.push_back(tx.digest);
    return s;
}

inline Witness channel_witness(const Channel& ch) {
    Witness w;
    w.transactions.reserve(ch.log().size());
    for (const LoggedTx& tx : ch.log())
        w.transactions.push_back({tx.nonce, tx.amount, tx.version, tx.sig, tx.direction});
    return w;
}

// C_public: every digest recomputes from the witness, the replayed true
// balances never go negative, and the announced public balances do not
// exceed the replayed true balances. A length mismatch is a malformed input,
// not a false relation.
inline bool relation_holds(const Statement& stmt, const Witness& wit) {
    if (stmt.tx_digests.size() != wit.transactions.size())
        throw std::invalid_argument("relation_holds: statement/witness length mismatch");

    Amount a = stmt.initial_balances.first;
    Amount b = stmt.initial_balances.second;
    for (std::size_t i = 0; i < wit.transactions.size(); ++i) {
        const WitnessTx& tx = wit.transactions[i];
        if (tx_digest(tx.nonce, tx.amount, tx.version, tx.sig) != stmt.tx_digests[i])
            return false;
        Amount& from = tx.direction == Direction::AtoB ? a : b;
        Amount& to = tx.direction == Direction::AtoB ? b : a;
        if (from < tx.amount) return false;
        from -= tx.amount;
        to += tx.amount;
    }
    return stmt.public_balances.first <= a && stmt.public_balances.second <= b;
}

// Deterministic parameter generation; interchangeable for equal inputs.
inline PublicParams setup(std::uint64_t max_n, std::uint64_t security,
                          std::uint64_t seed = 0) {
    if (max_n < 1) throw std::invalid_argument("setup: max_n must be >= 1");
    HashWriter w;
    w.str("zkpcn.setup.v1");
    w.u64le(max_n).u64le(security).u64le(seed);
    return PublicParams{w.finish(), max_n, security};
}

// Prover/verifier cost model, calibrated from measured data points.
// Piecewise-linear between points, last-segment slope beyond the largest.
class LatencyModel {
public:
    LatencyModel(std::vector<std::pair<std::uint64_t, double>> points, double verifier_ms)
        : points_(std::move(points)), verifier_ms_(verifier_ms) {
        if (points_.empty()) throw std::invalid_argument("LatencyModel: no calibration points");
        std::sort(points_.begin(), points_.end());
        for (std::size_t i = 1; i < points_.size(); ++i) {
            if (points_[i].first == points_[i - 1].first)
                throw std::invalid_argument("LatencyModel: duplicate calibration point");
            if (points_[i].second < points_[i - 1].second)
                throw std::invalid_argument("LatencyModel: prover time must be non-decreasing");
        }
    }

    // Groth16 measurements for C_public on the reference machine.
    static const LatencyModel& table1() {
        static const LatencyModel m({{1, 157.0}, {10, 682.0}, {100, 6011.0}, {1000, 43798.0}},
                                    5.0);
        return m;
    }

    static const LatencyModel& zero() {
        static const LatencyModel m({{1, 0.0}}, 0.0);
        return m;
    }

    // Lines `<hash_count> <prover_ms>` plus one optional `verifier <ms>`;
    // `#` comments ignored.
    static LatencyModel from_stream(std::istream& in) {
        std::vector<std::pair<std::uint64_t, double>> points;
        double verifier = 5.0;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::istringstream ls(line);
            std::string first;
            if (!(ls >> first) || first[0] == '#') continue;
            if (first == "verifier") {
                if (!(ls >> verifier))
                    throw std::runtime_error("latency table line " + std::to_string(lineno) +
                                             ": malformed verifier entry");
                continue;
            }
            std::uint64_t n = 0;
            double ms = 0;
            try {
                n = std::stoull(first);
            } catch (const std::exception&) {
                throw std::runtime_error("latency table line " + std::to_string(lineno) +
                                         ": bad hash count");
            }
            if (!(ls >> ms))
                throw std::runtime_error("latency table line " + std::to_string(lineno) +
                                         ": missing prover ms");
            points.emplace_back(n, ms);
        }
        return LatencyModel(std::move(points), verifier);
    }

    double prover_ms(std::uint64_t n) const {
        if (n < 1) throw std::invalid_argument("prover_ms: n must be >= 1");
        if (points_.size() == 1) return points_.front().second;
        if (n <= points_.front().first) return points_.front().second;
        for (std::size_t i = 1; i < points_.size(); ++i) {
            if (n == points_[i].first) return points_[i].second;
            if (n < points_[i].first) return interp(points_[i - 1], points_[i], n);
        }
        return interp(points_[points_.size() - 2], points_.back(), n);
    }

    double verifier_ms() const { return verifier_ms_; }
    const std::vector<std::pair<std::uint64_t, double>>& points() const { return points_; }

private:
    static double interp(const std::pair<std::uint64_t, double>& lo,
                         const std::pair<std::uint64_t, double>& hi, std::uint64_t n) {
        double span = static_cast<double>(hi.first - lo.first);
        double t = (static_cast<double>(n) - static_cast<double>(lo.first)) / span;
        return lo.second + t * (hi.second - lo.second);
    }

    std::vector<std::pair<std::uint64_t, double>> points_;
    double verifier_ms_;
};

inline double prover_latency(const LatencyModel& model, std::uint64_t n) {
    return model.prover_ms(n);
}

namespace detail {
// 193-byte proof body: a keyed tag over the statement digest, extended by a
// deterministic hash stream.
inline std::vector<std::uint8_t> proof_body(const PublicParams& pp, const Hash256& stmt_digest) {
    HashWriter tagw;
    tagw.str("zkpcn.proof.v1");
    tagw.bytes(pp.key).bytes(stmt_digest);
    Hash256 tag = tagw.finish();

    std::vector<std::uint8_t> body(tag.begin(), tag.end());
    std::uint64_t block = 1;
    while (body.size() < kProofSize) {
        HashWriter bw;
        bw.bytes(tag).u64le(block++);
        Hash256 h = bw.finish();
        std::size_t take = std::min(h.size(), kProofSize - body.size());
        body.insert(body.end(), h.begin(), h.begin() + take);
    }
    return body;
}
}  // namespace detail

struct ProveResult {
    Proof proof;
    double prover_ms = 0.0;  // simulated cost, not wall time
};

// Transparent backend: checks the relation directly and emits an unforgeable
// keyed tag bound to the statement. Callers only see the Delta=(Setup,
// Prove, Verify) surface, so a real SNARK backend can slot in behind it.
// Honest-prover model: a false relation refuses rather than emitting junk.
inline Expected<ProveResult, ZkError> prove(const PublicParams& pp, const Statement& stmt,
                                            const Witness& wit,
                                            const LatencyModel& model = LatencyModel::table1()) {
    if (stmt.tx_digests.size() > pp.circuit_size) return ZkError::CapacityExceeded;
    if (!relation_holds(stmt, wit)) return ZkError::ProveRefused;

    Hash256 d = stmt.digest();
    std::uint64_t n = std::max<std::uint64_t>(1, stmt.tx_digests.size());
    return ProveResult{Proof{detail::proof_body(pp, d), d}, model.prover_ms(n)};
}

inline bool verify(const PublicParams& pp, const Statement& stmt, const Proof& proof) {
    if (proof.body.size() != kProofSize) return false;
    if (stmt.tx_digests.size() > pp.circuit_size) return false;
    Hash256 d = stmt.digest();
    if (proof.statement_digest != d) return false;
    return proof.body == detail::proof_body(pp, d);
}

}  // namespace zkpcn

#endif  // ZKPCN_ZK_HPP
