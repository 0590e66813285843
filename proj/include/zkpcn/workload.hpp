#ifndef ZKPCN_WORKLOAD_HPP
#define ZKPCN_WORKLOAD_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include "zkpcn/random.hpp"
#include "zkpcn/types.hpp"

namespace zkpcn {

// Transaction flow parameters. skewness == 0 selects the uniform flow;
// positive skewness draws senders from Exp(rate = skewness / N) over node
// indices, so low indices (the hubs, in topology load order) run hot.
struct WorkloadSpec {
    double skewness = 0.0;
    std::uint64_t tx_count = 50000;
    Amount amount_upper = 0;  // 0 = derive from median base capacity
    std::uint64_t seed = 1;

    bool uniform() const { return skewness == 0.0; }

    void validate() const {
        if (skewness < 0.0) throw std::invalid_argument("workload: skewness must be >= 0");
        if (tx_count == 0) throw std::invalid_argument("workload: tx_count must be positive");
    }
};

inline std::pair<NodeId, NodeId> sample_pair_uniform(Rng& rng, std::size_t node_count) {
    if (node_count < 2) throw std::invalid_argument("sample_pair_uniform: need >= 2 nodes");
    NodeId sender = static_cast<NodeId>(rand_below(rng, node_count));
    NodeId recipient = static_cast<NodeId>(rand_below(rng, node_count - 1));
    if (recipient >= sender) ++recipient;
    return {sender, recipient};
}

// sender = floor(x) mod N with x ~ Exp(skewness / N). The wrap keeps the
// sampler total; the tail mass past N is negligible for skewness >= 1.
inline NodeId sample_sender_skewed(Rng& rng, std::size_t node_count, double skewness) {
    if (node_count < 1) throw std::invalid_argument("sample_sender_skewed: empty node set");
    if (!(skewness > 0.0))
        throw std::invalid_argument("sample_sender_skewed: skewness must be positive");
    double x = rand_exponential(rng, skewness / static_cast<double>(node_count));
    auto idx = static_cast<std::uint64_t>(x);
    return static_cast<NodeId>(idx % node_count);
}

inline Amount sample_amount(Rng& rng, Amount amount_upper) {
    if (amount_upper < 1) throw std::invalid_argument("sample_amount: upper bound must be >= 1");
    return 1 + rand_below(rng, amount_upper);
}

struct Payment {
    NodeId sender = 0;
    NodeId recipient = 0;
    Amount amount = 0;
};

inline Payment sample_payment(Rng& rng, const WorkloadSpec& spec, std::size_t node_count,
                              Amount amount_upper) {
    Payment p;
    if (spec.uniform()) {
        auto [s, r] = sample_pair_uniform(rng, node_count);
        p.sender = s;
        p.recipient = r;
    } else {
        p.sender = sample_sender_skewed(rng, node_count, spec.skewness);
        NodeId r = static_cast<NodeId>(rand_below(rng, node_count - 1));
        if (r >= p.sender) ++r;
        p.recipient = r;
    }
    p.amount = sample_amount(rng, amount_upper);
    return p;
}

}  // namespace zkpcn

#endif  // ZKPCN_WORKLOAD_HPP
