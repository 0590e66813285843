#include <array>
#include <cmath>
#include <map>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "catch_amalgamated.hpp"
#include "zkpcn/workload.hpp"

using namespace zkpcn;

TEST_CASE("uniform pairs cover both orders on two nodes", "[workload]") {
    Rng rng(11);
    std::map<std::pair<NodeId, NodeId>, int> counts;
    const int draws = 20000;
    for (int i = 0; i < draws; ++i) counts[sample_pair_uniform(rng, 2)] += 1;
    REQUIRE(counts.size() == 2);
    for (const auto& [pair, n] : counts) {
        REQUIRE(pair.first != pair.second);
        // 5 sigma around p = 1/2
        double sigma = std::sqrt(0.25 * draws);
        REQUIRE(std::abs(n - draws / 2.0) < 5 * sigma);
    }
    REQUIRE_THROWS_AS(sample_pair_uniform(rng, 1), std::invalid_argument);
}

TEST_CASE("uniform sender frequencies stay within 5 sigma", "[workload]") {
    Rng rng(3);
    const int draws = 100000;
    const std::size_t n = 10;
    std::array<int, 10> counts{};
    for (int i = 0; i < draws; ++i) counts[sample_pair_uniform(rng, n).first] += 1;
    double p = 1.0 / n;
    double sigma = std::sqrt(p * (1 - p) * draws);
    for (int c : counts) REQUIRE(std::abs(c - draws * p) < 5 * sigma);
}

TEST_CASE("sampling is a pure function of the seed", "[workload]") {
    Rng a(99);
    Rng b(99);
    for (int i = 0; i < 100; ++i) {
        REQUIRE(sample_pair_uniform(a, 20) == sample_pair_uniform(b, 20));
        REQUIRE(sample_sender_skewed(a, 100, 4.0) == sample_sender_skewed(b, 100, 4.0));
        REQUIRE(sample_amount(a, 50) == sample_amount(b, 50));
    }
}

TEST_CASE("skewed sampling favors low node indices", "[workload]") {
    // The pdf is strictly decreasing in the node index, so node 0 carries
    // the single largest probability. Adjacent indices differ by well under
    // sampling noise, so the empirical check bins by decile.
    const std::size_t n = 1000;
    double rate = 8.0 / static_cast<double>(n);
    double p0 = 1.0 - std::exp(-rate);
    double p1 = std::exp(-rate) * (1.0 - std::exp(-rate));
    REQUIRE(p0 > p1);

    Rng rng(17);
    std::vector<int> counts(n, 0);
    for (int i = 0; i < 100000; ++i) counts[sample_sender_skewed(rng, n, 8.0)] += 1;
    std::array<long, 10> deciles{};
    for (std::size_t i = 0; i < n; ++i) deciles[i / 100] += counts[i];
    for (std::size_t d = 1; d < deciles.size(); ++d) REQUIRE(deciles[d - 1] > deciles[d]);
}

TEST_CASE("skewness near zero approaches the uniform distribution", "[workload]") {
    Rng rng(23);
    const std::size_t n = 100;
    const int draws = 100000;
    std::vector<int> counts(n, 0);
    for (int i = 0; i < draws; ++i) counts[sample_sender_skewed(rng, n, 0.01)] += 1;
    double tv = 0.0;
    for (int c : counts) tv += std::abs(c / static_cast<double>(draws) - 1.0 / n);
    tv /= 2.0;
    REQUIRE(tv < 0.05);
}

TEST_CASE("skewed sender indices follow the wrapped exponential pdf", "[workload]") {
    // floor(x) mod N of Exp(rate) is geometric in the node index, normalized
    // over one wrap: p_i = e^{-rate i} (1 - e^{-rate}) / (1 - e^{-rate N}).
    const std::size_t n = 1000;
    const int draws = 100000;
    for (double skewness : {1.0, 4.0, 8.0}) {
        Rng rng(31 + static_cast<std::uint64_t>(skewness));
        std::vector<int> counts(n, 0);
        for (int i = 0; i < draws; ++i) counts[sample_sender_skewed(rng, n, skewness)] += 1;

        double rate = skewness / static_cast<double>(n);
        double norm = 1.0 - std::exp(-rate * static_cast<double>(n));

        // Bin node indices so every expected count is at least 5.
        double chi2 = 0.0;
        int bins = 0;
        double exp_acc = 0.0;
        double obs_acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double p = std::exp(-rate * static_cast<double>(i)) * (1.0 - std::exp(-rate)) / norm;
            exp_acc += p * draws;
            obs_acc += counts[i];
            if (exp_acc >= 5.0) {
                chi2 += (obs_acc - exp_acc) * (obs_acc - exp_acc) / exp_acc;
                bins += 1;
                exp_acc = 0.0;
                obs_acc = 0.0;
            }
        }
        if (exp_acc > 0.0) {
            chi2 += (obs_acc - exp_acc) * (obs_acc - exp_acc) / exp_acc;
            bins += 1;
        }
        boost::math::chi_squared dist(bins - 1);
        double critical = boost::math::quantile(dist, 0.99);
        INFO("skewness " << skewness << " chi2 " << chi2 << " critical " << critical);
        REQUIRE(chi2 < critical);
    }
}

TEST_CASE("higher skewness concentrates the top percentile", "[workload]") {
    const std::size_t n = 1000;
    const int draws = 100000;
    double previous_share = 0.0;
    for (double skewness : {1.0, 2.0, 4.0, 8.0}) {
        Rng rng(7);
        std::vector<int> counts(n, 0);
        for (int i = 0; i < draws; ++i) counts[sample_sender_skewed(rng, n, skewness)] += 1;
        int top = 0;
        for (std::size_t i = 0; i < n / 100; ++i) top += counts[i];
        double share = top / static_cast<double>(draws);
        REQUIRE(share > previous_share);
        previous_share = share;
    }
}

TEST_CASE("amounts are uniform integers in [1, upper]", "[workload]") {
    Rng rng(5);
    for (int i = 0; i < 100; ++i) REQUIRE(sample_amount(rng, 1) == 1);

    const int draws = 100000;
    const Amount upper = 100;
    double sum = 0.0;
    for (int i = 0; i < draws; ++i) {
        Amount a = sample_amount(rng, upper);
        REQUIRE(a >= 1);
        REQUIRE(a <= upper);
        sum += static_cast<double>(a);
    }
    double mean = sum / draws;
    double variance = (static_cast<double>(upper) * upper - 1.0) / 12.0;
    double sigma = std::sqrt(variance / draws);
    REQUIRE(std::abs(mean - 50.5) < 3 * sigma);

    REQUIRE_THROWS_AS(sample_amount(rng, 0), std::invalid_argument);
}

TEST_CASE("workload spec validation", "[workload]") {
    WorkloadSpec spec;
    spec.validate();
    REQUIRE(spec.uniform());
    spec.skewness = -1.0;
    REQUIRE_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.skewness = 4.0;
    REQUIRE_FALSE(spec.uniform());
    spec.tx_count = 0;
    REQUIRE_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("sample_payment draws sender, recipient and amount", "[workload]") {
    Rng rng(13);
    WorkloadSpec uniform;
    for (int i = 0; i < 200; ++i) {
        Payment p = sample_payment(rng, uniform, 50, 20);
        REQUIRE(p.sender != p.recipient);
        REQUIRE(p.sender < 50);
        REQUIRE(p.recipient < 50);
        REQUIRE(p.amount >= 1);
        REQUIRE(p.amount <= 20);
    }
    WorkloadSpec skewed;
    skewed.skewness = 8.0;
    for (int i = 0; i < 200; ++i) {
        Payment p = sample_payment(rng, skewed, 50, 20);
        REQUIRE(p.sender != p.recipient);
    }
}
