#include "oracles.hpp"

#include "primeboost/adaboost.hpp"
#include "primeboost/errors.hpp"
#include "primeboost/experiments.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

using namespace primeboost;

namespace {

const PrimeTable& table()
{
    static const PrimeTable t(100000);
    return t;
}

Sample uniform(std::vector<std::uint64_t> xs) { return make_uniform_sample<double>(std::move(xs), table()); }

// Weighted error of h_d computed straight from the definition.
double brute_error(const Sample& s, const std::vector<double>& dist, std::uint64_t d)
{
    double e = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const int truth = oracle::is_prime(s.instances[i]) ? 1 : 0;
        if (oracle::h(d, s.instances[i]) != truth) e += dist[i];
    }
    return e;
}

} // namespace

TEST(WeakLearn, Examples)
{
    const auto a = weak_learn(uniform({4, 6, 9, 7}), BoostDistribution::uniform(4), table());
    EXPECT_EQ(a.divisor, 2U);
    EXPECT_DOUBLE_EQ(a.error, 0.25);
    const auto b = weak_learn(uniform({3, 5, 7}), BoostDistribution::uniform(3), table());
    EXPECT_EQ(b.divisor, 2U);
    EXPECT_EQ(b.error, 0.0);
    const auto c = weak_learn(uniform({4, 6, 9}), BoostDistribution{{0.1, 0.2, 0.7}}, table());
    EXPECT_EQ(c.divisor, 3U);
    EXPECT_NEAR(c.error, 0.1, 1e-15);
    EXPECT_THROW((void)weak_learn(uniform({4, 6}), BoostDistribution::uniform(3), table()), DomainError);
}

TEST(WeightFromError, Values)
{
    EXPECT_EQ(weight_from_error(0.5), 0.0);
    EXPECT_NEAR(weight_from_error(1.0 / (1.0 + std::exp(2.0))), 1.0, 1e-12);
    EXPECT_NEAR(weight_from_error(0.25), 0.5493061443340549, 1e-15);
    EXPECT_TRUE(std::isfinite(weight_from_error(0.0)));
    EXPECT_TRUE(std::isfinite(weight_from_error(1.0)));
    EXPECT_NEAR(weight_from_error(0.0), 0.5 * std::log(1e12 - 1.0), 1e-9);
    EXPECT_LT(weight_from_error(0.7), 0.0);
}

TEST(UpdateDistribution, HalfWeightIdentity)
{
    const auto s = uniform({4, 6, 9, 7});
    const auto next = update_distribution(BoostDistribution::uniform(4), 0.5 * std::log(3.0), DivisorRule{2}, s);
    EXPECT_NEAR(next.dist[0], 1.0 / 6, 1e-15);
    EXPECT_NEAR(next.dist[1], 1.0 / 6, 1e-15);
    EXPECT_NEAR(next.dist[2], 0.5, 1e-15);
    EXPECT_NEAR(next.dist[3], 1.0 / 6, 1e-15);
}

TEST(UpdateDistribution, NoOpCases)
{
    const auto s = uniform({4, 6, 9, 7});
    const BoostDistribution d{{0.1, 0.2, 0.3, 0.4}};
    const auto same = update_distribution(d, 0.0, DivisorRule{2}, s);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(same.dist[i], d.dist[i], 1e-15);

    const auto clean = uniform({4, 6, 8, 7});  // h_2 classifies all correctly
    const auto unchanged = update_distribution(BoostDistribution::uniform(4), 0.8, DivisorRule{2}, clean);
    for (double v : unchanged.dist) EXPECT_NEAR(v, 0.25, 1e-15);
}

TEST(RunAdaboost, Examples)
{
    const auto perfect = run_adaboost(uniform({3, 5, 7}), 5, table());
    EXPECT_EQ(perfect.status, BoostStatus::stopped_perfect);
    ASSERT_EQ(perfect.rounds.size(), 1U);
    EXPECT_TRUE(perfect.rounds[0].clamped);

    const auto one = run_adaboost(uniform({4, 6, 9, 7}), 1, table());
    ASSERT_EQ(one.rounds.size(), 1U);
    EXPECT_EQ(one.rounds[0].t, 1U);
    EXPECT_EQ(one.rounds[0].divisor, 2U);
    EXPECT_DOUBLE_EQ(one.rounds[0].error, 0.25);
    EXPECT_NEAR(one.rounds[0].weight, 0.5 * std::log(3.0), 1e-15);
    EXPECT_EQ(one.status, BoostStatus::completed);

    const auto two = run_adaboost(uniform({4, 6, 9, 7}), 2, table());
    ASSERT_EQ(two.rounds.size(), 2U);
    EXPECT_EQ(two.rounds[1].divisor, 3U);
    EXPECT_NEAR(two.rounds[1].error, 1.0 / 6, 1e-15);
}

TEST(RunAdaboost, DivisorClassGivesSameTrace)
{
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        const auto s = sample_uniform<double>(2000, 60, rng, table());
        const auto primes = run_adaboost(s, 5, table(), {.base = BaseClass::primes});
        const auto divisors = run_adaboost(s, 5, table(), {.base = BaseClass::divisors});
        ASSERT_EQ(primes.rounds, divisors.rounds);
    }
}

TEST(RunAdaboost, InvariantsOnRandomSamples)
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        const std::uint64_t n = std::uniform_int_distribution<std::uint64_t>(20, 3000)(rng);
        const auto s = sample_uniform<double>(n, 40, rng, table());
        auto dist = BoostDistribution::uniform(s.size());
        double total_w = 0.0;
        const double eps1 = weak_learn(s, dist, table()).error;
        for (int t = 0; t < 6; ++t) {
            const auto weak = weak_learn(s, dist, table());
            if (weak.error == 0.0) break;
            // Optimality against every divisor up to the largest instance.
            const auto max_x = *std::max_element(s.instances.begin(), s.instances.end());
            for (std::uint64_t d = 2; d <= max_x; ++d) ASSERT_LE(weak.error, brute_error(s, dist.dist, d) + 1e-12);
            // Error sandwich against the first round.
            ASSERT_GE(weak.error, std::exp(-2 * total_w) * eps1 * (1 - 1e-9));
            ASSERT_LE(weak.error, std::exp(2 * total_w) * eps1 * (1 + 1e-9));

            const double w = weight_from_error(weak.error);
            const auto next = update_distribution(dist, w, DivisorRule{weak.divisor}, s);
            ASSERT_NEAR(std::accumulate(next.dist.begin(), next.dist.end(), 0.0), 1.0, 1e-10);
            for (std::size_t i = 0; i < s.size(); ++i) {
                const double ratio = next.dist[i] / dist.dist[i];
                ASSERT_GE(ratio, std::exp(-2 * std::abs(w)) * (1 - 1e-12));
                ASSERT_LE(ratio, std::exp(2 * std::abs(w)) * (1 + 1e-12));
            }
            total_w += std::abs(w);
            for (double v : next.dist) {
                ASSERT_GE(v, std::exp(-2 * total_w) / s.size() * (1 - 1e-9));
                ASSERT_LE(v, std::exp(2 * total_w) / s.size() * (1 + 1e-9));
            }
            dist = next;
        }
    }
}

TEST(RunAdaboost, TrainingErrorProductBound)
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const auto s = sample_uniform<double>(500, 30, rng, table());
        const auto trace = run_adaboost(s, 4, table());
        bool weak = true;
        double bound = 1.0;
        for (const auto& r : trace.rounds) {
            weak = weak && r.error < 0.5;
            bound *= 2.0 * std::sqrt(r.error * (1.0 - r.error));
        }
        if (!weak || trace.status != BoostStatus::completed) continue;
        std::size_t wrong = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (strong_classify(trace, s.instances[i]) != s.labels[i].pm()) ++wrong;
        }
        EXPECT_LE(static_cast<double>(wrong) / static_cast<double>(s.size()), bound + 1e-12);
    }
}

TEST(StrongClassify, Examples)
{
    BoostTrace single;
    single.rounds.push_back({1, 2, 0.25, 0.5, false});
    EXPECT_EQ(strong_classify(single, 9), 1);
    EXPECT_EQ(strong_classify(single, 8), -1);

    BoostTrace zero;
    zero.rounds.push_back({1, 2, 0.5, 0.0, false});
    zero.rounds.push_back({2, 3, 0.5, 0.0, false});
    for (std::uint64_t x = 2; x < 50; ++x) EXPECT_EQ(strong_classify(zero, x), 1);

    BoostTrace pair;
    pair.rounds.push_back({1, 2, 0.3, 0.5, false});
    pair.rounds.push_back({2, 3, 0.4, 0.2, false});
    EXPECT_EQ(strong_classify(pair, 6), -1);
    EXPECT_THROW((void)strong_classify(BoostTrace{}, 6), DomainError);
}

TEST(TraceCsv, Rows)
{
    const auto trace = run_adaboost(uniform({4, 6, 9, 7}), 1, table());
    std::ostringstream out;
    write_trace_csv_header(out);
    write_trace_csv(out, trace, 3, 10, 4);
    EXPECT_EQ(out.str(), "trial_id,n,m,t,d_t,eps_t,W_t,status\n3,10,4,1,2,0.25,0.5493061443340549,completed\n");
}
