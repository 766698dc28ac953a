#include "oracles.hpp"

#include "primeboost/errors.hpp"
#include "primeboost/hypotheses.hpp"

#include <gtest/gtest.h>

using namespace primeboost;

namespace {

const PrimeTable& table()
{
    static const PrimeTable t(2000);
    return t;
}

std::vector<Hypothesis> families_upto(std::uint64_t max_d)
{
    std::vector<Hypothesis> out;
    for (std::uint64_t d = 2; d <= max_d; ++d) {
        if (table().is_prime(d)) out.emplace_back(PrimeRule{d});
        out.emplace_back(DivisorRule{d});
        for (std::uint64_t k : {2, 3, 4, 7}) out.emplace_back(ProgressionRule{d, k});
    }
    return out;
}

} // namespace

TEST(Evaluate, PaperExamples)
{
    EXPECT_EQ(evaluate(PrimeRule{5}, 10), 0);
    EXPECT_EQ(evaluate(PrimeRule{5}, 6), 1);
    EXPECT_EQ(evaluate(PrimeRule{3}, 7), 1);
    EXPECT_EQ(evaluate(ProgressionRule{9, 3}, 18), 0);
    EXPECT_EQ(evaluate(ProgressionRule{9, 3}, 12), 1);
}

TEST(Evaluate, DivisorItselfIsNotZeroed)
{
    EXPECT_EQ(evaluate(DivisorRule{6}, 6), 1);
    EXPECT_EQ(evaluate(DivisorRule{6}, 12), 0);
    EXPECT_EQ(evaluate(ProgressionRule{6, 3}, 6), 1);
    EXPECT_EQ(evaluate(ProgressionRule{6, 3}, 24), 1);
}

TEST(Evaluate, RejectsInstancesBelowTwo)
{
    EXPECT_THROW((void)evaluate(DivisorRule{2}, 1), DomainError);
    EXPECT_THROW((void)evaluate(DivisorRule{2}, BigInt(0)), DomainError);
}

TEST(Evaluate, BigIntAgreesWithMachineWords)
{
    for (const auto& h : families_upto(30)) {
        for (std::uint64_t x = 2; x <= 300; ++x) ASSERT_EQ(evaluate(h, BigInt(x)), evaluate(h, x));
    }
    BigInt huge("340282366920938463463374607431768211456");  // 2^128
    EXPECT_EQ(evaluate(DivisorRule{2}, huge), 0);
    EXPECT_EQ(evaluate(DivisorRule{3}, huge), 1);
    EXPECT_EQ(evaluate(ProgressionRule{2, 7}, huge), 1);
    EXPECT_EQ(evaluate(PrimeRule{3}, BigInt(huge * 3)), 0);
    EXPECT_EQ(evaluate(PrimeRule{2}, BigInt(huge * 3 + 1)), 1);
}

TEST(Evaluate, MatchesDefinitionOracle)
{
    for (std::uint64_t d = 2; d <= 40; ++d) {
        for (std::uint64_t x = 2; x <= 400; ++x) {
            ASSERT_EQ(evaluate(DivisorRule{d}, x), oracle::h(d, x));
            ASSERT_EQ(evaluate(ProgressionRule{d, 5}, x), oracle::h(d, x, 5));
        }
    }
}

TEST(Hypothesis, NeverMisidentifiesAPrime)
{
    for (const auto& h : families_upto(60)) {
        for (auto p : table().primes()) ASSERT_EQ(evaluate(h, p), 1) << to_string(h) << " at " << p;
    }
}

TEST(Hypothesis, ProgressionZeroImpliesDivisorZero)
{
    for (std::uint64_t d = 2; d <= 50; ++d) {
        for (std::uint64_t k = 2; k <= 8; ++k) {
            for (std::uint64_t x = 2; x <= 500; ++x) {
                if (evaluate(ProgressionRule{d, k}, x) == 0) ASSERT_EQ(evaluate(DivisorRule{d}, x), 0);
            }
        }
    }
}

TEST(Hypothesis, DivisorDominance)
{
    for (std::uint64_t d = 2; d <= 100; ++d) {
        for (const auto& [p, e] : factorize(d, table())) {
            for (std::uint64_t x = 2; x <= 1000; ++x) {
                if (evaluate(DivisorRule{d}, x) == 0) ASSERT_EQ(evaluate(DivisorRule{p}, x), 0);
            }
        }
    }
}

TEST(Hypothesis, CheckedConstructors)
{
    EXPECT_NO_THROW((void)prime_rule(7, table()));
    EXPECT_THROW((void)prime_rule(9, table()), DomainError);
    EXPECT_THROW((void)divisor_rule(1), DomainError);
    EXPECT_THROW((void)progression_rule(3, 1), DomainError);
    EXPECT_THROW(validate(PrimeRule{15}, table()), DomainError);
}

TEST(Label, PlusMinusImage)
{
    EXPECT_EQ(prime_label(7, table()).value, 1);
    EXPECT_EQ(prime_label(9, table()).value, 0);
    EXPECT_EQ(prime_label(2, table()).value, 1);
    EXPECT_EQ(prime_label(7, table()).pm(), 1);
    EXPECT_EQ(prime_label(9, table()).pm(), -1);
    EXPECT_THROW((void)prime_label(5000, table()), RangeError);
}

TEST(GeneralizationError, Examples)
{
    EXPECT_EQ(exact_generalization_error(PrimeRule{2}, 10, table()), Rational(1, 9));
    EXPECT_EQ(exact_generalization_error(DivisorRule{11}, 10, table()), Rational(5, 9));
    EXPECT_EQ(exact_generalization_error(PrimeRule{7}, 10, table()), Rational(5, 9));
    EXPECT_THROW((void)exact_generalization_error(PrimeRule{2}, 5000, table()), RangeError);
}

TEST(GeneralizationError, H2ClosedForm)
{
    // 1 - pi(n)/(n-1) - (t(n)-1)/(n-1)
    for (std::uint64_t n = 2; n <= 1000; ++n) {
        const auto nm1 = static_cast<std::int64_t>(n - 1);
        const Rational closed = Rational(1) - Rational(static_cast<std::int64_t>(oracle::pi(n)), nm1) -
                                Rational(static_cast<std::int64_t>(n / 2) - 1, nm1);
        ASSERT_EQ(exact_generalization_error(DivisorRule{2}, n, table()), closed) << n;
    }
}

TEST(GeneralizationError, AgreesWithBruteForce)
{
    for (std::uint64_t n : {2, 3, 10, 57, 100, 311, 1000}) {
        for (std::uint64_t d = 2; d <= 50; ++d) {
            ASSERT_EQ(exact_generalization_error(DivisorRule{d}, n, table()), oracle::generalization_error(d, n));
            ASSERT_EQ(exact_generalization_error(ProgressionRule{d, 4}, n, table()),
                      oracle::generalization_error(d, n, 4));
            if (oracle::is_prime(d)) {
                ASSERT_EQ(exact_generalization_error(PrimeRule{d}, n, table()), oracle::generalization_error(d, n));
            }
        }
    }
}

TEST(HypothesisText, RoundTrip)
{
    for (const auto& h : families_upto(25)) EXPECT_EQ(parse_hypothesis(to_string(h)), h);
    EXPECT_EQ(to_string(PrimeRule{7}), "p:7");
    EXPECT_EQ(to_string(DivisorRule{12}), "d:12");
    EXPECT_EQ(to_string(ProgressionRule{9, 3}), "dk:9:3");
    EXPECT_THROW((void)parse_hypothesis("q:3"), DomainError);
    EXPECT_THROW((void)parse_hypothesis("dk:3"), DomainError);
    EXPECT_THROW((void)parse_hypothesis("d:x"), DomainError);
    EXPECT_THROW((void)parse_hypothesis("d:1"), DomainError);
}
