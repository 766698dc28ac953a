#include "oracles.hpp"

#include "primeboost/errors.hpp"
#include "primeboost/primes.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace primeboost;

TEST(PrimeTable, SmallLimits)
{
    const auto ten = build_prime_table(10);
    EXPECT_EQ(std::vector<std::uint64_t>(ten.primes().begin(), ten.primes().end()),
              (std::vector<std::uint64_t>{2, 3, 5, 7}));
    const auto two = build_prime_table(2);
    ASSERT_EQ(two.primes().size(), 1U);
    EXPECT_EQ(two.primes()[0], 2U);
    EXPECT_EQ(build_prime_table(100).prime_count(100), 25U);
}

TEST(PrimeTable, RejectsLimitBelowTwo)
{
    EXPECT_THROW(build_prime_table(1), DomainError);
    EXPECT_THROW(build_prime_table(0), DomainError);
}

TEST(PrimeTable, PrimeCount)
{
    const auto table = build_prime_table(100);
    EXPECT_EQ(prime_count(table, 2), 1U);
    EXPECT_EQ(prime_count(table, 10), 4U);
    EXPECT_EQ(prime_count(table, 1), 0U);
    EXPECT_EQ(prime_count(table, 0), 0U);
    EXPECT_THROW((void)prime_count(table, 101), RangeError);
    EXPECT_THROW((void)table.is_prime(101), RangeError);
}

TEST(PrimeTable, MatchesTrialDivision)
{
    const auto table = build_prime_table(20000);
    std::uint64_t count = 0;
    for (std::uint64_t x = 0; x <= table.limit(); ++x) {
        ASSERT_EQ(table.is_prime(x), oracle::is_prime(x)) << x;
        count += oracle::is_prime(x) ? 1 : 0;
        ASSERT_EQ(table.prime_count(x), count) << x;
    }
    EXPECT_EQ(table.primes().size(), table.prime_count(table.limit()));
    for (std::size_t i = 1; i < table.primes().size(); ++i) ASSERT_LT(table.primes()[i - 1], table.primes()[i]);
}

TEST(PrimeTable, KnownCountAtOneMillion)
{
    EXPECT_EQ(build_prime_table(1'000'000).prime_count(1'000'000), 78498U);
}

TEST(EvenCount, Values)
{
    EXPECT_EQ(even_count(10), 5U);
    EXPECT_EQ(even_count(11), 5U);
    EXPECT_EQ(even_count(2), 1U);
    EXPECT_THROW((void)even_count(1), DomainError);
}

TEST(EvenCount, StaysWithinHalfOverNMinusOne)
{
    for (std::uint64_t n = 2; n <= 5000; ++n) {
        std::uint64_t evens = 0;
        for (std::uint64_t x = 2; x <= n; x += 2) ++evens;
        ASSERT_EQ(even_count(n), evens);
        const double dev = std::abs(static_cast<double>(even_count(n)) / static_cast<double>(n - 1) - 0.5);
        ASSERT_LE(dev, 1.0 / (2.0 * static_cast<double>(n - 1)) + 1e-15) << n;
    }
}

TEST(Factorize, Examples)
{
    const auto table = build_prime_table(100);
    EXPECT_EQ(factorize(12, table), (std::vector<PrimePower>{{2, 2}, {3, 1}}));
    EXPECT_EQ(factorize(35, table), (std::vector<PrimePower>{{5, 1}, {7, 1}}));
    EXPECT_EQ(factorize(97, table), (std::vector<PrimePower>{{97, 1}}));
    EXPECT_THROW((void)factorize(1, table), DomainError);
}

TEST(Factorize, RecomposesUpToTenThousand)
{
    const auto table = build_prime_table(100);
    for (std::uint64_t x = 2; x <= 10000; ++x) {
        std::uint64_t product = 1;
        std::uint64_t last = 0;
        for (const auto& [p, e] : factorize(x, table)) {
            ASSERT_GT(p, last);
            ASSERT_TRUE(oracle::is_prime(p));
            last = p;
            for (unsigned i = 0; i < e; ++i) product *= p;
        }
        ASSERT_EQ(product, x);
    }
}

TEST(Factorize, CapacityErrorBeyondLimitSquared)
{
    const auto table = build_prime_table(10);
    // 101 * 103 > 10^2 and has no factor <= 10
    EXPECT_THROW((void)factorize(101 * 103, table), CapacityError);
    EXPECT_EQ(factorize(97, table), (std::vector<PrimePower>{{97, 1}}));
    EXPECT_THROW((void)factorize(BigInt(101 * 103), table), CapacityError);
}

TEST(Factorize, BigIntegers)
{
    const auto table = build_prime_table(1000);
    BigInt x = 1;
    for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61}) x *= p;
    x *= 3;
    const auto f = factorize(x, table);
    ASSERT_EQ(f.size(), 18U);
    EXPECT_EQ(f[1], (PrimePower{3, 2}));
}

TEST(ProperDivisors, ExcludeOneAndSelf)
{
    const auto table = build_prime_table(100);
    EXPECT_EQ(proper_divisors(12, table), (std::vector<std::uint64_t>{2, 3, 4, 6}));
    EXPECT_TRUE(proper_divisors(13, table).empty());
}
