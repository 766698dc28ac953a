#pragma once

#include "primeboost/bigint.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace primeboost {

struct PrimePower {
    std::uint64_t prime = 0;
    unsigned exponent = 0;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Immutable Sieve of Eratosthenes over [0, limit].
///
/// Holds one primality bit per integer, the ascending list of primes and the
/// cumulative prime-counting array pi(x) for every x <= limit. Once built it is
/// never mutated, so a single table can be shared by any number of readers.
class PrimeTable {
public:
    /// Sieves [0, limit]. Throws DomainError when limit < 2.
    explicit PrimeTable(std::uint64_t limit);

    [[nodiscard]] std::uint64_t limit() const noexcept { return limit_; }

    /// Primality of x; throws RangeError beyond the limit.
    [[nodiscard]] bool is_prime(std::uint64_t x) const;

    /// p_1 < p_2 < ... <= limit.
    [[nodiscard]] std::span<const std::uint64_t> primes() const noexcept { return primes_; }

    /// pi(x) for 0 <= x <= limit; throws RangeError beyond the limit.
    [[nodiscard]] std::uint64_t prime_count(std::uint64_t x) const;

    /// The k-th prime, 1-based (p_1 = 2). Throws CapacityError if the table
    /// holds fewer than k primes.
    [[nodiscard]] std::uint64_t nth_prime(std::size_t k) const;

private:
    [[nodiscard]] bool bit(std::uint64_t x) const noexcept {
        return (bits_[x >> 6] >> (x & 63)) & 1U;
    }

    std::uint64_t limit_;
    std::vector<std::uint64_t> bits_;
    std::vector<std::uint64_t> primes_;
    std::vector<std::uint32_t> pi_;
};

[[nodiscard]] PrimeTable build_prime_table(std::uint64_t limit);

[[nodiscard]] std::uint64_t prime_count(const PrimeTable& table, std::uint64_t x);

/// Number of even integers in [2, n]. Throws DomainError when n < 2.
[[nodiscard]] std::uint64_t even_count(std::uint64_t n);

/// Prime factorization by trial division with sieved primes. The result is
/// ordered by strictly increasing prime. Throws DomainError for x < 2 and
/// CapacityError when a composite residual survives every prime in the table.
[[nodiscard]] std::vector<PrimePower> factorize(std::uint64_t x, const PrimeTable& table);
[[nodiscard]] std::vector<PrimePower> factorize(const BigInt& x, const PrimeTable& table);

/// All divisors of x in [2, x), ascending, from its factorization.
[[nodiscard]] std::vector<std::uint64_t> proper_divisors(std::uint64_t x, const PrimeTable& table);

} // namespace primeboost
