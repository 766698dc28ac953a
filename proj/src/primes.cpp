#include "primeboost/primes.hpp"

#include "primeboost/errors.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace primeboost {

PrimeTable::PrimeTable(std::uint64_t limit) : limit_(limit) {
    if (limit < 2) {
        throw DomainError("sieve limit must be at least 2, got " + std::to_string(limit));
    }
    if (limit >= std::numeric_limits<std::uint32_t>::max()) {
        throw CapacityError("sieve limit " + std::to_string(limit) + " exceeds the 32-bit prime-count array");
    }

    const std::uint64_t words = limit / 64 + 1;
    bits_.assign(words, ~std::uint64_t{0});
    bits_[0] &= ~std::uint64_t{3}; // 0 and 1
    for (std::uint64_t p = 2; p * p <= limit; ++p) {
        if (!bit(p)) continue;
        for (std::uint64_t q = p * p; q <= limit; q += p) {
            bits_[q >> 6] &= ~(std::uint64_t{1} << (q & 63));
        }
    }

    pi_.resize(limit + 1);
    std::uint32_t count = 0;
    for (std::uint64_t x = 0; x <= limit; ++x) {
        if (bit(x)) {
            ++count;
            primes_.push_back(x);
        }
        pi_[x] = count;
    }
}

bool PrimeTable::is_prime(std::uint64_t x) const {
    if (x > limit_) {
        throw RangeError("primality query " + std::to_string(x) + " beyond sieve limit " +
                         std::to_string(limit_));
    }
    return bit(x);
}

std::uint64_t PrimeTable::prime_count(std::uint64_t x) const {
    if (x > limit_) {
        throw RangeError("pi(" + std::to_string(x) + ") beyond sieve limit " + std::to_string(limit_));
    }
    return pi_[x];
}

std::uint64_t PrimeTable::nth_prime(std::size_t k) const {
    if (k == 0 || k > primes_.size()) {
        throw CapacityError("prime p_" + std::to_string(k) + " requested but the table holds " +
                            std::to_string(primes_.size()) + " primes");
    }
    return primes_[k - 1];
}

PrimeTable build_prime_table(std::uint64_t limit) { return PrimeTable(limit); }

std::uint64_t prime_count(const PrimeTable& table, std::uint64_t x) { return table.prime_count(x); }

std::uint64_t even_count(std::uint64_t n) {
    if (n < 2) {
        throw DomainError("even_count requires n >= 2, got " + std::to_string(n));
    }
    return n / 2;
}

std::vector<PrimePower> factorize(std::uint64_t x, const PrimeTable& table) {
    if (x < 2) {
        throw DomainError("factorize requires x >= 2, got " + std::to_string(x));
    }
    std::vector<PrimePower> out;
    std::uint64_t rest = x;
    for (const std::uint64_t p : table.primes()) {
        if (p > rest / p) break;
        if (rest % p != 0) continue;
        PrimePower pp{p, 0};
        while (rest % p == 0) {
            rest /= p;
            ++pp.exponent;
        }
        out.push_back(pp);
    }
    if (rest > 1) {
        // No sieved prime divides rest. It is certainly prime when
        // rest <= limit^2; beyond that the table is too small to tell.
        const unsigned __int128 square = static_cast<unsigned __int128>(table.limit()) * table.limit();
        if (rest > square) {
            throw CapacityError("cannot factor " + std::to_string(x) + ": residual " +
                                std::to_string(rest) + " has no prime factor <= " +
                                std::to_string(table.limit()));
        }
        out.push_back({rest, 1});
    }
    return out;
}

std::vector<PrimePower> factorize(const BigInt& x, const PrimeTable& table) {
    if (x < 2) {
        throw DomainError("factorize requires x >= 2, got " + to_decimal(x));
    }
    std::vector<PrimePower> out;
    BigInt rest = x;
    for (const std::uint64_t p : table.primes()) {
        if (BigInt(p) * p > rest) break;
        if (!mpz_divisible_ui_p(rest.get_mpz_t(), p)) continue;
        PrimePower pp{p, 0};
        while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
            mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
            ++pp.exponent;
        }
        out.push_back(pp);
    }
    if (rest > 1) {
        const BigInt limit(table.limit());
        if (rest > limit * limit || !rest.fits_ulong_p()) {
            throw CapacityError("cannot factor " + to_decimal(x) + ": residual " + to_decimal(rest) +
                                " has no prime factor <= " + std::to_string(table.limit()));
        }
        out.push_back({rest.get_ui(), 1});
    }
    return out;
}

std::vector<std::uint64_t> proper_divisors(std::uint64_t x, const PrimeTable& table) {
    std::vector<std::uint64_t> divs{1};
    for (const auto& [p, e] : factorize(x, table)) {
        const std::size_t base = divs.size();
        std::uint64_t power = 1;
        for (unsigned j = 0; j < e; ++j) {
            power *= p;
            for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * power);
        }
    }
    std::sort(divs.begin(), divs.end());
    // drop 1 and x itself
    return {divs.begin() + 1, divs.end() - 1};
}

} // namespace primeboost
