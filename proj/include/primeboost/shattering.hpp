#pragma once

#include "primeboost/bigint.hpp"
#include "primeboost/hypotheses.hpp"
#include "primeboost/primes.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace primeboost {

/// The 2^ell subsets of {1, ..., ell} in binary order: A_j = {i : bit i-1 of
/// j-1 is set}, so A_1 is the empty set and A_{2^ell} is everything.
class SubsetEnumeration {
public:
    explicit SubsetEnumeration(std::size_t ell);

    [[nodiscard]] std::size_t ell() const noexcept { return ell_; }
    [[nodiscard]] std::size_t size() const noexcept { return std::size_t{1} << ell_; }

    /// Whether element i (1-based) belongs to A_j (1-based).
    [[nodiscard]] bool contains(std::size_t j, std::size_t i) const noexcept {
        return ((j - 1) >> (i - 1)) & 1U;
    }

    /// Members of A_j, ascending.
    [[nodiscard]] std::vector<std::size_t> subset(std::size_t j) const;

private:
    std::size_t ell_;
};

/// A labeling (b_1, ..., b_ell) of a candidate set, encoded with b_1 as the
/// most significant bit so that ascending codes follow lexicographic order.
using Dichotomy = std::uint64_t;

[[nodiscard]] Dichotomy dichotomy_of(const Hypothesis& h, std::span<const BigInt> set);
[[nodiscard]] std::string dichotomy_string(Dichotomy code, std::size_t ell);
[[nodiscard]] Dichotomy parse_dichotomy(std::string_view bits);

struct ShatterCertificate {
    std::vector<BigInt> candidate_set;
    /// witnesses[code] realizes dichotomy `code`; one entry per dichotomy.
    std::vector<Hypothesis> witnesses;
    /// Every realizer per dichotomy in class order; empty unless requested.
    std::vector<std::vector<Hypothesis>> realizers;

    [[nodiscard]] std::size_t ell() const noexcept { return candidate_set.size(); }
};

struct ShatterOptions {
    std::size_t max_set_size = 20;
    bool keep_all_realizers = false;
};

struct ShatterResult {
    std::optional<ShatterCertificate> certificate;
    /// Lexicographically first dichotomy nobody realizes.
    std::optional<Dichotomy> missing;
    std::size_t realized = 0;

    [[nodiscard]] bool shattered() const noexcept { return certificate.has_value(); }
};

/// Decides whether `hypotheses` shatters `set`. The witness for each
/// dichotomy is its first realizer in class order. On success the
/// certificate has already been re-verified by direct evaluation.
[[nodiscard]] ShatterResult check_shatter(std::span<const BigInt> set, std::span<const Hypothesis> hypotheses,
                                          const ShatterOptions& options = {});

/// Number of distinct dichotomies the class induces on the set.
[[nodiscard]] std::size_t count_dichotomies(std::span<const BigInt> set, std::span<const Hypothesis> hypotheses);

/// True iff every witness realizes its dichotomy and the set is valid.
[[nodiscard]] bool verify_certificate(const ShatterCertificate& cert);

/// c_i = product of p_k over the subsets A_k containing i, for the first
/// 2^ell primes. For ell = 1 the single factor is squared so that the prime
/// rule zeroes it. Throws CapacityError when ell exceeds max_ell or the table
/// has fewer than 2^ell primes.
[[nodiscard]] std::vector<BigInt> construct_shatter_set(std::size_t ell, const PrimeTable& table,
                                                        std::size_t max_ell = 8);

/// PrimeRule class on the primes <= bound (or the first `count` primes).
[[nodiscard]] std::vector<Hypothesis> prime_rule_class_upto(std::uint64_t bound, const PrimeTable& table);
[[nodiscard]] std::vector<Hypothesis> prime_rule_class_first(std::size_t count, const PrimeTable& table);

/// floor(log2 pi(n)), the VC dimension of the prime rules restricted to p <= n.
[[nodiscard]] std::size_t vc_dim_restricted_formula(std::uint64_t n, const PrimeTable& table);

struct PrimeStructureReport {
    bool witness_product_divides = false;   // each c_i divisible by 2^(ell-1) distinct witness primes
    bool exceeds_witness_primes = false;    // c_i larger than every witness prime zeroing it
    bool enough_distinct_primes = false;    // prod c_i has >= 2^ell - 1 distinct prime factors
    std::size_t distinct_prime_factors = 0;

    [[nodiscard]] bool passed() const noexcept {
        return witness_product_divides && exceeds_witness_primes && enough_distinct_primes;
    }
};

/// Checks the divisibility structure every set shattered by prime rules must
/// have. Throws DomainError if a witness is not a PrimeRule and CapacityError
/// if a candidate cannot be factored with the table.
[[nodiscard]] PrimeStructureReport validate_certificate_prime_structure(const ShatterCertificate& cert,
                                                                        const PrimeTable& table);

struct ProgressionBounds {
    std::size_t lower = 0;
    std::size_t upper = 1;
    std::uint64_t eta = 0;
    /// pi(eta) was 0, so the log lower bound is undefined and reported as 0.
    bool lower_clamped = false;
};

/// floor(log2 pi(eta_k)) <= VCdim(H'_k) <= VCdim(H_k) <= ceil(log2(k-1)) + 1,
/// with eta_k = floor(log2(k) / 2). Throws DomainError for k < 2.
[[nodiscard]] ProgressionBounds progression_vc_bounds(std::uint64_t k);

enum class SearchStatus {
    proved,      // a shattered set meets the factor-count upper bound
    exhaustive,  // no larger set with elements <= the domain bound is shattered
    unresolved,  // budget ran out first
};

[[nodiscard]] std::string to_string(SearchStatus s);

struct ProgressionVcResult {
    std::size_t lower = 0;  // largest size with a shattered set found
    std::size_t upper = 0;  // largest ell with 2^(ell-1) <= k-1
    SearchStatus status = SearchStatus::unresolved;
    std::optional<ShatterCertificate> certificate;
    std::uint64_t sets_examined = 0;

    [[nodiscard]] std::optional<std::size_t> dimension() const noexcept {
        if (status == SearchStatus::unresolved) return std::nullopt;
        return lower;
    }
};

struct ProgressionSearchOptions {
    bool prime_only = false;
    std::uint64_t budget = 50'000'000;
};

/// VC dimension of H_k (or H'_k when prime_only) over candidate sets drawn
/// from [2, domain_bound]. Candidates are restricted to integers with at
/// least 2^(ell-1) admissible divisors d = x/a, 2 <= a <= k, and sets are
/// grown depth-first only while every prefix is itself shattered.
/// Requires domain_bound >= 2k and table.limit() >= domain_bound.
[[nodiscard]] ProgressionVcResult certified_vc_progression(std::uint64_t k, std::uint64_t domain_bound,
                                                           const PrimeTable& table,
                                                           const ProgressionSearchOptions& options = {});

/// Admissible progression divisors of x: {x/a : 2 <= a <= k, a | x, x/a >= 2},
/// ascending, primes only if requested.
[[nodiscard]] std::vector<std::uint64_t> progression_divisors(std::uint64_t x, std::uint64_t k, bool prime_only,
                                                              const PrimeTable& table);

[[nodiscard]] nlohmann::json to_json(const ShatterCertificate& cert);
[[nodiscard]] ShatterCertificate certificate_from_json(const nlohmann::json& j);

} // namespace primeboost
