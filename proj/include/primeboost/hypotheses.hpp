#pragma once

#include "primeboost/bigint.hpp"
#include "primeboost/primes.hpp"
#include "primeboost/rational.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

namespace primeboost {

/// h_p: zero exactly on proper multiples of a prime p.
struct PrimeRule {
    std::uint64_t p = 2;
    friend auto operator<=>(const PrimeRule&, const PrimeRule&) = default;
};

/// h_d: zero exactly on proper multiples of any d >= 2.
struct DivisorRule {
    std::uint64_t d = 2;
    friend auto operator<=>(const DivisorRule&, const DivisorRule&) = default;
};

/// h_{d,k}: zero exactly on {2d, 3d, ..., kd}.
struct ProgressionRule {
    std::uint64_t d = 2;
    std::uint64_t k = 2;
    friend auto operator<=>(const ProgressionRule&, const ProgressionRule&) = default;
};

using Hypothesis = std::variant<PrimeRule, DivisorRule, ProgressionRule>;

/// Binary prime label r(x) with its +-1 image (0 -> -1, 1 -> +1).
struct Label {
    int value = 0;

    [[nodiscard]] constexpr int pm() const noexcept { return 2 * value - 1; }
    friend bool operator==(const Label&, const Label&) = default;
};

// Checked constructors. prime_rule rejects non-primes against the table.
[[nodiscard]] Hypothesis prime_rule(std::uint64_t p, const PrimeTable& table);
[[nodiscard]] Hypothesis divisor_rule(std::uint64_t d);
[[nodiscard]] Hypothesis progression_rule(std::uint64_t d, std::uint64_t k);

/// Throws DomainError if h violates its family's invariants.
void validate(const Hypothesis& h, const PrimeTable& table);

/// The divisor that parameterizes h (p or d).
[[nodiscard]] std::uint64_t divisor_of(const Hypothesis& h) noexcept;

/// 0 when x is in the zero set of h, else 1. Throws DomainError for x < 2.
[[nodiscard]] int evaluate(const Hypothesis& h, std::uint64_t x);
[[nodiscard]] int evaluate(const Hypothesis& h, const BigInt& x);

/// Same as evaluate, mapped to -1 / +1.
[[nodiscard]] inline int evaluate_pm(const Hypothesis& h, std::uint64_t x) { return 2 * evaluate(h, x) - 1; }

[[nodiscard]] Label prime_label(std::uint64_t x, const PrimeTable& table);

/// |{x in [2, n] : h(x) = 0}|.
[[nodiscard]] std::uint64_t zero_count(const Hypothesis& h, std::uint64_t n);

/// P(h(X) != r(X)) for X uniform on {2, ..., n}, as an exact fraction of n - 1.
/// None of the families ever zeroes a prime, so the disagreements are
/// exactly the composites outside the zero set.
[[nodiscard]] Rational exact_generalization_error(const Hypothesis& h, std::uint64_t n,
                                                  const PrimeTable& table);

/// "p:<int>", "d:<int>", "dk:<int>:<int>".
[[nodiscard]] std::string to_string(const Hypothesis& h);
[[nodiscard]] Hypothesis parse_hypothesis(std::string_view text);

} // namespace primeboost
