#pragma once

#include "primeboost/hypotheses.hpp"
#include "primeboost/primes.hpp"
#include "primeboost/rational.hpp"

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace primeboost {

/// Weight arithmetic policy. Rational weights compare exactly; floating
/// weights treat values within 1e-12 as tied.
template <class W>
struct WeightTraits;

template <>
struct WeightTraits<double> {
    static constexpr double tie_tolerance = 1e-12;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double uniform(std::size_t m) { return 1.0 / static_cast<double>(m); }
    static bool tied(double a, double b) { return std::abs(a - b) <= tie_tolerance; }
    static double to_double(double w) { return w; }
};

template <>
struct WeightTraits<Rational> {
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational uniform(std::size_t m) { return Rational(1, static_cast<std::int64_t>(m)); }
    static bool tied(const Rational& a, const Rational& b) { return a == b; }
    static double to_double(const Rational& w) { return w.to_double(); }
};

/// Labeled, weighted sample (X_i, r(X_i), a_i). Built through make_sample,
/// which enforces the label and weight invariants.
template <class W>
struct BasicSample {
    std::vector<std::uint64_t> instances;
    std::vector<Label> labels;
    std::vector<W> weights;

    [[nodiscard]] std::size_t size() const noexcept { return instances.size(); }
};

using Sample = BasicSample<double>;
using ExactSample = BasicSample<Rational>;

/// Attaches prime labels and checks weights: nonnegative, summing to 1
/// (exactly for rationals, within 1e-12 for floats).
template <class W>
[[nodiscard]] BasicSample<W> make_sample(std::vector<std::uint64_t> instances, std::vector<W> weights,
                                         const PrimeTable& table);

template <class W>
[[nodiscard]] BasicSample<W> make_uniform_sample(std::vector<std::uint64_t> instances, const PrimeTable& table);

/// D(S, d): weight of composite instances that are proper multiples of d.
template <class W>
[[nodiscard]] W coverage(const BasicSample<W>& sample, std::uint64_t d);

/// L_a(S, h): weight of the instances h labels differently from r.
template <class W>
[[nodiscard]] W weighted_risk(const BasicSample<W>& sample, const Hypothesis& h);

/// Total weight of composite instances.
template <class W>
[[nodiscard]] W composite_weight(const BasicSample<W>& sample);

/// Base class searched by the ERM rule: prime divisors only (H') or every
/// integer divisor (H). Both provably select the same hypothesis.
enum class BaseClass { primes, divisors };

template <class W>
struct ErmChoice {
    std::uint64_t divisor = 2;
    W coverage{};
    W risk{};
};

/// d_S: the smallest d maximizing D(S, d). Only proper divisors of composite
/// instances can have positive coverage, so those (plus 2) are the whole
/// candidate domain. The selected divisor is checked to be prime; a
/// composite result throws std::logic_error.
template <class W>
[[nodiscard]] ErmChoice<W> erm_select(const BasicSample<W>& sample, const PrimeTable& table,
                                      BaseClass base = BaseClass::divisors);

/// x_i = p_{2i-1} * p_{2i}, i = 1..m, uniform exact weights.
[[nodiscard]] ExactSample adversarial_sample(std::size_t m, const PrimeTable& table);

/// CSV with columns instance,label,weight.
template <class W>
void write_sample_csv(std::ostream& os, const BasicSample<W>& sample);

} // namespace primeboost
