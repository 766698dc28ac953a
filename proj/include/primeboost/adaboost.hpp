#pragma once

#include "primeboost/erm.hpp"
#include "primeboost/hypotheses.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace primeboost {

/// D^(t): nonnegative weights over the sample summing to 1.
struct BoostDistribution {
    std::vector<double> dist;

    [[nodiscard]] static BoostDistribution uniform(std::size_t m);
    [[nodiscard]] std::size_t size() const noexcept { return dist.size(); }
};

struct WeakHypothesis {
    std::uint64_t divisor = 2;
    double error = 0.0;
};

struct BoostRound {
    std::size_t t = 0;
    std::uint64_t divisor = 2;
    double error = 0.0;   // eps_t, before clamping
    double weight = 0.0;  // W_t
    bool clamped = false; // eps_t hit the clamp floor or ceiling
};

enum class BoostStatus {
    completed,
    stopped_perfect,    // a round had zero weighted error
    stopped_degenerate, // the reweighting normalizer was not a positive finite number
};

[[nodiscard]] std::string to_string(BoostStatus s);
[[nodiscard]] BoostStatus parse_boost_status(std::string_view text);

struct BoostTrace {
    std::vector<BoostRound> rounds;
    BoostStatus status = BoostStatus::completed;
    BaseClass base = BaseClass::primes;
};

struct BoostOptions {
    double eps_floor = 1e-12;
    BaseClass base = BaseClass::primes;
};

/// Minimum weighted error over the base class under `dist`, attained by the
/// smallest minimizing divisor. Reuses the ERM rule with a = dist.
[[nodiscard]] WeakHypothesis weak_learn(const Sample& sample, const BoostDistribution& dist, const PrimeTable& table,
                                        BaseClass base = BaseClass::primes);

/// W = 1/2 ln(1/eps - 1), eps clamped into [eps_floor, 1 - eps_floor].
[[nodiscard]] double weight_from_error(double eps, double eps_floor = 1e-12);

/// D'_i proportional to D_i exp(-W r(X_i) h(X_i)), labels and predictions in
/// +-1 form. Throws std::domain_error if the normalizer is not positive and
/// finite.
[[nodiscard]] BoostDistribution update_distribution(const BoostDistribution& dist, double weight,
                                                    const Hypothesis& h, const Sample& sample);

/// T rounds of AdaBoost from D^(1) = 1/m. Stops early (stopped_perfect) on a
/// zero-error round, after recording it. Rounds with eps_t > 1/2 keep their
/// negative weight.
[[nodiscard]] BoostTrace run_adaboost(const Sample& sample, std::size_t rounds, const PrimeTable& table,
                                      const BoostOptions& options = {});

/// sign(sum_t W_t h_t(x)) with h_t in +-1 form and sign(0) = +1.
[[nodiscard]] int strong_classify(const BoostTrace& trace, std::uint64_t x);

/// Rows trial_id,n,m,t,d_t,eps_t,W_t,status.
void write_trace_csv_header(std::ostream& os);
void write_trace_csv(std::ostream& os, const BoostTrace& trace, std::size_t trial_id, std::uint64_t n,
                     std::size_t m);

} // namespace primeboost
