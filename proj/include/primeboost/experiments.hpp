#pragma once

#include "primeboost/adaboost.hpp"
#include "primeboost/erm.hpp"
#include "primeboost/primes.hpp"
#include "primeboost/rational.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace primeboost {

/// m_n = ceil(coefficient * (ln n)^exponent).
struct SampleSizeRule {
    double coefficient = 1.0;
    int exponent = 3;

    [[nodiscard]] std::size_t sample_size(std::uint64_t n) const;
};

struct ExperimentConfig {
    std::vector<std::uint64_t> n_grid{100, 1'000, 10'000, 100'000, 1'000'000};
    SampleSizeRule m_rule{};
    std::size_t trials = 100;
    std::size_t rounds = 5;
    std::uint64_t seed = 0;
    BaseClass base = BaseClass::primes;

    /// Throws DomainError on: an n below 4 or an unsorted grid, exponent
    /// outside {2, 3}, a nonpositive coefficient, zero trials or rounds.
    void validate() const;
    [[nodiscard]] std::uint64_t max_n() const { return n_grid.empty() ? 0 : n_grid.back(); }
};

/// Every field except seed is required.
[[nodiscard]] ExperimentConfig config_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json to_json(const ExperimentConfig& config);

/// Independent generator for one (seed, n, trial) cell. The three keys are
/// folded through SplitMix64 into the seed of a std::mt19937_64, so the
/// stream does not depend on the order trials are scheduled in.
[[nodiscard]] std::mt19937_64 trial_stream(std::uint64_t seed, std::uint64_t n, std::uint64_t trial);

/// Uniform draw from {2, ..., n}: one 64-bit word scaled onto [0, n-2] by a
/// 128-bit multiply-high, then shifted by 2.
[[nodiscard]] std::uint64_t draw_uniform(std::uint64_t n, std::mt19937_64& rng);

/// m i.i.d. uniform draws from {2, ..., n} with labels and weights 1/m.
template <class W = double>
[[nodiscard]] BasicSample<W> sample_uniform(std::uint64_t n, std::size_t m, std::mt19937_64& rng,
                                            const PrimeTable& table);

/// E[Y_i] = (2(t(n) - 1) + pi(n)) / (n - 1) - 1.
[[nodiscard]] Rational mu_n(std::uint64_t n, const PrimeTable& table);

/// exp(-m mu_n^2 / 2), or 1 when mu_n <= 0.
[[nodiscard]] double hoeffding_bound(std::uint64_t n, std::size_t m, const PrimeTable& table);

/// (3/2 + pi(n)) / (n - 1): deterministic bound on |L(h_2) - 1/2|.
[[nodiscard]] Rational h2_deviation_bound(std::uint64_t n, const PrimeTable& table);

/// Exact fraction of x in [2, n] where the boosted vote agrees with r(x).
[[nodiscard]] Rational strong_accuracy(const BoostTrace& trace, std::uint64_t n, const PrimeTable& table);

enum class ExperimentKind { erm, boost };

[[nodiscard]] std::string to_string(ExperimentKind kind);

struct TrialRecord {
    ExperimentKind kind = ExperimentKind::erm;
    std::uint64_t n = 0;
    std::size_t m = 0;
    std::size_t trial = 0;
    std::uint64_t d_S = 2;
    Rational L_gen;  // exact L_{D_n}(h_{d_S})
    std::vector<BoostRound> rounds;
    BoostStatus status = BoostStatus::completed;
    std::optional<double> acc_strong;
    std::optional<double> acc_baseline;

    [[nodiscard]] bool dS_ne_2() const noexcept { return d_S != 2; }
    friend bool operator==(const TrialRecord&, const TrialRecord&);
};

bool operator==(const BoostRound& a, const BoostRound& b);

struct RunOptions {
    std::size_t workers = 1;
};

/// One record per (n, trial): the ERM divisor of a fresh uniform sample and
/// its exact generalization error. Records come back ordered by (n, trial).
[[nodiscard]] std::vector<TrialRecord> run_erm_convergence(const ExperimentConfig& config, const PrimeTable& table,
                                                           const RunOptions& options = {});

/// One record per (n, trial): the full AdaBoost trace on the same sample the
/// ERM experiment draws, plus exact domain-wide accuracies of the boosted
/// vote and of h_2.
[[nodiscard]] std::vector<TrialRecord> run_weight_convergence(const ExperimentConfig& config,
                                                              const PrimeTable& table,
                                                              const RunOptions& options = {});

struct ErmSummary {
    std::uint64_t n = 0;
    std::size_t m = 0;
    std::size_t trials = 0;
    double mean_L = 0.0;
    double median_L = 0.0;
    double freq_dS_ne_2 = 0.0;
    double hoeffding = 1.0;
};

/// Per-n aggregates, in grid order.
[[nodiscard]] std::vector<ErmSummary> summarize_erm(const std::vector<TrialRecord>& records, const PrimeTable& table);

/// exp(-2 sum_{j<=t}|W_j|) eps_1 <= eps_{t+1} <= exp(2 sum_{j<=t}|W_j|) eps_1
/// for every recorded round, up to a relative slack for rounding.
[[nodiscard]] bool error_sandwich_holds(const BoostTrace& trace, double relative_slack = 1e-9);
[[nodiscard]] bool error_sandwich_holds(const std::vector<BoostRound>& rounds, double relative_slack = 1e-9);

inline constexpr const char* kCsvHeader =
    "experiment,n,m,trial,t,d_t,eps_t,W_t,d_S,L_gen_num,L_gen_den,L_gen_float,dS_ne_2,acc_strong,acc_baseline,status";

/// Rows sorted by (n, trial, experiment, t). ERM records take one row;
/// boosting records take one row per round.
void write_csv(std::ostream& os, std::vector<TrialRecord> records);
void write_csv(const std::filesystem::path& path, std::vector<TrialRecord> records);

[[nodiscard]] std::vector<TrialRecord> read_csv(std::istream& is);

[[nodiscard]] nlohmann::json to_json(const TrialRecord& record);

} // namespace primeboost
