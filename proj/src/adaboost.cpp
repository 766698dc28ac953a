#include "primeboost/adaboost.hpp"

#include "primeboost/errors.hpp"
#include "primeboost/format.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace primeboost {

BoostDistribution BoostDistribution::uniform(std::size_t m) {
    if (m == 0) throw DomainError("distribution over an empty sample");
    return BoostDistribution{std::vector<double>(m, 1.0 / static_cast<double>(m))};
}

std::string to_string(BoostStatus s) {
    switch (s) {
    case BoostStatus::completed: return "completed";
    case BoostStatus::stopped_perfect: return "stopped_perfect";
    case BoostStatus::stopped_degenerate: return "stopped_degenerate";
    }
    return "unknown";
}

BoostStatus parse_boost_status(std::string_view text) {
    if (text == "completed") return BoostStatus::completed;
    if (text == "stopped_perfect") return BoostStatus::stopped_perfect;
    if (text == "stopped_degenerate") return BoostStatus::stopped_degenerate;
    throw DomainError("unknown boost status '" + std::string(text) + "'");
}

WeakHypothesis weak_learn(const Sample& sample, const BoostDistribution& dist, const PrimeTable& table,
                          BaseClass base) {
    if (dist.size() != sample.size()) {
        throw DomainError("distribution of size " + std::to_string(dist.size()) + " for a sample of size " +
                          std::to_string(sample.size()));
    }
    Sample weighted{sample.instances, sample.labels, dist.dist};
    const auto choice = erm_select(weighted, table, base);
    return {choice.divisor, choice.risk};
}

double weight_from_error(double eps, double eps_floor) {
    const double clamped = std::clamp(eps, eps_floor, 1.0 - eps_floor);
    return 0.5 * std::log(1.0 / clamped - 1.0);
}

BoostDistribution update_distribution(const BoostDistribution& dist, double weight, const Hypothesis& h,
                                      const Sample& sample) {
    if (dist.size() != sample.size()) throw DomainError("distribution and sample sizes differ");
    BoostDistribution next;
    next.dist.resize(dist.size());
    double normalizer = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const int margin = sample.labels[i].pm() * evaluate_pm(h, sample.instances[i]);
        next.dist[i] = dist.dist[i] * std::exp(-weight * margin);
        normalizer += next.dist[i];
    }
    if (!(normalizer > 0.0) || !std::isfinite(normalizer)) {
        throw std::domain_error("AdaBoost normalizer is " + format_double(normalizer));
    }
    for (auto& d : next.dist) d /= normalizer;
    return next;
}

BoostTrace run_adaboost(const Sample& sample, std::size_t rounds, const PrimeTable& table,
                        const BoostOptions& options) {
    if (rounds == 0) throw DomainError("AdaBoost needs at least one round");
    BoostTrace trace;
    trace.base = options.base;
    auto dist = BoostDistribution::uniform(sample.size());
    for (std::size_t t = 1; t <= rounds; ++t) {
        const auto weak = weak_learn(sample, dist, table, options.base);
        BoostRound round;
        round.t = t;
        round.divisor = weak.divisor;
        round.error = weak.error;
        round.weight = weight_from_error(weak.error, options.eps_floor);
        round.clamped = weak.error < options.eps_floor || weak.error > 1.0 - options.eps_floor;
        trace.rounds.push_back(round);
        if (weak.error == 0.0) {
            trace.status = BoostStatus::stopped_perfect;
            break;
        }
        if (t == rounds) break;
        try {
            dist = update_distribution(dist, round.weight, DivisorRule{weak.divisor}, sample);
        } catch (const std::domain_error&) {
            trace.status = BoostStatus::stopped_degenerate;
            break;
        }
    }
    return trace;
}

int strong_classify(const BoostTrace& trace, std::uint64_t x) {
    if (trace.rounds.empty()) throw DomainError("strong classifier needs at least one round");
    double vote = 0.0;
    for (const auto& r : trace.rounds) vote += r.weight * evaluate_pm(DivisorRule{r.divisor}, x);
    return vote < 0.0 ? -1 : 1;
}

void write_trace_csv_header(std::ostream& os) { os << "trial_id,n,m,t,d_t,eps_t,W_t,status\n"; }

void write_trace_csv(std::ostream& os, const BoostTrace& trace, std::size_t trial_id, std::uint64_t n,
                     std::size_t m) {
    for (const auto& r : trace.rounds) {
        os << trial_id << ',' << n << ',' << m << ',' << r.t << ',' << r.divisor << ',' << format_double(r.error)
           << ',' << format_double(r.weight) << ',' << to_string(trace.status) << '\n';
    }
}

} // namespace primeboost
