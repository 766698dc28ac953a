#include "primeboost/erm.hpp"

#include "primeboost/errors.hpp"
#include "primeboost/format.hpp"

#include <algorithm>
#include <ostream>
#include <string>
#include <utility>

namespace primeboost {

namespace {

template <class W>
void check_weights(const std::vector<W>& weights) {
    using Traits = WeightTraits<W>;
    W total = Traits::zero();
    for (const auto& w : weights) {
        if (w < Traits::zero()) throw DomainError("sample weights must be nonnegative");
        total += w;
    }
    if constexpr (std::is_same_v<W, double>) {
        if (std::abs(total - 1.0) > 1e-12) {
            throw DomainError("sample weights sum to " + format_double(total) + ", not 1");
        }
    } else {
        if (total != Traits::one()) throw DomainError("sample weights sum to " + total.str() + ", not 1");
    }
}

std::string weight_text(double w) { return format_double(w); }
std::string weight_text(const Rational& w) { return w.str(); }

} // namespace

template <class W>
BasicSample<W> make_sample(std::vector<std::uint64_t> instances, std::vector<W> weights, const PrimeTable& table) {
    if (instances.size() != weights.size()) {
        throw DomainError("sample has " + std::to_string(instances.size()) + " instances but " +
                          std::to_string(weights.size()) + " weights");
    }
    if (instances.empty()) throw DomainError("sample is empty");
    check_weights(weights);
    BasicSample<W> s;
    s.labels.reserve(instances.size());
    for (auto x : instances) s.labels.push_back(prime_label(x, table));
    s.instances = std::move(instances);
    s.weights = std::move(weights);
    return s;
}

template <class W>
BasicSample<W> make_uniform_sample(std::vector<std::uint64_t> instances, const PrimeTable& table) {
    const std::size_t m = instances.size();
    if (m == 0) throw DomainError("sample is empty");
    std::vector<W> weights(m, WeightTraits<W>::uniform(m));
    if constexpr (std::is_same_v<W, double>) {
        // 1/m does not sum to exactly 1 in binary for every m.
        BasicSample<W> s;
        for (auto x : instances) s.labels.push_back(prime_label(x, table));
        s.instances = std::move(instances);
        s.weights = std::move(weights);
        return s;
    } else {
        return make_sample(std::move(instances), std::move(weights), table);
    }
}

template <class W>
W coverage(const BasicSample<W>& sample, std::uint64_t d) {
    W total = WeightTraits<W>::zero();
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const auto x = sample.instances[i];
        if (sample.labels[i].value == 0 && x > d && x % d == 0) total += sample.weights[i];
    }
    return total;
}

template <class W>
W weighted_risk(const BasicSample<W>& sample, const Hypothesis& h) {
    W total = WeightTraits<W>::zero();
    for (std::size_t i = 0; i < sample.size(); ++i) {
        if (evaluate(h, sample.instances[i]) != sample.labels[i].value) total += sample.weights[i];
    }
    return total;
}

template <class W>
W composite_weight(const BasicSample<W>& sample) {
    W total = WeightTraits<W>::zero();
    for (std::size_t i = 0; i < sample.size(); ++i) {
        if (sample.labels[i].value == 0) total += sample.weights[i];
    }
    return total;
}

template <class W>
ErmChoice<W> erm_select(const BasicSample<W>& sample, const PrimeTable& table, BaseClass base) {
    using Traits = WeightTraits<W>;

    // (candidate divisor, instance index) for every composite instance the
    // candidate properly divides; sorted so each divisor's weights are summed
    // in instance order.
    std::vector<std::pair<std::uint64_t, std::size_t>> hits;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        if (sample.labels[i].value != 0) continue;
        const auto x = sample.instances[i];
        if (base == BaseClass::divisors) {
            for (auto d : proper_divisors(x, table)) hits.emplace_back(d, i);
        } else {
            for (const auto& pp : factorize(x, table)) hits.emplace_back(pp.prime, i);
        }
    }
    std::sort(hits.begin(), hits.end());

    std::vector<std::pair<std::uint64_t, W>> covered;
    for (const auto& [d, i] : hits) {
        if (covered.empty() || covered.back().first != d) covered.emplace_back(d, Traits::zero());
        covered.back().second += sample.weights[i];
    }

    W best = Traits::zero();
    for (const auto& [d, c] : covered) {
        if (c > best) best = c;
    }

    ErmChoice<W> choice;
    choice.divisor = 2;
    choice.coverage = coverage(sample, 2);
    if (!Traits::tied(choice.coverage, best)) {
        for (const auto& [d, c] : covered) {
            if (Traits::tied(c, best)) {
                choice.divisor = d;
                choice.coverage = c;
                break;
            }
        }
    }
    if (!table.is_prime(choice.divisor)) {
        throw std::logic_error("ERM selected composite divisor " + std::to_string(choice.divisor));
    }
    choice.risk = weighted_risk(sample, Hypothesis{DivisorRule{choice.divisor}});
    return choice;
}

ExactSample adversarial_sample(std::size_t m, const PrimeTable& table) {
    if (m == 0) throw DomainError("adversarial sample needs m >= 1");
    if (table.primes().size() < 2 * m) {
        throw CapacityError("adversarial sample of size " + std::to_string(m) + " needs " + std::to_string(2 * m) +
                            " primes, table holds " + std::to_string(table.primes().size()));
    }
    std::vector<std::uint64_t> xs;
    xs.reserve(m);
    for (std::size_t i = 1; i <= m; ++i) xs.push_back(table.nth_prime(2 * i - 1) * table.nth_prime(2 * i));
    if (xs.back() > table.limit()) {
        throw CapacityError("adversarial instance " + std::to_string(xs.back()) + " exceeds sieve limit " +
                            std::to_string(table.limit()));
    }
    return make_uniform_sample<Rational>(std::move(xs), table);
}

template <class W>
void write_sample_csv(std::ostream& os, const BasicSample<W>& sample) {
    os << "instance,label,weight\n";
    for (std::size_t i = 0; i < sample.size(); ++i) {
        os << sample.instances[i] << ',' << sample.labels[i].value << ',' << weight_text(sample.weights[i]) << '\n';
    }
}

#define PRIMEBOOST_INSTANTIATE(W)                                                                           \
    template BasicSample<W> make_sample<W>(std::vector<std::uint64_t>, std::vector<W>, const PrimeTable&); \
    template BasicSample<W> make_uniform_sample<W>(std::vector<std::uint64_t>, const PrimeTable&);         \
    template W coverage<W>(const BasicSample<W>&, std::uint64_t);                                          \
    template W weighted_risk<W>(const BasicSample<W>&, const Hypothesis&);                                 \
    template W composite_weight<W>(const BasicSample<W>&);                                                 \
    template ErmChoice<W> erm_select<W>(const BasicSample<W>&, const PrimeTable&, BaseClass);              \
    template void write_sample_csv<W>(std::ostream&, const BasicSample<W>&);

PRIMEBOOST_INSTANTIATE(double)
PRIMEBOOST_INSTANTIATE(Rational)

#undef PRIMEBOOST_INSTANTIATE

} // namespace primeboost
