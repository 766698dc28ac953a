#include "primeboost/shattering.hpp"

#include "primeboost/errors.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <string>

namespace primeboost {

namespace {

void require_valid_set(std::span<const BigInt> set) {
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (set[i] < 2) throw DomainError("candidate " + to_decimal(set[i]) + " is below 2");
        for (std::size_t j = 0; j < i; ++j) {
            if (set[i] == set[j]) throw DomainError("candidate " + to_decimal(set[i]) + " repeated");
        }
    }
}

// Smallest admissible divisor whose progression starts above the domain
// bound, i.e. a hypothesis that labels every candidate 1.
std::uint64_t all_ones_divisor(std::uint64_t domain_bound, bool prime_only, const PrimeTable& table) {
    std::uint64_t d = domain_bound / 2 + 1;
    if (!prime_only) return d;
    while (d <= table.limit() && !table.is_prime(d)) ++d;
    if (d > table.limit()) {
        throw CapacityError("no prime above " + std::to_string(domain_bound / 2) + " in the table");
    }
    return d;
}

class ProgressionSearch {
public:
    ProgressionSearch(std::uint64_t k, std::uint64_t domain_bound, const PrimeTable& table,
                      const ProgressionSearchOptions& options)
        : k_(k), options_(options) {
        for (std::uint64_t x = 2; x <= domain_bound; ++x) {
            auto divs = progression_divisors(x, k, options.prime_only, table);
            if (!divs.empty()) {
                elements_.push_back(x);
                divisors_.push_back(std::move(divs));
            }
        }
    }

    // Depth-first search for a shattered set of exactly `ell` elements.
    // Returns the set, or nothing when the space (or the budget) is exhausted.
    std::optional<std::vector<std::uint64_t>> find(std::size_t ell) {
        ell_ = ell;
        need_ = std::size_t{1} << (ell - 1);
        chosen_.clear();
        if (extend(0)) {
            std::vector<std::uint64_t> out;
            for (auto idx : chosen_) out.push_back(elements_[idx]);
            return out;
        }
        return std::nullopt;
    }

    [[nodiscard]] bool out_of_budget() const noexcept { return examined_ >= options_.budget; }
    [[nodiscard]] std::uint64_t examined() const noexcept { return examined_; }

private:
    bool extend(std::size_t from) {
        if (chosen_.size() == ell_) return true;
        for (std::size_t idx = from; idx < elements_.size(); ++idx) {
            if (divisors_[idx].size() < need_) continue;  // factor-count condition
            if (out_of_budget()) return false;
            chosen_.push_back(idx);
            ++examined_;
            if (prefix_shattered() && extend(idx + 1)) return true;
            chosen_.pop_back();
        }
        return false;
    }

    bool prefix_shattered() const {
        const std::size_t size = chosen_.size();
        std::vector<bool> seen(std::size_t{1} << size, false);
        seen.back() = true;  // realized by a divisor beyond the domain
        std::size_t count = 1;
        for (auto member : chosen_) {
            for (auto d : divisors_[member]) {
                Dichotomy code = 0;
                for (auto other : chosen_) {
                    const std::uint64_t x = elements_[other];
                    const bool zero = x % d == 0 && x / d >= 2 && x / d <= k_;
                    code = (code << 1) | (zero ? 0U : 1U);
                }
                if (!seen[code]) {
                    seen[code] = true;
                    ++count;
                }
            }
        }
        return count == seen.size();
    }

    std::uint64_t k_;
    ProgressionSearchOptions options_;
    std::vector<std::uint64_t> elements_;
    std::vector<std::vector<std::uint64_t>> divisors_;
    std::vector<std::size_t> chosen_;
    std::size_t ell_ = 0;
    std::size_t need_ = 1;
    std::uint64_t examined_ = 0;
};

} // namespace

SubsetEnumeration::SubsetEnumeration(std::size_t ell) : ell_(ell) {
    if (ell == 0 || ell >= 64) throw DomainError("subset enumeration needs 1 <= ell < 64");
}

std::vector<std::size_t> SubsetEnumeration::subset(std::size_t j) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i <= ell_; ++i) {
        if (contains(j, i)) out.push_back(i);
    }
    return out;
}

Dichotomy dichotomy_of(const Hypothesis& h, std::span<const BigInt> set) {
    Dichotomy code = 0;
    for (const auto& c : set) code = (code << 1) | static_cast<Dichotomy>(evaluate(h, c));
    return code;
}

std::string dichotomy_string(Dichotomy code, std::size_t ell) {
    std::string out(ell, '0');
    for (std::size_t i = 0; i < ell; ++i) {
        if ((code >> (ell - 1 - i)) & 1U) out[i] = '1';
    }
    return out;
}

Dichotomy parse_dichotomy(std::string_view bits) {
    if (bits.empty() || bits.size() >= 64) throw DomainError("dichotomy length out of range");
    Dichotomy code = 0;
    for (char ch : bits) {
        if (ch != '0' && ch != '1') throw DomainError("dichotomy must be a string of 0/1");
        code = (code << 1) | static_cast<Dichotomy>(ch - '0');
    }
    return code;
}

ShatterResult check_shatter(std::span<const BigInt> set, std::span<const Hypothesis> hypotheses,
                            const ShatterOptions& options) {
    if (set.size() > options.max_set_size) {
        throw CapacityError("candidate set of size " + std::to_string(set.size()) + " exceeds the cap of " +
                            std::to_string(options.max_set_size));
    }
    if (set.empty()) throw DomainError("candidate set is empty");
    require_valid_set(set);

    const std::size_t total = std::size_t{1} << set.size();
    std::vector<std::optional<Hypothesis>> first(total);
    std::vector<std::vector<Hypothesis>> all(options.keep_all_realizers ? total : 0);
    std::size_t realized = 0;
    for (const auto& h : hypotheses) {
        const Dichotomy code = dichotomy_of(h, set);
        if (!first[code]) {
            first[code] = h;
            ++realized;
        }
        if (options.keep_all_realizers) all[code].push_back(h);
    }

    ShatterResult result;
    result.realized = realized;
    if (realized < total) {
        for (Dichotomy code = 0; code < total; ++code) {
            if (!first[code]) {
                result.missing = code;
                break;
            }
        }
        return result;
    }

    ShatterCertificate cert;
    cert.candidate_set.assign(set.begin(), set.end());
    cert.witnesses.reserve(total);
    for (auto& w : first) cert.witnesses.push_back(*w);
    cert.realizers = std::move(all);
    if (!verify_certificate(cert)) {
        throw std::logic_error("shattering certificate failed re-verification");
    }
    result.certificate = std::move(cert);
    return result;
}

std::size_t count_dichotomies(std::span<const BigInt> set, std::span<const Hypothesis> hypotheses) {
    std::set<Dichotomy> seen;
    for (const auto& h : hypotheses) seen.insert(dichotomy_of(h, set));
    return seen.size();
}

bool verify_certificate(const ShatterCertificate& cert) {
    const std::size_t ell = cert.ell();
    if (ell == 0 || ell >= 64 || cert.witnesses.size() != (std::size_t{1} << ell)) return false;
    try {
        require_valid_set(cert.candidate_set);
    } catch (const DomainError&) {
        return false;
    }
    for (Dichotomy code = 0; code < cert.witnesses.size(); ++code) {
        if (dichotomy_of(cert.witnesses[code], cert.candidate_set) != code) return false;
        if (!cert.realizers.empty()) {
            for (const auto& h : cert.realizers[code]) {
                if (dichotomy_of(h, cert.candidate_set) != code) return false;
            }
        }
    }
    return true;
}

std::vector<BigInt> construct_shatter_set(std::size_t ell, const PrimeTable& table, std::size_t max_ell) {
    if (ell == 0) throw DomainError("shattering set size must be at least 1");
    if (ell > max_ell) {
        throw CapacityError("shattering set size " + std::to_string(ell) + " exceeds the cap of " +
                            std::to_string(max_ell));
    }
    const SubsetEnumeration subsets(ell);
    if (table.primes().size() < subsets.size()) {
        throw CapacityError("construction of size " + std::to_string(ell) + " needs " +
                            std::to_string(subsets.size()) + " primes, table holds " +
                            std::to_string(table.primes().size()));
    }
    std::vector<BigInt> out(ell, BigInt(1));
    for (std::size_t i = 1; i <= ell; ++i) {
        for (std::size_t j = 1; j <= subsets.size(); ++j) {
            if (subsets.contains(j, i)) out[i - 1] *= table.nth_prime(j);
        }
    }
    if (ell == 1) out[0] *= out[0];
    return out;
}

std::vector<Hypothesis> prime_rule_class_upto(std::uint64_t bound, const PrimeTable& table) {
    if (bound > table.limit()) {
        throw RangeError("prime bound " + std::to_string(bound) + " beyond sieve limit " +
                         std::to_string(table.limit()));
    }
    std::vector<Hypothesis> out;
    for (auto p : table.primes()) {
        if (p > bound) break;
        out.emplace_back(PrimeRule{p});
    }
    return out;
}

std::vector<Hypothesis> prime_rule_class_first(std::size_t count, const PrimeTable& table) {
    std::vector<Hypothesis> out;
    out.reserve(count);
    for (std::size_t j = 1; j <= count; ++j) out.emplace_back(PrimeRule{table.nth_prime(j)});
    return out;
}

std::size_t vc_dim_restricted_formula(std::uint64_t n, const PrimeTable& table) {
    if (n < 2) throw DomainError("n must be at least 2");
    return static_cast<std::size_t>(std::bit_width(table.prime_count(n))) - 1;
}

PrimeStructureReport validate_certificate_prime_structure(const ShatterCertificate& cert,
                                                          const PrimeTable& table) {
    const std::size_t ell = cert.ell();
    if (!verify_certificate(cert)) throw DomainError("certificate does not verify");
    std::vector<std::uint64_t> witness_primes;
    for (const auto& h : cert.witnesses) {
        const auto* rule = std::get_if<PrimeRule>(&h);
        if (rule == nullptr) throw DomainError("prime-structure check needs PrimeRule witnesses, got " + to_string(h));
        witness_primes.push_back(rule->p);
    }

    PrimeStructureReport report;
    report.witness_product_divides = true;
    report.exceeds_witness_primes = true;
    const std::size_t half = std::size_t{1} << (ell - 1);
    for (std::size_t i = 0; i < ell; ++i) {
        const BigInt& c = cert.candidate_set[i];
        std::set<std::uint64_t> zeroing;
        for (Dichotomy code = 0; code < witness_primes.size(); ++code) {
            const bool bit = (code >> (ell - 1 - i)) & 1U;
            if (!bit) zeroing.insert(witness_primes[code]);
        }
        BigInt product = 1;
        for (auto p : zeroing) {
            product *= p;
            if (!(c > p)) report.exceeds_witness_primes = false;
        }
        if (zeroing.size() < half || !mpz_divisible_p(c.get_mpz_t(), product.get_mpz_t())) {
            report.witness_product_divides = false;
        }
    }

    std::set<std::uint64_t> distinct;
    for (const auto& c : cert.candidate_set) {
        for (const auto& pp : factorize(c, table)) distinct.insert(pp.prime);
    }
    report.distinct_prime_factors = distinct.size();
    report.enough_distinct_primes = distinct.size() >= (std::size_t{1} << ell) - 1;
    return report;
}

ProgressionBounds progression_vc_bounds(std::uint64_t k) {
    if (k < 2) throw DomainError("progression bound needs k >= 2");
    ProgressionBounds b;
    // ceil(log2(k-1)) is 0 for k-1 = 1, else bit_width(k-2).
    b.upper = (k - 1 == 1 ? 0 : static_cast<std::size_t>(std::bit_width(k - 2))) + 1;
    // floor(log2(k)/2) == floor(floor(log2 k) / 2)
    b.eta = (static_cast<std::uint64_t>(std::bit_width(k)) - 1) / 2;
    std::uint64_t pi_eta = 0;
    for (std::uint64_t x = 2; x <= b.eta; ++x) {
        bool prime = true;
        for (std::uint64_t q = 2; q * q <= x; ++q) {
            if (x % q == 0) {
                prime = false;
                break;
            }
        }
        if (prime) ++pi_eta;
    }
    if (pi_eta == 0) {
        b.lower = 0;
        b.lower_clamped = true;
    } else {
        b.lower = static_cast<std::size_t>(std::bit_width(pi_eta)) - 1;
    }
    return b;
}

std::string to_string(SearchStatus s) {
    switch (s) {
    case SearchStatus::proved: return "proved";
    case SearchStatus::exhaustive: return "exhaustive";
    case SearchStatus::unresolved: return "unresolved";
    }
    return "unknown";
}

std::vector<std::uint64_t> progression_divisors(std::uint64_t x, std::uint64_t k, bool prime_only,
                                                const PrimeTable& table) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t a = 2; a <= k && a <= x / 2; ++a) {
        if (x % a != 0) continue;
        const std::uint64_t d = x / a;
        if (d < 2) continue;
        if (prime_only && !table.is_prime(d)) continue;
        out.push_back(d);
    }
    std::sort(out.begin(), out.end());
    return out;
}

ProgressionVcResult certified_vc_progression(std::uint64_t k, std::uint64_t domain_bound, const PrimeTable& table,
                                             const ProgressionSearchOptions& options) {
    if (k < 2) throw DomainError("progression class needs k >= 2");
    if (domain_bound < 2 * k) {
        throw DomainError("domain bound " + std::to_string(domain_bound) + " must be at least 2k = " +
                          std::to_string(2 * k));
    }
    if (table.limit() < domain_bound) {
        throw RangeError("sieve limit " + std::to_string(table.limit()) + " below domain bound " +
                         std::to_string(domain_bound));
    }

    ProgressionVcResult result;
    // largest ell with 2^(ell-1) <= k-1
    result.upper = static_cast<std::size_t>(std::bit_width(k - 1));

    ProgressionSearch search(k, domain_bound, table, options);
    std::optional<std::vector<std::uint64_t>> best;
    result.status = SearchStatus::proved;
    for (std::size_t ell = 1; ell <= result.upper; ++ell) {
        auto found = search.find(ell);
        if (!found) {
            result.status = search.out_of_budget() ? SearchStatus::unresolved : SearchStatus::exhaustive;
            break;
        }
        best = std::move(found);
        result.lower = ell;
    }
    result.sets_examined = search.examined();

    if (best) {
        std::vector<BigInt> set(best->begin(), best->end());
        std::set<std::uint64_t> divisors;
        for (auto x : *best) {
            for (auto d : progression_divisors(x, k, options.prime_only, table)) divisors.insert(d);
        }
        divisors.insert(all_ones_divisor(domain_bound, options.prime_only, table));
        std::vector<Hypothesis> hypotheses;
        for (auto d : divisors) hypotheses.emplace_back(ProgressionRule{d, k});
        auto checked = check_shatter(set, hypotheses);
        if (!checked.shattered()) throw std::logic_error("progression search returned an unshattered set");
        result.certificate = std::move(checked.certificate);
    }
    return result;
}

nlohmann::json to_json(const ShatterCertificate& cert) {
    nlohmann::json j;
    j["candidate_set"] = nlohmann::json::array();
    for (const auto& c : cert.candidate_set) j["candidate_set"].push_back(to_decimal(c));
    j["witnesses"] = nlohmann::json::array();
    for (Dichotomy code = 0; code < cert.witnesses.size(); ++code) {
        nlohmann::json w{{"dichotomy", dichotomy_string(code, cert.ell())},
                         {"hypothesis", to_string(cert.witnesses[code])}};
        if (!cert.realizers.empty()) {
            w["realizers"] = nlohmann::json::array();
            for (const auto& h : cert.realizers[code]) w["realizers"].push_back(to_string(h));
        }
        j["witnesses"].push_back(std::move(w));
    }
    return j;
}

ShatterCertificate certificate_from_json(const nlohmann::json& j) {
    ShatterCertificate cert;
    for (const auto& c : j.at("candidate_set")) cert.candidate_set.emplace_back(c.get<std::string>(), 10);
    const std::size_t ell = cert.candidate_set.size();
    if (ell == 0 || ell >= 64) throw DomainError("certificate candidate set size out of range");
    const std::size_t total = std::size_t{1} << ell;
    std::vector<std::optional<Hypothesis>> witnesses(total);
    std::vector<std::vector<Hypothesis>> realizers;
    for (const auto& w : j.at("witnesses")) {
        const auto code = parse_dichotomy(w.at("dichotomy").get<std::string>());
        if (code >= total) throw DomainError("dichotomy wider than the candidate set");
        witnesses[code] = parse_hypothesis(w.at("hypothesis").get<std::string>());
        if (w.contains("realizers")) {
            realizers.resize(total);
            for (const auto& r : w["realizers"]) realizers[code].push_back(parse_hypothesis(r.get<std::string>()));
        }
    }
    for (auto& w : witnesses) {
        if (!w) throw DomainError("certificate is missing a dichotomy");
        cert.witnesses.push_back(*w);
    }
    cert.realizers = std::move(realizers);
    return cert;
}

} // namespace primeboost
