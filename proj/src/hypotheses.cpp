#include "primeboost/hypotheses.hpp"

#include "primeboost/errors.hpp"

#include <algorithm>
#include <charconv>
#include <string>
#include <type_traits>

namespace primeboost {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_instance(std::uint64_t x) {
    if (x < 2) throw DomainError("hypotheses are defined on integers >= 2, got " + std::to_string(x));
}

std::uint64_t parse_uint(std::string_view field, std::string_view whole) {
    std::uint64_t v = 0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (ec != std::errc{} || ptr != end || field.empty()) {
        throw DomainError("malformed hypothesis '" + std::string(whole) + "'");
    }
    return v;
}

} // namespace

Hypothesis prime_rule(std::uint64_t p, const PrimeTable& table) {
    Hypothesis h = PrimeRule{p};
    validate(h, table);
    return h;
}

Hypothesis divisor_rule(std::uint64_t d) {
    if (d < 2) throw DomainError("divisor rule requires d >= 2, got " + std::to_string(d));
    return DivisorRule{d};
}

Hypothesis progression_rule(std::uint64_t d, std::uint64_t k) {
    if (d < 2) throw DomainError("progression rule requires d >= 2, got " + std::to_string(d));
    if (k < 2) throw DomainError("progression rule requires k >= 2, got " + std::to_string(k));
    return ProgressionRule{d, k};
}

void validate(const Hypothesis& h, const PrimeTable& table) {
    std::visit(overloaded{
                   [&](const PrimeRule& r) {
                       if (r.p < 2 || !table.is_prime(r.p)) {
                           throw DomainError("prime rule parameter " + std::to_string(r.p) + " is not prime");
                       }
                   },
                   [](const DivisorRule& r) { (void)divisor_rule(r.d); },
                   [](const ProgressionRule& r) { (void)progression_rule(r.d, r.k); },
               },
               h);
}

std::uint64_t divisor_of(const Hypothesis& h) noexcept {
    return std::visit(overloaded{
                          [](const PrimeRule& r) { return r.p; },
                          [](const DivisorRule& r) { return r.d; },
                          [](const ProgressionRule& r) { return r.d; },
                      },
                      h);
}

int evaluate(const Hypothesis& h, std::uint64_t x) {
    require_instance(x);
    return std::visit(overloaded{
                          [x](const PrimeRule& r) { return (x > r.p && x % r.p == 0) ? 0 : 1; },
                          [x](const DivisorRule& r) { return (x > r.d && x % r.d == 0) ? 0 : 1; },
                          [x](const ProgressionRule& r) {
                              if (x % r.d != 0) return 1;
                              const std::uint64_t a = x / r.d;
                              return (a >= 2 && a <= r.k) ? 0 : 1;
                          },
                      },
                      h);
}

int evaluate(const Hypothesis& h, const BigInt& x) {
    if (x < 2) throw DomainError("hypotheses are defined on integers >= 2, got " + to_decimal(x));
    if (x.fits_ulong_p()) return evaluate(h, static_cast<std::uint64_t>(x.get_ui()));
    // x exceeds 64 bits, so it is larger than any machine-word divisor.
    return std::visit(overloaded{
                          [&x](const PrimeRule& r) { return mpz_divisible_ui_p(x.get_mpz_t(), r.p) ? 0 : 1; },
                          [&x](const DivisorRule& r) { return mpz_divisible_ui_p(x.get_mpz_t(), r.d) ? 0 : 1; },
                          [&x](const ProgressionRule& r) {
                              if (!mpz_divisible_ui_p(x.get_mpz_t(), r.d)) return 1;
                              const BigInt a = x / r.d;
                              return (a >= 2 && a <= BigInt(r.k)) ? 0 : 1;
                          },
                      },
                      h);
}

Label prime_label(std::uint64_t x, const PrimeTable& table) {
    require_instance(x);
    return Label{table.is_prime(x) ? 1 : 0};
}

std::uint64_t zero_count(const Hypothesis& h, std::uint64_t n) {
    return std::visit(overloaded{
                          [n](const PrimeRule& r) { return std::max<std::uint64_t>(n / r.p, 1) - 1; },
                          [n](const DivisorRule& r) { return std::max<std::uint64_t>(n / r.d, 1) - 1; },
                          [n](const ProgressionRule& r) {
                              return std::max<std::uint64_t>(std::min(r.k, n / r.d), 1) - 1;
                          },
                      },
                      h);
}

Rational exact_generalization_error(const Hypothesis& h, std::uint64_t n, const PrimeTable& table) {
    if (n < 2) throw DomainError("generalization error requires n >= 2, got " + std::to_string(n));
    const std::uint64_t composites = (n - 1) - table.prime_count(n);
    const std::uint64_t zeros = zero_count(h, n);
    return Rational(static_cast<std::int64_t>(composites - zeros), static_cast<std::int64_t>(n - 1));
}

std::string to_string(const Hypothesis& h) {
    return std::visit(overloaded{
                          [](const PrimeRule& r) { return "p:" + std::to_string(r.p); },
                          [](const DivisorRule& r) { return "d:" + std::to_string(r.d); },
                          [](const ProgressionRule& r) {
                              return "dk:" + std::to_string(r.d) + ":" + std::to_string(r.k);
                          },
                      },
                      h);
}

Hypothesis parse_hypothesis(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw DomainError("malformed hypothesis '" + std::string(text) + "'");
    }
    const std::string_view tag = text.substr(0, colon);
    const std::string_view rest = text.substr(colon + 1);
    if (tag == "p") {
        const auto p = parse_uint(rest, text);
        if (p < 2) throw DomainError("prime rule requires p >= 2");
        return PrimeRule{p};
    }
    if (tag == "d") return divisor_rule(parse_uint(rest, text));
    if (tag == "dk") {
        const auto second = rest.find(':');
        if (second == std::string_view::npos) {
            throw DomainError("malformed hypothesis '" + std::string(text) + "'");
        }
        return progression_rule(parse_uint(rest.substr(0, second), text),
                                parse_uint(rest.substr(second + 1), text));
    }
    throw DomainError("unknown hypothesis family '" + std::string(tag) + "'");
}

} // namespace primeboost
