#include "primeboost/experiments.hpp"

#include "primeboost/errors.hpp"
#include "primeboost/format.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

namespace primeboost {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Runs job(i) for i in [0, count) on up to `workers` threads. Each job
// writes only its own output slot.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& job) {
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        job(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

struct Cell {
    std::uint64_t n;
    std::size_t m;
    std::size_t trial;
};

std::vector<Cell> cells(const ExperimentConfig& config) {
    std::vector<Cell> out;
    for (auto n : config.n_grid) {
        const auto m = config.m_rule.sample_size(n);
        for (std::size_t trial = 0; trial < config.trials; ++trial) out.push_back({n, m, trial});
    }
    return out;
}

void prepare(const ExperimentConfig& config, const PrimeTable& table) {
    config.validate();
    if (config.max_n() > table.limit()) {
        throw RangeError("largest grid point " + std::to_string(config.max_n()) + " exceeds sieve limit " +
                         std::to_string(table.limit()));
    }
}

TrialRecord erm_trial(const Cell& cell, const ExperimentConfig& config, const PrimeTable& table) {
    auto rng = trial_stream(config.seed, cell.n, cell.trial);
    const auto sample = sample_uniform<Rational>(cell.n, cell.m, rng, table);
    TrialRecord rec;
    rec.kind = ExperimentKind::erm;
    rec.n = cell.n;
    rec.m = cell.m;
    rec.trial = cell.trial;
    rec.d_S = erm_select(sample, table, config.base).divisor;
    rec.L_gen = exact_generalization_error(DivisorRule{rec.d_S}, cell.n, table);
    return rec;
}

std::string optional_text(const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; }

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::uint64_t to_u64(const std::string& s) {
    std::size_t pos = 0;
    const auto v = std::stoull(s, &pos);
    if (pos != s.size()) throw DomainError("bad integer field '" + s + "'");
    return v;
}

std::int64_t to_i64(const std::string& s) {
    std::size_t pos = 0;
    const auto v = std::stoll(s, &pos);
    if (pos != s.size()) throw DomainError("bad integer field '" + s + "'");
    return v;
}

} // namespace

std::size_t SampleSizeRule::sample_size(std::uint64_t n) const {
    const long double log_n = std::log(static_cast<long double>(n));
    return static_cast<std::size_t>(std::ceil(coefficient * std::pow(log_n, exponent)));
}

void ExperimentConfig::validate() const {
    if (n_grid.empty()) throw DomainError("n_grid is empty");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 4) throw DomainError("every grid point must be >= 4, got " + std::to_string(n_grid[i]));
        if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw DomainError("n_grid must be strictly ascending");
    }
    if (m_rule.exponent != 2 && m_rule.exponent != 3) throw DomainError("m_rule exponent must be 2 or 3");
    if (!(m_rule.coefficient > 0.0)) throw DomainError("m_rule coefficient must be positive");
    if (trials == 0) throw DomainError("trials must be at least 1");
    if (rounds == 0) throw DomainError("rounds must be at least 1");
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    try {
        c.n_grid = j.at("n_grid").get<std::vector<std::uint64_t>>();
        c.m_rule.coefficient = j.at("m_rule").at("coefficient").get<double>();
        c.m_rule.exponent = j.at("m_rule").at("exponent").get<int>();
        c.trials = j.at("trials").get<std::size_t>();
        c.rounds = j.at("rounds").get<std::size_t>();
        c.seed = j.value("seed", std::uint64_t{0});
        const auto cls = j.at("hypothesis_class").get<std::string>();
        if (cls == "primes") {
            c.base = BaseClass::primes;
        } else if (cls == "divisors") {
            c.base = BaseClass::divisors;
        } else {
            throw DomainError("hypothesis_class must be 'primes' or 'divisors', got '" + cls + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("bad experiment config: ") + e.what());
    }
    c.validate();
    return c;
}

nlohmann::json to_json(const ExperimentConfig& config) {
    return {
        {"n_grid", config.n_grid},
        {"m_rule", {{"coefficient", config.m_rule.coefficient}, {"exponent", config.m_rule.exponent}}},
        {"trials", config.trials},
        {"rounds", config.rounds},
        {"seed", config.seed},
        {"hypothesis_class", config.base == BaseClass::primes ? "primes" : "divisors"},
    };
}

std::mt19937_64 trial_stream(std::uint64_t seed, std::uint64_t n, std::uint64_t trial) {
    std::uint64_t state = seed;
    std::uint64_t key = splitmix64(state);
    state = key ^ n;
    key = splitmix64(state);
    state = key ^ trial;
    return std::mt19937_64(splitmix64(state));
}

std::uint64_t draw_uniform(std::uint64_t n, std::mt19937_64& rng) {
    if (n < 2) throw DomainError("uniform draw needs n >= 2");
    const unsigned __int128 span = n - 1;  // size of {2, ..., n}
    return 2 + static_cast<std::uint64_t>((static_cast<unsigned __int128>(rng()) * span) >> 64);
}

template <class W>
BasicSample<W> sample_uniform(std::uint64_t n, std::size_t m, std::mt19937_64& rng, const PrimeTable& table) {
    if (n > table.limit()) {
        throw RangeError("domain bound " + std::to_string(n) + " exceeds sieve limit " + std::to_string(table.limit()));
    }
    if (m == 0) throw DomainError("sample size must be positive");
    std::vector<std::uint64_t> xs(m);
    for (auto& x : xs) x = draw_uniform(n, rng);
    return make_uniform_sample<W>(std::move(xs), table);
}

template BasicSample<double> sample_uniform<double>(std::uint64_t, std::size_t, std::mt19937_64&, const PrimeTable&);
template BasicSample<Rational> sample_uniform<Rational>(std::uint64_t, std::size_t, std::mt19937_64&,
                                                        const PrimeTable&);

Rational mu_n(std::uint64_t n, const PrimeTable& table) {
    const auto t = static_cast<std::int64_t>(even_count(n));
    const auto pi = static_cast<std::int64_t>(table.prime_count(n));
    const auto den = static_cast<std::int64_t>(n - 1);
    return Rational(2 * (t - 1) + pi, den) - Rational(1);
}

double hoeffding_bound(std::uint64_t n, std::size_t m, const PrimeTable& table) {
    const Rational mu = mu_n(n, table);
    if (mu <= Rational(0)) return 1.0;
    const double x = mu.to_double();
    return std::exp(-static_cast<double>(m) * x * x / 2.0);
}

Rational h2_deviation_bound(std::uint64_t n, const PrimeTable& table) {
    const auto pi = static_cast<std::int64_t>(table.prime_count(n));
    return (Rational(3, 2) + Rational(pi)) / Rational(static_cast<std::int64_t>(n - 1));
}

Rational strong_accuracy(const BoostTrace& trace, std::uint64_t n, const PrimeTable& table) {
    if (trace.rounds.empty()) throw DomainError("strong classifier needs at least one round");
    if (n > table.limit()) throw RangeError("accuracy domain exceeds sieve limit");
    std::int64_t correct = 0;
    for (std::uint64_t x = 2; x <= n; ++x) {
        double vote = 0.0;
        for (const auto& r : trace.rounds) {
            vote += (x > r.divisor && x % r.divisor == 0) ? -r.weight : r.weight;
        }
        const int predicted = vote < 0.0 ? -1 : 1;
        const int truth = table.is_prime(x) ? 1 : -1;
        if (predicted == truth) ++correct;
    }
    return Rational(correct, static_cast<std::int64_t>(n - 1));
}

std::string to_string(ExperimentKind kind) { return kind == ExperimentKind::erm ? "erm" : "boost"; }

bool operator==(const BoostRound& a, const BoostRound& b) {
    return a.t == b.t && a.divisor == b.divisor && a.error == b.error && a.weight == b.weight;
}

bool operator==(const TrialRecord& a, const TrialRecord& b) {
    return a.kind == b.kind && a.n == b.n && a.m == b.m && a.trial == b.trial && a.d_S == b.d_S &&
           a.L_gen == b.L_gen && a.rounds == b.rounds && a.status == b.status && a.acc_strong == b.acc_strong &&
           a.acc_baseline == b.acc_baseline;
}

std::vector<TrialRecord> run_erm_convergence(const ExperimentConfig& config, const PrimeTable& table,
                                             const RunOptions& options) {
    prepare(config, table);
    const auto grid = cells(config);
    std::vector<TrialRecord> out(grid.size());
    parallel_for(grid.size(), options.workers, [&](std::size_t i) { out[i] = erm_trial(grid[i], config, table); });
    return out;
}

std::vector<TrialRecord> run_weight_convergence(const ExperimentConfig& config, const PrimeTable& table,
                                                const RunOptions& options) {
    prepare(config, table);
    const auto grid = cells(config);
    std::map<std::uint64_t, double> baseline;
    for (auto n : config.n_grid) {
        baseline[n] = (Rational(1) - exact_generalization_error(DivisorRule{2}, n, table)).to_double();
    }
    std::vector<TrialRecord> out(grid.size());
    parallel_for(grid.size(), options.workers, [&](std::size_t i) {
        const Cell& cell = grid[i];
        TrialRecord rec = erm_trial(cell, config, table);
        rec.kind = ExperimentKind::boost;
        auto rng = trial_stream(config.seed, cell.n, cell.trial);
        const auto sample = sample_uniform<double>(cell.n, cell.m, rng, table);
        const auto trace = run_adaboost(sample, config.rounds, table, BoostOptions{.base = config.base});
        rec.rounds = trace.rounds;
        rec.status = trace.status;
        rec.acc_strong = strong_accuracy(trace, cell.n, table).to_double();
        rec.acc_baseline = baseline.at(cell.n);
        out[i] = std::move(rec);
    });
    return out;
}

std::vector<ErmSummary> summarize_erm(const std::vector<TrialRecord>& records, const PrimeTable& table) {
    std::map<std::uint64_t, std::vector<const TrialRecord*>> by_n;
    for (const auto& r : records) by_n[r.n].push_back(&r);
    std::vector<ErmSummary> out;
    for (const auto& [n, group] : by_n) {
        ErmSummary s;
        s.n = n;
        s.m = group.front()->m;
        s.trials = group.size();
        std::vector<double> losses;
        std::size_t ne2 = 0;
        for (const auto* r : group) {
            losses.push_back(r->L_gen.to_double());
            if (r->dS_ne_2()) ++ne2;
        }
        double sum = 0.0;
        for (double l : losses) sum += l;
        s.mean_L = sum / static_cast<double>(losses.size());
        std::sort(losses.begin(), losses.end());
        const std::size_t mid = losses.size() / 2;
        s.median_L = losses.size() % 2 ? losses[mid] : 0.5 * (losses[mid - 1] + losses[mid]);
        s.freq_dS_ne_2 = static_cast<double>(ne2) / static_cast<double>(group.size());
        s.hoeffding = hoeffding_bound(n, s.m, table);
        out.push_back(s);
    }
    return out;
}

bool error_sandwich_holds(const std::vector<BoostRound>& rounds, double relative_slack) {
    if (rounds.empty()) return true;
    const double eps1 = rounds.front().error;
    double total = 0.0;
    for (std::size_t t = 1; t < rounds.size(); ++t) {
        total += std::abs(rounds[t - 1].weight);
        const double lo = std::exp(-2.0 * total) * eps1;
        const double hi = std::exp(2.0 * total) * eps1;
        const double eps = rounds[t].error;
        if (eps < lo * (1.0 - relative_slack) || eps > hi * (1.0 + relative_slack)) return false;
    }
    return true;
}

bool error_sandwich_holds(const BoostTrace& trace, double relative_slack) {
    return error_sandwich_holds(trace.rounds, relative_slack);
}

void write_csv(std::ostream& os, std::vector<TrialRecord> records) {
    std::stable_sort(records.begin(), records.end(), [](const TrialRecord& a, const TrialRecord& b) {
        return std::tie(a.n, a.trial, a.kind) < std::tie(b.n, b.trial, b.kind);
    });
    os << kCsvHeader << '\n';
    for (const auto& r : records) {
        const std::string common_head = to_string(r.kind) + ',' + std::to_string(r.n) + ',' + std::to_string(r.m) +
                                        ',' + std::to_string(r.trial) + ',';
        std::ostringstream tail;
        tail << r.d_S << ',' << r.L_gen.num() << ',' << r.L_gen.den() << ',' << format_double(r.L_gen.to_double())
             << ',' << (r.dS_ne_2() ? 1 : 0) << ',' << optional_text(r.acc_strong) << ','
             << optional_text(r.acc_baseline) << ',' << to_string(r.status);
        if (r.kind == ExperimentKind::erm) {
            os << common_head << ",,,," << tail.str() << '\n';
            continue;
        }
        for (const auto& round : r.rounds) {
            os << common_head << round.t << ',' << round.divisor << ',' << format_double(round.error) << ','
               << format_double(round.weight) << ',' << tail.str() << '\n';
        }
    }
}

void write_csv(const std::filesystem::path& path, std::vector<TrialRecord> records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    write_csv(out, std::move(records));
    out.flush();
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::vector<TrialRecord> read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader) throw DomainError("missing or unexpected CSV header");
    std::vector<TrialRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 16) throw DomainError("CSV row with " + std::to_string(f.size()) + " fields: " + line);
        TrialRecord rec;
        if (f[0] == "erm") {
            rec.kind = ExperimentKind::erm;
        } else if (f[0] == "boost") {
            rec.kind = ExperimentKind::boost;
        } else {
            throw DomainError("unknown experiment '" + f[0] + "'");
        }
        rec.n = to_u64(f[1]);
        rec.m = to_u64(f[2]);
        rec.trial = to_u64(f[3]);
        rec.d_S = to_u64(f[8]);
        rec.L_gen = Rational(to_i64(f[9]), to_i64(f[10]));
        if (!f[13].empty()) rec.acc_strong = parse_double(f[13]);
        if (!f[14].empty()) rec.acc_baseline = parse_double(f[14]);
        rec.status = parse_boost_status(f[15]);

        const bool continues = rec.kind == ExperimentKind::boost && !out.empty() &&
                               out.back().kind == rec.kind && out.back().n == rec.n && out.back().trial == rec.trial;
        if (!continues) out.push_back(rec);
        if (rec.kind == ExperimentKind::boost) {
            BoostRound round;
            round.t = to_u64(f[4]);
            round.divisor = to_u64(f[5]);
            round.error = parse_double(f[6]);
            round.weight = parse_double(f[7]);
            out.back().rounds.push_back(round);
        }
    }
    return out;
}

nlohmann::json to_json(const TrialRecord& r) {
    nlohmann::json j{
        {"experiment", to_string(r.kind)},
        {"n", r.n},
        {"m", r.m},
        {"trial", r.trial},
        {"d_S", r.d_S},
        {"L_gen_num", r.L_gen.num()},
        {"L_gen_den", r.L_gen.den()},
        {"L_gen_float", r.L_gen.to_double()},
        {"dS_ne_2", r.dS_ne_2()},
        {"status", to_string(r.status)},
    };
    if (r.kind == ExperimentKind::boost) {
        j["rounds"] = nlohmann::json::array();
        for (const auto& round : r.rounds) {
            j["rounds"].push_back({{"t", round.t}, {"d_t", round.divisor}, {"eps_t", round.error},
                                   {"W_t", round.weight}, {"clamped", round.clamped}});
        }
    }
    if (r.acc_strong) j["acc_strong"] = *r.acc_strong;
    if (r.acc_baseline) j["acc_baseline"] = *r.acc_baseline;
    return j;
}

} // namespace primeboost
