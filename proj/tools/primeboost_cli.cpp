// Command-line front end for the primeboost library.
//
// Every subcommand writes its artifact (CSV or JSON) to --output or stdout;
// diagnostics go to stderr. Exit status: 0 success, 1 domain error, 2 usage.

#include "primeboost/adaboost.hpp"
#include "primeboost/erm.hpp"
#include "primeboost/errors.hpp"
#include "primeboost/experiments.hpp"
#include "primeboost/format.hpp"
#include "primeboost/primes.hpp"
#include "primeboost/shattering.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace primeboost;
using nlohmann::json;

namespace {

struct OutputOptions {
    std::string path;
    std::string format = "json";
};

void add_output_options(CLI::App* cmd, OutputOptions& out, const std::string& default_format)
{
    out.format = default_format;
    cmd->add_option("--output", out.path, "Write the artifact here instead of stdout");
    cmd->add_option("--format", out.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
}

void emit(const OutputOptions& out, const std::string& body)
{
    if (out.path.empty()) {
        std::cout << body;
        std::cout.flush();
        return;
    }
    std::ofstream file(out.path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open '" + out.path + "' for writing");
    file << body;
    if (!file) throw std::runtime_error("write to '" + out.path + "' failed");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) throw CLI::ValidationError("empty element in list '" + text + "'");
        out.push_back(item);
    }
    return out;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& text)
{
    std::vector<std::uint64_t> out;
    for (const auto& item : split_list(text)) {
        std::size_t pos = 0;
        std::uint64_t v = 0;
        try {
            v = std::stoull(item, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != item.size() || item.front() == '-') throw CLI::ValidationError("not an integer: '" + item + "'");
        out.push_back(v);
    }
    return out;
}

// Smallest sieve that holds `count` primes.
PrimeTable table_with_primes(std::size_t count)
{
    std::uint64_t limit = 100;
    while (true) {
        PrimeTable t(limit);
        if (t.primes().size() >= count) return t;
        limit *= 2;
    }
}

// ---- sieve ---------------------------------------------------------------

struct SieveArgs {
    std::uint64_t limit = 0;
    OutputOptions out;
};

void run_sieve(const SieveArgs& a)
{
    const auto table = build_prime_table(a.limit);
    if (a.out.format == "csv") {
        std::ostringstream os;
        os << "index,prime\n";
        for (std::size_t i = 0; i < table.primes().size(); ++i) os << i + 1 << ',' << table.primes()[i] << '\n';
        emit(a.out, os.str());
        return;
    }
    json j{{"limit", table.limit()},
           {"prime_count", table.primes().size()},
           {"primes", std::vector<std::uint64_t>(table.primes().begin(), table.primes().end())}};
    emit(a.out, dump(j));
}

// ---- shatter-construct ---------------------------------------------------

struct ConstructArgs {
    std::size_t ell = 0;
    std::size_t max_ell = 8;
    OutputOptions out;
};

void run_shatter_construct(const ConstructArgs& a)
{
    if (a.ell == 0 || a.ell > a.max_ell) {
        throw CapacityError("--ell must be in [1, " + std::to_string(a.max_ell) + "]");
    }
    const auto table = table_with_primes(std::size_t{1} << a.ell);
    const auto set = construct_shatter_set(a.ell, table, a.max_ell);
    if (a.out.format == "csv") {
        std::ostringstream os;
        os << "i,c_i\n";
        for (std::size_t i = 0; i < set.size(); ++i) os << i + 1 << ',' << to_decimal(set[i]) << '\n';
        emit(a.out, os.str());
        return;
    }
    const auto checked = check_shatter(set, prime_rule_class_first(std::size_t{1} << a.ell, table));
    json j{{"ell", a.ell}, {"shattered", checked.shattered()}};
    j["candidate_set"] = json::array();
    for (const auto& c : set) j["candidate_set"].push_back(to_decimal(c));
    if (checked.shattered()) {
        j["certificate"] = to_json(*checked.certificate);
        const auto report = validate_certificate_prime_structure(*checked.certificate, table);
        j["prime_structure"] = {{"witness_product_divides", report.witness_product_divides},
                                {"exceeds_witness_primes", report.exceeds_witness_primes},
                                {"enough_distinct_primes", report.enough_distinct_primes},
                                {"distinct_prime_factors", report.distinct_prime_factors}};
    }
    emit(a.out, dump(j));
}

// ---- shatter-check -------------------------------------------------------

struct CheckArgs {
    std::string set;
    std::string cls = "primes";
    std::uint64_t max_prime = 100;
    std::uint64_t max_d = 100;
    std::uint64_t k = 2;
    bool all_realizers = false;
    OutputOptions out;
};

void run_shatter_check(const CheckArgs& a)
{
    std::vector<BigInt> set;
    for (const auto& item : split_list(a.set)) {
        BigInt v;
        if (v.set_str(item, 10) != 0) throw CLI::ValidationError("not an integer: '" + item + "'");
        set.push_back(v);
    }
    const auto table = build_prime_table(std::max<std::uint64_t>({2, a.max_prime, a.max_d}));
    std::vector<Hypothesis> cls;
    if (a.cls == "primes") {
        cls = prime_rule_class_upto(a.max_prime, table);
    } else if (a.cls == "divisors") {
        for (std::uint64_t d = 2; d <= a.max_d; ++d) cls.emplace_back(DivisorRule{d});
    } else {
        for (std::uint64_t d = 2; d <= a.max_d; ++d) cls.emplace_back(progression_rule(d, a.k));
    }
    const auto result = check_shatter(set, cls, {.keep_all_realizers = a.all_realizers});
    const std::size_t total = std::size_t{1} << set.size();

    if (a.out.format == "csv") {
        std::ostringstream os;
        os << "dichotomy,hypothesis\n";
        if (result.shattered()) {
            const auto& cert = *result.certificate;
            for (Dichotomy code = 0; code < total; ++code) {
                os << dichotomy_string(code, set.size()) << ',' << to_string(cert.witnesses[code]) << '\n';
            }
        } else {
            os << dichotomy_string(*result.missing, set.size()) << ",missing\n";
        }
        emit(a.out, os.str());
        return;
    }
    json j{{"shattered", result.shattered()}, {"realized", result.realized}, {"total", total}};
    if (result.shattered()) {
        j["certificate"] = to_json(*result.certificate);
    } else {
        j["missing"] = dichotomy_string(*result.missing, set.size());
    }
    emit(a.out, dump(j));
}

// ---- vc-bounds / vc-certify ----------------------------------------------

struct BoundsArgs {
    std::uint64_t k = 2;
    OutputOptions out;
};

void run_vc_bounds(const BoundsArgs& a)
{
    const auto b = progression_vc_bounds(a.k);
    if (a.out.format == "csv") {
        std::ostringstream os;
        os << "k,eta,lower,upper,lower_clamped\n"
           << a.k << ',' << b.eta << ',' << b.lower << ',' << b.upper << ',' << (b.lower_clamped ? 1 : 0) << '\n';
        emit(a.out, os.str());
        return;
    }
    emit(a.out, dump(json{{"k", a.k}, {"eta", b.eta}, {"lower", b.lower}, {"upper", b.upper},
                          {"lower_clamped", b.lower_clamped}}));
}

struct CertifyArgs {
    std::uint64_t k = 2;
    std::uint64_t domain_bound = 200;
    bool prime_only = false;
    std::uint64_t budget = 50'000'000;
    OutputOptions out;
};

void run_vc_certify(const CertifyArgs& a)
{
    const auto table = build_prime_table(std::max<std::uint64_t>(a.domain_bound, 2));
    const auto r = certified_vc_progression(a.k, a.domain_bound, table, {.prime_only = a.prime_only, .budget = a.budget});
    const auto dim = r.dimension();
    if (a.out.format == "csv") {
        std::ostringstream os;
        os << "k,domain_bound,prime_only,lower,upper,status,dimension,sets_examined\n"
           << a.k << ',' << a.domain_bound << ',' << (a.prime_only ? 1 : 0) << ',' << r.lower << ',' << r.upper << ','
           << to_string(r.status) << ',' << (dim ? std::to_string(*dim) : std::string{}) << ',' << r.sets_examined
           << '\n';
        emit(a.out, os.str());
        return;
    }
    json j{{"k", a.k},         {"domain_bound", a.domain_bound},   {"prime_only", a.prime_only},
           {"lower", r.lower}, {"upper", r.upper},                 {"status", to_string(r.status)},
           {"dimension", dim ? json(*dim) : json(nullptr)},        {"sets_examined", r.sets_examined}};
    if (r.certificate) j["certificate"] = to_json(*r.certificate);
    emit(a.out, dump(j));
}

// ---- erm / boost ---------------------------------------------------------

struct SampleArgs {
    std::string instances;
    std::string weights;
    std::optional<std::uint64_t> n;
    std::optional<std::size_t> m;
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
    std::string cls = "divisors";
};

void add_sample_options(CLI::App* cmd, SampleArgs& s)
{
    auto* inst = cmd->add_option("--instances", s.instances, "Comma-separated sample instances");
    auto* n = cmd->add_option("--n", s.n, "Draw a uniform sample from {2..n}");
    cmd->add_option("--m", s.m, "Sample size for --n")->needs(n);
    n->needs("--m");
    inst->excludes(n);
    cmd->add_option("--weights", s.weights, "Comma-separated weights (a/b for exact rationals)")->needs(inst);
    cmd->add_option("--seed", s.seed, "Seed for --n sampling")->capture_default_str();
    cmd->add_option("--trial", s.trial, "Trial index (substream) for --n sampling")->capture_default_str();
}

BaseClass base_class(const std::string& name) { return name == "primes" ? BaseClass::primes : BaseClass::divisors; }

std::vector<std::uint64_t> sample_instances(const SampleArgs& s)
{
    if (!s.instances.empty()) return parse_u64_list(s.instances);
    if (!s.n) throw CLI::ValidationError("either --instances or --n/--m is required");
    auto rng = trial_stream(s.seed, *s.n, s.trial);
    std::vector<std::uint64_t> xs(*s.m);
    for (auto& x : xs) x = draw_uniform(*s.n, rng);
    return xs;
}

std::uint64_t domain_of(const SampleArgs& s, const std::vector<std::uint64_t>& xs)
{
    if (s.n) return *s.n;
    return xs.empty() ? 2 : std::max<std::uint64_t>(2, *std::max_element(xs.begin(), xs.end()));
}

template <class W>
json erm_json(const BasicSample<W>& sample, const PrimeTable& table, BaseClass base, std::optional<std::uint64_t> n)
{
    const auto choice = erm_select(sample, table, base);
    json j{{"d_S", choice.divisor}};
    if constexpr (std::is_same_v<W, Rational>) {
        j["coverage"] = choice.coverage.str();
        j["risk"] = choice.risk.str();
        j["composite_weight"] = composite_weight(sample).str();
    } else {
        j["coverage"] = choice.coverage;
        j["risk"] = choice.risk;
        j["composite_weight"] = composite_weight(sample);
    }
    if (n) {
        const auto l = exact_generalization_error(DivisorRule{choice.divisor}, *n, table);
        j["L_gen"] = l.str();
        j["L_gen_float"] = l.to_double();
    }
    return j;
}

struct ErmArgs {
    SampleArgs sample;
    OutputOptions out;
};

void run_erm(const ErmArgs& a)
{
    const auto xs = sample_instances(a.sample);
    const auto table = build_prime_table(domain_of(a.sample, xs));
    const auto base = base_class(a.sample.cls);
    json j;
    std::string sample_csv;
    const auto names = a.sample.weights.empty() ? std::vector<std::string>{} : split_list(a.sample.weights);
    const bool floats = std::any_of(names.begin(), names.end(), [](const std::string& w) {
        return w.find_first_of(".eE") != std::string::npos;
    });
    if (floats) {
        std::vector<double> w;
        for (const auto& text : names) w.push_back(parse_double(text));
        const auto s = make_sample<double>(xs, w, table);
        j = erm_json(s, table, base, a.sample.n);
    } else {
        ExactSample s;
        if (names.empty()) {
            s = make_uniform_sample<Rational>(xs, table);
        } else {
            std::vector<Rational> w;
            for (const auto& text : names) {
                const auto slash = text.find('/');
                const auto num = std::stoll(text.substr(0, slash));
                const auto den = slash == std::string::npos ? 1 : std::stoll(text.substr(slash + 1));
                w.emplace_back(num, den);
            }
            s = make_sample(xs, w, table);
        }
        j = erm_json(s, table, base, a.sample.n);
    }
    if (a.out.format == "csv") {
        std::ostringstream os;
        auto text = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
        os << "d_S,coverage,risk,composite_weight\n"
           << j["d_S"].get<std::uint64_t>() << ',' << text(j["coverage"]) << ',' << text(j["risk"]) << ','
           << text(j["composite_weight"]) << '\n';
        emit(a.out, os.str());
        return;
    }
    emit(a.out, dump(j));
}

struct BoostArgs {
    SampleArgs sample;
    std::size_t rounds = 5;
    double eps_floor = 1e-12;
    OutputOptions out;
};

void run_boost(const BoostArgs& a)
{
    const auto xs = sample_instances(a.sample);
    const auto n = domain_of(a.sample, xs);
    const auto table = build_prime_table(n);
    const auto sample = make_uniform_sample<double>(xs, table);
    const auto trace = run_adaboost(sample, a.rounds, table, {.eps_floor = a.eps_floor, .base = base_class(a.sample.cls)});
    if (a.out.format == "csv") {
        std::ostringstream os;
        write_trace_csv_header(os);
        write_trace_csv(os, trace, a.sample.trial, n, sample.size());
        emit(a.out, os.str());
        return;
    }
    json j{{"n", n}, {"m", sample.size()}, {"status", to_string(trace.status)}, {"rounds", json::array()}};
    for (const auto& r : trace.rounds) {
        j["rounds"].push_back({{"t", r.t}, {"d_t", r.divisor}, {"eps_t", r.error}, {"W_t", r.weight}, {"clamped", r.clamped}});
    }
    if (a.sample.n) j["acc_strong"] = strong_accuracy(trace, n, table).to_double();
    emit(a.out, dump(j));
}

// ---- experiment ----------------------------------------------------------

struct ExperimentArgs {
    std::string config;
    std::string kind = "both";
    std::size_t workers = 1;
    std::optional<std::uint64_t> seed;
    OutputOptions out;
};

void run_experiment(const ExperimentArgs& a)
{
    std::ifstream in(a.config);
    if (!in) throw std::runtime_error("cannot read config '" + a.config + "'");
    json raw;
    try {
        raw = json::parse(in);
    } catch (const json::exception& e) {
        throw DomainError("config '" + a.config + "' is not valid JSON: " + e.what());
    }
    auto config = config_from_json(raw);
    if (a.seed) config.seed = *a.seed;

    const auto table = build_prime_table(config.max_n());
    const RunOptions options{.workers = a.workers};
    std::vector<TrialRecord> records;
    if (a.kind != "boost") records = run_erm_convergence(config, table, options);
    if (a.kind != "erm") {
        auto boosted = run_weight_convergence(config, table, options);
        records.insert(records.end(), std::make_move_iterator(boosted.begin()), std::make_move_iterator(boosted.end()));
    }

    if (a.out.format == "csv") {
        std::ostringstream os;
        write_csv(os, records);
        emit(a.out, os.str());
        return;
    }
    json j{{"config", to_json(config)}, {"records", json::array()}, {"summary", json::array()}};
    for (const auto& r : records) j["records"].push_back(to_json(r));
    std::vector<TrialRecord> erm_only;
    std::copy_if(records.begin(), records.end(), std::back_inserter(erm_only),
                 [](const TrialRecord& r) { return r.kind == ExperimentKind::erm; });
    for (const auto& s : summarize_erm(erm_only, table)) {
        j["summary"].push_back({{"n", s.n}, {"m", s.m}, {"trials", s.trials}, {"mean_L", s.mean_L},
                                {"median_L", s.median_L}, {"freq_dS_ne_2", s.freq_dS_ne_2}, {"hoeffding", s.hoeffding}});
    }
    emit(a.out, dump(j));
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Prime-divisibility hypothesis classes: shattering, ERM, AdaBoost and convergence experiments"};
    app.require_subcommand(1);

    SieveArgs sieve;
    auto* sieve_cmd = app.add_subcommand("sieve", "List primes up to a limit");
    sieve_cmd->add_option("--limit", sieve.limit, "Sieve bound (>= 2)")->required();
    add_output_options(sieve_cmd, sieve.out, "json");

    ConstructArgs construct;
    auto* construct_cmd = app.add_subcommand("shatter-construct", "Build a set shattered by the first 2^ell prime rules");
    construct_cmd->add_option("--ell", construct.ell, "Set size")->required();
    construct_cmd->add_option("--max-ell", construct.max_ell, "Size cap")->capture_default_str();
    add_output_options(construct_cmd, construct.out, "json");

    CheckArgs check;
    auto* check_cmd = app.add_subcommand("shatter-check", "Check whether a hypothesis class shatters a set");
    check_cmd->add_option("--set", check.set, "Comma-separated candidate integers")->required();
    check_cmd->add_option("--class", check.cls, "Hypothesis family")
        ->check(CLI::IsMember({"primes", "divisors", "progression"}))
        ->capture_default_str();
    check_cmd->add_option("--max-prime", check.max_prime, "Largest p for --class primes")->capture_default_str();
    check_cmd->add_option("--max-d", check.max_d, "Largest d for divisors/progression")->capture_default_str();
    check_cmd->add_option("--k", check.k, "Progression length for --class progression")->capture_default_str();
    check_cmd->add_flag("--all-realizers", check.all_realizers, "List every realizer of each dichotomy");
    add_output_options(check_cmd, check.out, "json");

    BoundsArgs bounds;
    auto* bounds_cmd = app.add_subcommand("vc-bounds", "VC-dimension bounds for the progression classes");
    bounds_cmd->add_option("--k", bounds.k, "Progression length (>= 2)")->required();
    add_output_options(bounds_cmd, bounds.out, "json");

    CertifyArgs certify;
    auto* certify_cmd = app.add_subcommand("vc-certify", "Search-certified VC dimension of a progression class");
    certify_cmd->add_option("--k", certify.k, "Progression length (>= 2)")->required();
    certify_cmd->add_option("--domain-bound", certify.domain_bound, "Largest candidate element")->capture_default_str();
    certify_cmd->add_flag("--prime-only", certify.prime_only, "Restrict divisors to primes");
    certify_cmd->add_option("--budget", certify.budget, "Maximum candidate sets examined")->capture_default_str();
    add_output_options(certify_cmd, certify.out, "json");

    ErmArgs erm;
    auto* erm_cmd = app.add_subcommand("erm", "Select the ERM divisor for a weighted sample");
    add_sample_options(erm_cmd, erm.sample);
    erm_cmd->add_option("--class", erm.sample.cls, "Base class")
        ->check(CLI::IsMember({"primes", "divisors"}))
        ->capture_default_str();
    add_output_options(erm_cmd, erm.out, "json");

    BoostArgs boost;
    boost.sample.cls = "primes";
    auto* boost_cmd = app.add_subcommand("boost", "Run AdaBoost over the prime rules");
    add_sample_options(boost_cmd, boost.sample);
    boost_cmd->add_option("--class", boost.sample.cls, "Base class")
        ->check(CLI::IsMember({"primes", "divisors"}))
        ->capture_default_str();
    boost_cmd->add_option("--rounds", boost.rounds, "Number of rounds T")->capture_default_str()->check(CLI::PositiveNumber);
    boost_cmd->add_option("--eps-floor", boost.eps_floor, "Error clamp")->capture_default_str();
    add_output_options(boost_cmd, boost.out, "json");

    ExperimentArgs experiment;
    auto* experiment_cmd = app.add_subcommand("experiment", "Run the seeded convergence experiments");
    experiment_cmd->add_option("--config", experiment.config, "JSON experiment config")->required();
    experiment_cmd->add_option("--kind", experiment.kind, "Which experiment")
        ->check(CLI::IsMember({"erm", "boost", "both"}))
        ->capture_default_str();
    experiment_cmd->add_option("--workers", experiment.workers, "Parallel workers")->capture_default_str()->check(CLI::PositiveNumber);
    experiment_cmd->add_option("--seed", experiment.seed, "Override the config seed");
    add_output_options(experiment_cmd, experiment.out, "csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        (void)app.exit(e);
        return 2;
    }

    try {
        if (*sieve_cmd) run_sieve(sieve);
        else if (*construct_cmd) run_shatter_construct(construct);
        else if (*check_cmd) run_shatter_check(check);
        else if (*bounds_cmd) run_vc_bounds(bounds);
        else if (*certify_cmd) run_vc_certify(certify);
        else if (*erm_cmd) run_erm(erm);
        else if (*boost_cmd) run_boost(boost);
        else if (*experiment_cmd) run_experiment(experiment);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
