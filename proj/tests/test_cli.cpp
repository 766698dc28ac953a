// Runs the built CLI as a subprocess and checks exit codes and artifacts.

#include <gtest/gtest.h>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args)
{
    const std::string cmd = std::string(PRIMEBOOST_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::filesystem::path scratch(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / "primeboost_cli_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

TEST(Cli, ShatterCheckReportsWitnesses)
{
    const auto r = run("shatter-check --set 6,10 --class primes --max-prime 100");
    ASSERT_EQ(r.status, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j["shattered"].get<bool>());
    const auto& w = j["certificate"]["witnesses"];
    ASSERT_EQ(w.size(), 4u);
    EXPECT_EQ(w[0]["hypothesis"], "p:2");
    EXPECT_EQ(w[1]["hypothesis"], "p:3");
    EXPECT_EQ(w[2]["hypothesis"], "p:5");
    EXPECT_EQ(w[3]["hypothesis"], "p:7");
}

TEST(Cli, ShatterCheckFailureStillExitsZero)
{
    const auto r = run("shatter-check --set 3 --class primes --max-prime 50");
    ASSERT_EQ(r.status, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_FALSE(j["shattered"].get<bool>());
    EXPECT_EQ(j["missing"], "0");
}

TEST(Cli, VcBounds)
{
    const auto r = run("vc-bounds --k 3");
    ASSERT_EQ(r.status, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["lower"], 0);
    EXPECT_EQ(j["upper"], 2);
    EXPECT_TRUE(j["lower_clamped"].get<bool>());
}

TEST(Cli, VcCertifySmallK)
{
    const auto r = run("vc-certify --k 2 --domain-bound 40");
    ASSERT_EQ(r.status, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["dimension"], 1);
    EXPECT_EQ(j["status"], "proved");
}

TEST(Cli, ShatterConstructCsv)
{
    const auto r = run("shatter-construct --ell 2 --format csv");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "i,c_i\n1,21\n2,35\n");
}

TEST(Cli, ErmExactWeights)
{
    const auto r = run("erm --instances 4,6,9,7 --weights 1/4,1/4,1/4,1/4");
    ASSERT_EQ(r.status, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["d_S"], 2);
    EXPECT_EQ(j["coverage"], "1/2");
    EXPECT_EQ(j["risk"], "1/4");
}

TEST(Cli, BoostCsvHeader)
{
    const auto r = run("boost --n 1000 --m 50 --rounds 3 --format csv");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(r.out.rfind("trial_id,n,m,t,d_t,eps_t,W_t,status\n", 0), 0u);
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 4);
}

TEST(Cli, UsageErrorsExitTwo)
{
    EXPECT_EQ(run("").status, 2);
    EXPECT_EQ(run("vc-bounds --k 3 --no-such-flag").status, 2);
    EXPECT_EQ(run("vc-bounds").status, 2);
    EXPECT_EQ(run("shatter-check --set 6,10 --class bogus").status, 2);
    EXPECT_EQ(run("erm --n 100").status, 2);
}

TEST(Cli, DomainErrorsExitOne)
{
    EXPECT_EQ(run("sieve --limit 1").status, 1);
    EXPECT_EQ(run("vc-bounds --k 1").status, 1);
    EXPECT_EQ(run("shatter-check --set 1,10").status, 1);
    EXPECT_EQ(run("erm --instances 4,6 --weights 1/2,1/3").status, 1);
    EXPECT_EQ(run("experiment --config /nonexistent/cfg.json").status, 1);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run("--help").status, 0); }

TEST(Cli, ExperimentIsReproducible)
{
    const auto cfg = scratch("small.json");
    {
        std::ofstream out(cfg);
        out << R"({"n_grid":[100,1000],"m_rule":{"coefficient":1,"exponent":2},)"
            << R"("trials":4,"rounds":3,"hypothesis_class":"primes","seed":11})";
    }
    const auto a = scratch("a.csv");
    const auto b = scratch("b.csv");
    ASSERT_EQ(run("experiment --config " + cfg.string() + " --output " + a.string()).status, 0);
    ASSERT_EQ(run("experiment --config " + cfg.string() + " --workers 3 --output " + b.string()).status, 0);
    const auto first = slurp(a);
    EXPECT_FALSE(first.empty());
    EXPECT_EQ(first, slurp(b));
    EXPECT_EQ(first.substr(0, first.find('\n')),
              "experiment,n,m,trial,t,d_t,eps_t,W_t,d_S,L_gen_num,L_gen_den,L_gen_float,dS_ne_2,acc_strong,"
              "acc_baseline,status");

    const auto other = run("experiment --config " + cfg.string() + " --seed 12");
    ASSERT_EQ(other.status, 0);
    EXPECT_NE(other.out, first);
}

TEST(Cli, ExperimentRejectsBadConfig)
{
    const auto cfg = scratch("bad.json");
    {
        std::ofstream out(cfg);
        out << R"({"n_grid":[100],"m_rule":{"coefficient":1,"exponent":4},"trials":1,"rounds":1,"hypothesis_class":"primes"})";
    }
    EXPECT_EQ(run("experiment --config " + cfg.string()).status, 1);
}
