#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "tensorcommit/select/interval_dp.hpp"
#include "tensorcommit/select/profile.hpp"

namespace fs = std::filesystem;
using namespace tensorcommit;

namespace {

struct run_result {
    int code = -1;
    std::string out;
};

run_result run(const std::string& args)
{
    const std::string cmd = std::string(TC_CLI) + " " + args + " 2>/dev/null";
    run_result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    for (std::size_t n; (n = fread(buf.data(), 1, buf.size(), pipe)) > 0;) r.out.append(buf.data(), n);
    const int st = pclose(pipe);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string data(const std::string& name) { return std::string(TC_DATA) + "/" + name; }

std::string slurp(const fs::path& p)
{
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

std::size_t count_lines(const std::string& s)
{
    std::size_t n = 0;
    for (char ch : s) n += ch == '\n';
    return n;
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir = fs::temp_directory_path() / ("tc_cli_" + std::to_string(::getpid()) + "_" +
                                           ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }
    std::string at(const std::string& name) const { return (dir / name).string(); }
    fs::path dir;
};

}  // namespace

TEST_F(Cli, PipelineAcceptsOnBothBackends)
{
    for (std::string b : {"transparent", "production"}) {
        const std::string be = " --backend " + b;
        ASSERT_EQ(run("setup --shape 2x2x2 --seed 3 --out " + at("srs") + be).code, 0);
        ASSERT_EQ(run("commit --srs " + at("srs") + " --tensor " + data("sample_tensor.txt") + " --out " + at("c") +
                      " --poly-out " + at("f") + be)
                      .code,
                  0);
        ASSERT_EQ(run("open --srs " + at("srs") + " --tensor " + data("sample_tensor.txt") + " --seed 9 --out " +
                      at("op") + be)
                      .code,
                  0);
        auto r = run("verify --srs " + at("srs") + " --commitment " + at("c") + " --opening " + at("op") + be);
        EXPECT_EQ(r.code, 0) << b;
        EXPECT_EQ(r.out, "accept\n");
        EXPECT_EQ(slurp(at("f")).substr(0, 4), "TCPL");
    }
}

TEST_F(Cli, CorruptedOpeningRejects)
{
    ASSERT_EQ(run("setup --shape 2x2x2 --out " + at("srs")).code, 0);
    const std::string t = " --tensor " + data("sample_tensor.txt");
    ASSERT_EQ(run("commit --srs " + at("srs") + t + " --out " + at("c")).code, 0);
    ASSERT_EQ(run("open --srs " + at("srs") + t + " --point 4,5,6 --out " + at("op")).code, 0);
    auto bytes = slurp(at("op"));
    // "TCOP", u16 arity, three point coordinates, then y
    const std::size_t y_at = 4 + 2 + 3 * 32;
    ASSERT_GT(bytes.size(), y_at);
    bytes[y_at] = static_cast<char>(bytes[y_at] ^ 1);
    std::ofstream(at("bad"), std::ios::binary) << bytes;
    auto r = run("verify --srs " + at("srs") + " --commitment " + at("c") + " --opening " + at("bad"));
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.out, "reject\n");
    // honest opening checked against a different point
    EXPECT_EQ(run("verify --srs " + at("srs") + " --commitment " + at("c") + " --opening " + at("op") +
                  " --point 4,5,7")
                  .code,
              1);
}

TEST_F(Cli, MalformedInputExitsTwo)
{
    ASSERT_EQ(run("setup --shape 2x4 --out " + at("srs")).code, 0);
    EXPECT_EQ(run("commit --srs " + at("srs") + " --tensor " + data("sample_tensor.txt") + " --out " + at("c")).code, 2);
    std::ofstream(at("short.txt")) << "2x4\n1 2 3\n";
    EXPECT_EQ(run("commit --srs " + at("srs") + " --tensor " + at("short.txt") + " --out " + at("c")).code, 2);
    std::ofstream(at("junk.txt")) << "2x4\n1 2 x 4 5 6 7 8\n";
    EXPECT_EQ(run("commit --srs " + at("srs") + " --tensor " + at("junk.txt") + " --out " + at("c")).code, 2);
    EXPECT_EQ(run("commit --srs " + data("golden_plan.csv") + " --tensor " + at("junk.txt") + " --out " + at("c")).code,
              2);
    EXPECT_EQ(run("setup --shape 2y2 --out " + at("x")).code, 2);
    EXPECT_EQ(run("setup --shape 2x2 --backend other --out " + at("x")).code, 2);
    EXPECT_EQ(run("select --profile " + data("sample_tensor.txt")).code, 2);
    EXPECT_EQ(run("select --profile " + data("sample_profile.csv") + " --budgets 2,-1").code, 2);
    EXPECT_EQ(run("interp-bench --D 4095 --m 2").code, 2);
    EXPECT_EQ(run("nonsense").code, 2);
    EXPECT_EQ(run("").code, 2);
}

TEST_F(Cli, UnknownFlagExitsTwo)
{
    EXPECT_EQ(run("setup --shape 2x2 --out " + at("srs") + " --frobnicate").code, 2);
    EXPECT_EQ(run("select --profile " + data("sample_profile.csv") + " --bogus 3").code, 2);
    EXPECT_EQ(run("--nope").code, 2);
}

TEST_F(Cli, HelpListsEveryFlag)
{
    auto r = run("--help-all");
    EXPECT_EQ(r.code, 0);
    for (const char* flag : {"--seed", "--backend", "--shape", "--out", "--trials", "--srs", "--tensor", "--commitment",
                             "--opening", "--point", "--domain", "--D", "--m", "--arity", "--n", "--kinds",
                             "--profile", "--budgets", "--attacks", "--policies", "--seeds", "--attacks-per-seed",
                             "--eta", "--epsilon", "--model-seed", "--scale-bits", "--poly-out", "--node-shape"})
        EXPECT_NE(r.out.find(flag), std::string::npos) << flag;
    for (const char* sub : {"setup", "commit", "open", "verify", "interp-bench", "tree-bench", "select", "profile",
                            "attack-sim"})
        EXPECT_NE(r.out.find(sub), std::string::npos) << sub;
}

TEST_F(Cli, SelectReproducesGoldenPlan)
{
    auto r = run("select --profile " + data("sample_profile.csv") + " --budgets 3,2,2");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, slurp(data("golden_plan.csv")));

    // the golden plan is optimal: its total matches exhaustive search
    std::ifstream is(data("sample_profile.csv"));
    const auto profiles = select::read_profiles(is);
    const auto nu = select::profile_benefits(profiles);
    const auto phi = select::profile_costs(profiles);
    const std::vector<double> budgets{3, 2, 2};
    std::istringstream plan(slurp(data("golden_plan.csv")));
    std::string line;
    std::getline(plan, line);
    double total = 0;
    while (std::getline(plan, line)) total += std::stod(line.substr(line.rfind(',') + 1));
    EXPECT_NEAR(total, select::ilp_bruteforce(nu, phi, budgets), 1e-12);
}

TEST_F(Cli, ProfileIsDeterministic)
{
    auto a = run("profile --layers 8 --model-seed 42");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, slurp(data("sample_profile.csv")));
}

TEST_F(Cli, InterpBenchEmitsEighteenRows)
{
    auto r = run("interp-bench --D 4096 --m 1,2,3,4,6,12 --trials 1");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "method,m,per_axis,D,interpolate_ns,eval_ns");
    EXPECT_EQ(count_lines(r.out), 19u);
}

TEST_F(Cli, TreeBenchEmitsEveryKind)
{
    auto r = run("tree-bench --arity 4 --n 16,64 --node-shape 2x2 --trials 2");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(count_lines(r.out), 7u);
    for (const char* k : {"\nmerkle,", "\nverkle,", "\nterkle,"}) EXPECT_NE(r.out.find(k), std::string::npos) << k;
}

TEST_F(Cli, AttackSimEmitsOneRowPerAttack)
{
    auto r = run("attack-sim --seeds 10 --attacks-per-seed 100 --out " + at("a.csv"));
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(count_lines(slurp(at("a.csv"))), 1001u);
}

TEST_F(Cli, SeedDeterminesAttackSim)
{
    const std::string args = "attack-sim --seeds 2 --attacks-per-seed 5 --policies alpha_score,uniform --seed 11";
    auto a = run(args), b = run(args);
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(count_lines(a.out), 1u + 2 * 5 * 2);
}
