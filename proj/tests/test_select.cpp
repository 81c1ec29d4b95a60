#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <numeric>
#include <cmath>
#include <random>
#include <sstream>

#include "tensorcommit/select/amc.hpp"
#include "tensorcommit/select/hill.hpp"
#include "tensorcommit/select/interval_dp.hpp"
#include "tensorcommit/select/profile.hpp"

using namespace tensorcommit;
using namespace tensorcommit::select;

namespace {

std::vector<double> pareto_spectrum(std::mt19937_64& rng, std::size_t d, double alpha)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> x(d);
    for (auto& v : x) v = std::pow(1.0 - u(rng), -1.0 / (alpha - 1.0));
    std::sort(x.begin(), x.end());
    return x;
}

// Random instance with dyadic benefits so that every partial sum is exact.
struct instance {
    std::vector<double> nu, phi, beta;
};

instance random_instance(std::mt19937_64& rng, std::size_t max_l, std::size_t max_m)
{
    instance in;
    const std::size_t L = 1 + rng() % max_l, M = 1 + rng() % max_m;
    for (std::size_t i = 0; i < L; ++i) {
        in.nu.push_back(static_cast<double>(rng() % 1025) / 1024.0);
        in.phi.push_back(static_cast<double>(1 + rng() % 4));
    }
    for (std::size_t k = 0; k < M; ++k) in.beta.push_back(static_cast<double>(rng() % 13));
    return in;
}

double plan_benefit(const selection_plan& p, const std::vector<double>& nu)
{
    double s = 0;
    for (auto l : p.layers()) s += nu[l - 1];
    return s;
}

}  // namespace

TEST(Hill, HandExample)
{
    std::vector<double> e{1, 2, 4, 8, 16};
    EXPECT_NEAR(hill_alpha(e, 4), 1.0 + 4.0 / (10.0 * std::log(2.0)), 1e-12);
    EXPECT_NEAR(hill_alpha(e, 4), 1.5771, 1e-4);
}

TEST(Hill, Errors)
{
    std::vector<double> flat{1, 3, 3, 3};
    EXPECT_THROW(hill_alpha(flat, 4), domain_error);
    std::vector<double> top_equal{1, 2, 2, 2};
    EXPECT_THROW(hill_alpha(top_equal, 2), domain_error);
    std::vector<double> e{1, 2, 4};
    EXPECT_THROW(hill_alpha(e, 0), domain_error);
    EXPECT_THROW(hill_alpha(e, 3), domain_error);
    std::vector<double> zero_cut{0, 2, 4};
    EXPECT_THROW(hill_alpha(zero_cut, 2), domain_error);
    std::vector<double> unsorted{4, 2, 1};
    EXPECT_THROW(hill_alpha(unsorted, 1), domain_error);
}

TEST(Hill, DefaultTail)
{
    EXPECT_EQ(default_chi(10000), 1000u);
    EXPECT_EQ(default_chi(100000), 1000u);
    EXPECT_EQ(default_chi(64), 7u);
    EXPECT_EQ(default_chi(2), 1u);
}

TEST(Hill, ParetoConsistency)
{
    std::mt19937_64 rng(7);
    int inside = 0;
    for (int t = 0; t < 20; ++t) {
        auto x = pareto_spectrum(rng, 10000, 3.0);
        const double a = hill_alpha(x, 1000);
        inside += std::abs(a - 3.0) <= 0.3;
    }
    EXPECT_GE(inside, 19);
}

TEST(Benefit, Examples)
{
    std::vector<double> a{2, 3, 4}, p{1, 1, 2};
    auto nu = benefit_scores(a, p);
    EXPECT_DOUBLE_EQ(nu[0], 0.25);
    EXPECT_DOUBLE_EQ(nu[1], 0.125);
    EXPECT_DOUBLE_EQ(nu[2], 0.0);

    std::vector<double> a2{1, 5}, p2{3, 3};
    EXPECT_DOUBLE_EQ(benefit_scores(a2, p2)[0], 0.5);
}

TEST(Benefit, EqualAlphasFallBackToSize)
{
    std::vector<double> a{2, 2, 2}, p{1, 1, 2};
    auto nu = benefit_scores(a, p);
    EXPECT_DOUBLE_EQ(nu[0], 0.25);
    EXPECT_DOUBLE_EQ(nu[2], 0.5);
    std::vector<double> one{2};
    EXPECT_THROW(benefit_scores(one, one), shape_error);
}

TEST(Dp, Examples)
{
    std::vector<double> nu{1, 5, 2, 4}, phi{1, 1, 1, 1};
    std::vector<double> b1{2};
    auto p = dp_select(nu, phi, b1);
    ASSERT_TRUE(p.intervals[0]);
    EXPECT_EQ(*p.intervals[0], (interval{2, 3}));
    EXPECT_EQ(p.total_benefit, 7.0);

    std::vector<double> b2{1, 1};
    p = dp_select(nu, phi, b2);
    EXPECT_EQ(p.total_benefit, 9.0);
    EXPECT_EQ(*p.intervals[0], (interval{2, 2}));
    EXPECT_EQ(*p.intervals[1], (interval{4, 4}));

    std::vector<double> big{100};
    p = dp_select(nu, phi, big);
    EXPECT_EQ(*p.intervals[0], (interval{1, 4}));
    EXPECT_EQ(p.total_benefit, 12.0);
}

TEST(Dp, TieBreakPrefersEarliest)
{
    std::vector<double> nu{1, 1, 1, 1}, phi{1, 1, 1, 1}, b{2};
    auto p = dp_select(nu, phi, b);
    EXPECT_EQ(*p.intervals[0], (interval{1, 2}));
}

TEST(Dp, MixedBudgetsAssignByClass)
{
    std::vector<double> nu{4, 4, 0, 1, 0}, phi{1, 1, 1, 1, 1}, b{1, 2};
    auto p = dp_select(nu, phi, b);
    EXPECT_EQ(p.total_benefit, 9.0);
    EXPECT_EQ(*p.intervals[1], (interval{1, 2}));
    EXPECT_EQ(*p.intervals[0], (interval{4, 4}));
}

TEST(Dp, ZeroBudgetsGiveEmptyPlan)
{
    std::vector<double> nu{1, 2}, phi{1, 1}, b{0, 0};
    auto p = dp_select(nu, phi, b);
    EXPECT_EQ(p.total_benefit, 0.0);
    EXPECT_FALSE(p.intervals[0]);
    EXPECT_FALSE(p.intervals[1]);
}

TEST(Dp, Errors)
{
    std::vector<double> empty, b{1};
    EXPECT_THROW(dp_select(empty, empty, b), shape_error);
    std::vector<double> nu{1}, bad{0};
    EXPECT_THROW(dp_select(nu, bad, b), domain_error);
}

TEST(Dp, MatchesBruteForce)
{
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 10000; ++t) {
        auto in = random_instance(rng, 8, 3);
        auto p = dp_select(in.nu, in.phi, in.beta);
        const double opt = ilp_bruteforce(in.nu, in.phi, in.beta);
        ASSERT_EQ(p.total_benefit, opt) << "instance " << t;
        ASSERT_TRUE(validate_plan(p, in.nu, in.phi, in.beta));
        ASSERT_EQ(plan_benefit(p, in.nu), opt);
    }
}

TEST(Bruteforce, Trivial)
{
    std::vector<double> z{0, 0, 0}, phi{1, 1, 1}, b{3};
    EXPECT_EQ(ilp_bruteforce(z, phi, b), 0.0);
    std::vector<double> one{0.75}, c{1}, b1{1};
    EXPECT_EQ(ilp_bruteforce(one, c, b1), 0.75);
    std::vector<double> big(11, 1.0);
    EXPECT_THROW(ilp_bruteforce(big, big, b1), domain_error);
}

TEST(Dp, RoughlyLinearInLayers)
{
    std::mt19937_64 rng(3);
    auto time_at = [&](std::size_t L) {
        std::vector<double> nu(L), phi(L, 1.0), b(3, static_cast<double>(L / 100));
        for (auto& v : nu) v = static_cast<double>(rng() % 1000);
        std::vector<double> ts;
        for (int r = 0; r < 5; ++r) {
            auto t0 = std::chrono::steady_clock::now();
            auto p = dp_select(nu, phi, b);
            ts.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
            EXPECT_TRUE(validate_plan(p, nu, phi, b));
        }
        std::sort(ts.begin(), ts.end());
        return ts[2];
    };
    const double a = time_at(4000), c = time_at(8000);
    EXPECT_LE(c, 2.5 * a);
}

TEST(Amc, Examples)
{
    std::vector<attack_record> r{{{1, 2}, true}};
    EXPECT_DOUBLE_EQ(*amc({2, 3}, r), 0.5);
    EXPECT_DOUBLE_EQ(*amc({1, 2, 3}, r), 1.0);
    std::vector<attack_record> failed{{{1}, false}};
    EXPECT_FALSE(amc({1}, failed).has_value());
    r.push_back({{4}, false});
    EXPECT_DOUBLE_EQ(*amc({2, 3}, r), 0.5);
}

TEST(Amc, MonotoneInSelection)
{
    std::mt19937_64 rng(11);
    for (int t = 0; t < 1000; ++t) {
        std::vector<attack_record> rec(1 + rng() % 10);
        for (auto& a : rec) {
            for (std::size_t l = 1; l <= 12; ++l)
                if (rng() % 3 == 0) a.layers.insert(l);
            if (a.layers.empty()) a.layers.insert(1);
            a.success = rng() % 4 != 0;
        }
        std::set<std::size_t> s, s2;
        for (std::size_t l = 1; l <= 12; ++l) {
            if (rng() % 3 == 0) s.insert(l);
            if (s.count(l) || rng() % 2) s2.insert(l);
        }
        auto a = amc(s, rec), b = amc(s2, rec);
        ASSERT_EQ(a.has_value(), b.has_value());
        if (a) {
            ASSERT_LE(*a, *b);
        }
    }
}

// Attacks on heavy-tailed (low alpha) layers succeed more often. Each batch
// holds 1000 successful attacks on random halves of the layers; the
// spectrally weighted plan should cover more of them than a plan that treats
// every layer alike.
TEST(Amc, SpectralWeightsBeatUniform)
{
    std::mt19937_64 rng(99);
    const std::size_t L = 20;
    std::uniform_real_distribution<double> ua(2.0, 6.0), u(0.0, 1.0);
    std::vector<double> alpha(L), params(L, 1.0), phi(L, 1.0), beta{5.0};
    for (auto& a : alpha) a = ua(rng);
    const auto [lo, hi] = std::minmax_element(alpha.begin(), alpha.end());
    auto nu_a = benefit_scores(alpha, params);
    std::vector<double> nu_u(L, 1.0 / L);
    auto sa = dp_select(nu_a, phi, beta).layers();
    auto su = dp_select(nu_u, phi, beta).layers();
    const std::set<std::size_t> sel_a(sa.begin(), sa.end()), sel_u(su.begin(), su.end());

    int wins = 0;
    const int batches = 50;
    for (int bt = 0; bt < batches; ++bt) {
        std::vector<attack_record> rec;
        while (rec.size() < 1000) {
            attack_record a;
            std::vector<std::size_t> perm(L);
            std::iota(perm.begin(), perm.end(), 1);
            std::shuffle(perm.begin(), perm.end(), rng);
            double weak = 0;
            for (std::size_t j = 0; j < L / 2; ++j) {
                a.layers.insert(perm[j]);
                weak += (*hi - alpha[perm[j] - 1]) / (*hi - *lo);
            }
            a.success = u(rng) < std::pow(weak / static_cast<double>(L / 2), 3.0);
            if (a.success) rec.push_back(std::move(a));
        }
        wins += *amc(sel_a, rec) > *amc(sel_u, rec);
    }
    EXPECT_GE(wins, batches * 8 / 10);
}

TEST(Profile, CsvRoundTripAndPlan)
{
    std::vector<layer_profile> ps{{1, 100, 1, {0.5, 1, 2, 4, 8}}, {2, 300, 2, {1, 1.5, 2, 2.5, 3}}};
    std::stringstream ss;
    write_profiles(ss, ps);
    auto back = read_profiles(ss);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[1].eigenvalues, ps[1].eigenvalues);
    EXPECT_EQ(back[1].param_count, 300);

    auto nu = profile_benefits(back);
    auto phi = profile_costs(back);
    std::vector<double> b{1};
    auto plan = dp_select(nu, phi, b);
    std::stringstream out;
    write_plan(out, plan);
    EXPECT_EQ(out.str().substr(0, 32), "verifier,start,end,cost,benefit\n");

    std::stringstream bad("layer_id,param_count,cost,eigenvalues\n1,2,0,1;2\n");
    EXPECT_THROW(read_profiles(bad), domain_error);
    std::stringstream junk("nope\n");
    EXPECT_THROW(read_profiles(junk), format_error);
    std::stringstream junk2("layer_id,param_count,cost,eigenvalues\n1,x,1,1;2\n");
    EXPECT_THROW(read_profiles(junk2), format_error);
}
