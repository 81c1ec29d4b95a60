#include <gtest/gtest.h>

#include <random>

#include "tensorcommit/algebra/bls12_381_backend.hpp"
#include "tensorcommit/algebra/small_field.hpp"
#include "tensorcommit/algebra/transparent_backend.hpp"
#include "tensorcommit/commit/tensor_commitment.hpp"
#include "tensorcommit/commit/vector_commitment.hpp"

using namespace tensorcommit;
using namespace tensorcommit::commit;
using algebra::fr;
using tb = algebra::transparent_backend<fr>;
using pb = algebra::bls12_381_backend;
using ftensor = tensor<fr>;

namespace {

fr F(std::int64_t v) { return fr::from_int(v); }

ftensor random_tensor(const mvpoly::shape& dims, std::mt19937_64& rng)
{
    ftensor t(dims);
    for (auto& c : t.coeffs()) c = fr::random(rng);
    return t;
}

std::vector<fr> random_point(std::size_t m, std::mt19937_64& rng)
{
    std::vector<fr> w;
    for (std::size_t i = 0; i < m; ++i) w.push_back(fr::random(rng));
    return w;
}

srs<tb> transparent_srs(const mvpoly::shape& dims, std::vector<fr> taus)
{
    return setup_srs_from_trapdoors<tb>(dims, trapdoors<fr>{std::move(taus)}, mvpoly::grid<fr>::standard(dims));
}

}  // namespace

TEST(VectorCommitment, Examples)
{
    auto s = transparent_srs({2}, {F(5)});
    std::vector<fr> zeros{F(0), F(0)};
    EXPECT_EQ(vc_commit(s, zeros), tb::g1::identity());
    std::vector<fr> cst{F(4), F(4)};
    EXPECT_EQ(vc_commit(s, cst).log, F(4));
    // f(X) = 2X - 1 through (1,1), (2,3); f(5) = 9
    std::vector<fr> v{F(1), F(3)};
    EXPECT_EQ(vc_commit(s, v).log, F(9));
}

TEST(VectorCommitment, HonestAndTampered)
{
    auto [s, td] = setup_srs<pb>({8}, "vc");
    std::mt19937_64 rng(31);
    std::vector<fr> v;
    for (int i = 0; i < 8; ++i) v.push_back(fr::random(rng));
    auto c = vc_commit(s, v);
    for (std::size_t i = 0; i < 8; ++i) {
        auto op = vc_open(s, v, i);
        EXPECT_EQ(op.y, v[i]);
        EXPECT_TRUE(vc_verify(s, c, i, op));
        auto bad = op;
        bad.y += fr::one();
        EXPECT_FALSE(vc_verify(s, c, i, bad));
        EXPECT_FALSE(vc_verify(s, c, (i + 1) % 8, op));
    }
    EXPECT_THROW(vc_open(s, v, 8), std::out_of_range);
    std::vector<fr> short_v(7);
    EXPECT_THROW(vc_commit(s, short_v), shape_error);
}

TEST(VectorCommitment, RandomProofsRejected)
{
    auto [s, td] = setup_srs<tb>({16}, "vc-random");
    std::mt19937_64 rng(32);
    std::vector<fr> v;
    for (int i = 0; i < 16; ++i) v.push_back(fr::random(rng));
    auto c = vc_commit(s, v);
    int accepted = 0;
    for (int t = 0; t < 1000; ++t) {
        auto op = vc_open(s, v, t % 16);
        op.proof = tb::g1_generator() * fr::random(rng);
        accepted += vc_verify(s, c, t % 16, op);
    }
    EXPECT_EQ(accepted, 0);
}

TEST(TensorCommitment, CommitExamples)
{
    auto [s, td] = setup_srs<tb>({2, 3}, "tc");
    EXPECT_EQ(tc_commit(s, ftensor({2, 3})), tb::g1::identity());
    ftensor c({2, 3}, std::vector<fr>(6, F(8)));
    EXPECT_EQ(tc_commit(s, c).log, F(8));
}

TEST(TensorCommitment, CommitExponentOracle)
{
    std::mt19937_64 rng(33);
    for (int t = 0; t < 20; ++t) {
        auto [s, td] = setup_srs<tb>({2, 2}, "tc" + std::to_string(t));
        auto T = random_tensor({2, 2}, rng);
        auto f = mvpoly::interpolate_lagrange(T, s.domain);
        EXPECT_EQ(tc_commit(s, T).log, mvpoly::eval<fr>(f, td.taus));
    }
}

TEST(TensorCommitment, OpenExamples)
{
    auto [s, td] = setup_srs<tb>({3, 2}, "open");
    ftensor c({3, 2}, std::vector<fr>(6, F(3)));
    auto op = tc_open<tb>(s, c, std::vector<fr>{F(10), F(11)});
    EXPECT_EQ(op.y, F(3));
    for (const auto& p : op.proofs) EXPECT_EQ(p, tb::g1::identity());

    // T sampled from X1 * X2 on the {1,2}^2 grid
    auto [s2, td2] = setup_srs<tb>({2, 2}, "open2");
    ftensor xy({2, 2}, {F(1), F(2), F(2), F(4)});
    auto o = tc_open<tb>(s2, xy, std::vector<fr>{F(2), F(3)});
    EXPECT_EQ(o.y, F(6));
    EXPECT_EQ(o.proofs[0].log, td2.taus[1]);
    EXPECT_EQ(o.proofs[1].log, F(2));
    EXPECT_TRUE(tc_verify(s2, tc_commit(s2, xy), o));
}

TEST(TensorCommitment, HonestOpeningsVerifyOnBothBackends)
{
    std::mt19937_64 rng(34);
    for (int t = 0; t < 100; ++t) {
        mvpoly::shape dims{1 + rng() % 4, 1 + rng() % 4, 1 + rng() % 4};
        auto T = random_tensor(dims, rng);
        auto w = random_point(3, rng);
        auto [s, td] = setup_srs<tb>(dims, "h" + std::to_string(t));
        auto op = tc_open<tb>(s, T, w);
        EXPECT_EQ(op.y, mvpoly::eval<fr>(mvpoly::interpolate_lagrange(T, s.domain), w));
        EXPECT_TRUE(tc_verify(s, tc_commit(s, T), op));
    }
}

TEST(TensorCommitment, BackendsAgreeOnVerdicts)
{
    std::mt19937_64 rng(35);
    for (int t = 0; t < 100; ++t) {
        mvpoly::shape dims{1 + rng() % 3, 1 + rng() % 3};
        auto T = random_tensor(dims, rng);
        auto w = random_point(2, rng);
        std::string seed = "agree" + std::to_string(t);
        auto [st, tdt] = setup_srs<tb>(dims, seed);
        auto [sp, tdp] = setup_srs<pb>(dims, seed);
        ASSERT_EQ(tdt.taus, tdp.taus);
        auto ot = tc_open<tb>(st, T, w);
        auto op = tc_open<pb>(sp, T, w);
        // the same tamper (or none) applied on both sides
        int kind = t % 3;
        if (kind == 1) {
            ot.y += fr::one();
            op.y += fr::one();
        } else if (kind == 2) {
            ot.proofs[0] = ot.proofs[0] + tb::g1_generator();
            op.proofs[0] = op.proofs[0] + pb::g1_generator();
        }
        bool vt = tc_verify(st, tc_commit(st, T), ot);
        bool vp = tc_verify(sp, tc_commit(sp, T), op);
        EXPECT_EQ(vt, vp);
        EXPECT_EQ(vt, kind == 0);
        // the production proofs are commitments to the same quotients
        auto oq = mvpoly::open_quotients<fr>(mvpoly::interpolate_lagrange(T, sp.domain), w);
        if (kind == 0) {
            for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(op.proofs[i], pb::g1_generator() * mvpoly::eval<fr>(oq.q[i], tdp.taus));
        }
    }
}

TEST(TensorCommitment, TamperedOpeningsReject)
{
    std::mt19937_64 rng(36);
    auto [s, td] = setup_srs<tb>({4, 4, 4}, "tamper");
    auto T = random_tensor({4, 4, 4}, rng);
    auto T2 = random_tensor({4, 4, 4}, rng);
    auto c = tc_commit(s, T);
    int accepted = 0;
    for (int t = 0; t < 1000; ++t) {
        auto w = random_point(3, rng);
        auto op = tc_open<tb>(s, T, w);
        ASSERT_TRUE(tc_verify(s, c, op));
        auto y_shift = op;
        y_shift.y += fr::random(rng) + fr::one();
        auto replaced = op;
        replaced.proofs[t % 3] = tb::g1_generator();
        auto swapped = op;
        std::swap(swapped.proofs[0], swapped.proofs[1 + t % 2]);
        auto scaled = op;
        scaled.proofs[t % 3] = scaled.proofs[t % 3] * F(2);
        auto reuse = tc_open<tb>(s, T2, w);
        reuse.y = op.y;
        for (const auto* bad : {&y_shift, &replaced, &swapped, &scaled, &reuse}) accepted += tc_verify(s, c, *bad);
    }
    EXPECT_EQ(accepted, 0);
}

TEST(TensorCommitment, PointMismatchAndErrors)
{
    std::mt19937_64 rng(37);
    auto [s, td] = setup_srs<tb>({2, 2}, "err");
    auto T = random_tensor({2, 2}, rng);
    auto w = random_point(2, rng);
    auto op = tc_open<tb>(s, T, w);
    auto c = tc_commit(s, T);
    EXPECT_TRUE(tc_verify<tb>(s, c, w, op));
    auto w2 = w;
    w2[1] += fr::one();
    EXPECT_FALSE(tc_verify<tb>(s, c, w2, op));
    auto short_op = op;
    short_op.proofs.pop_back();
    EXPECT_THROW(tc_verify(s, c, short_op), shape_error);
    EXPECT_THROW(tc_commit(s, ftensor({2, 3})), shape_error);
    EXPECT_THROW(tc_open<tb>(s, T, std::vector<fr>{F(1)}), shape_error);
}

TEST(TensorCommitment, ProductOpeningWhenDivisible)
{
    std::mt19937_64 rng(38);
    auto [s, td] = setup_srs<pb>({3, 3}, "single");
    auto w = random_point(2, rng);
    // f = (X1 - w1)(X2 - w2) g + 7 with g = a + b X1
    mvpoly::multi_poly<fr> f({3, 3});
    auto a = fr::random(rng), b = fr::random(rng);
    // expand (X1 - w1)(a + b X1) then times (X2 - w2)
    fr p0 = -w[0] * a, p1 = a - w[0] * b, p2 = b;
    fr coeffs1[3] = {p0, p1, p2};
    for (std::size_t i = 0; i < 3; ++i) {
        f.at(std::vector<std::size_t>{i, 0}) = -w[1] * coeffs1[i];
        f.at(std::vector<std::size_t>{i, 1}) = coeffs1[i];
    }
    f[0] += F(7);
    ftensor T(s.dims);
    for (std::size_t k = 0; k < T.size(); ++k) T[k] = mvpoly::eval<fr>(f, s.domain.point(mvpoly::lex_unindex(k, s.dims)));
    auto op = tc_open_product<pb>(s, T, w);
    ASSERT_TRUE(op);
    EXPECT_EQ(op->y, F(7));
    auto c = tc_commit(s, T);
    EXPECT_TRUE(tc_verify_product(s, c, *op));
    auto bad = *op;
    bad.y += fr::one();
    EXPECT_FALSE(tc_verify_product(s, c, bad));
    // a generic tensor is not divisible
    EXPECT_FALSE(tc_open_product<pb>(s, random_tensor({3, 3}, rng), w));
}

TEST(TensorCommitment, DeterministicAndWireRoundTrip)
{
    std::mt19937_64 rng(39);
    auto [s, td] = setup_srs<pb>({2, 2, 2}, "wire");
    auto T = random_tensor({2, 2, 2}, rng);
    auto c1 = encode_commitment<pb>(tc_commit(s, T));
    auto c2 = encode_commitment<pb>(tc_commit(s, T, algebra::msm_strategy::naive));
    EXPECT_EQ(c1, c2);
    EXPECT_EQ(c1.size(), 48u);
    auto op = tc_open<pb>(s, T, random_point(3, rng));
    auto enc = encode_opening(op);
    EXPECT_EQ(enc.size(), 4 + 2 + 4 * 32 + 3 * 48u);
    auto back = decode_opening<pb>(enc);
    EXPECT_EQ(encode_opening(back), enc);
    EXPECT_TRUE(tc_verify(s, decode_commitment<pb>(c1), back));
    enc.push_back(0);
    EXPECT_THROW(decode_opening<pb>(enc), format_error);
}
