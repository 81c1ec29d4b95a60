#include <gtest/gtest.h>

#include <random>
#include <string>

#include "tensorcommit/algebra/bls12_381_backend.hpp"
#include "tensorcommit/algebra/hash.hpp"
#include "tensorcommit/algebra/prime_field.hpp"
#include "tensorcommit/algebra/small_field.hpp"
#include "tensorcommit/algebra/transparent_backend.hpp"
#include "tensorcommit/commit/srs.hpp"

using namespace tensorcommit;
using algebra::f61;
using algebra::fr;
using tb = algebra::transparent_backend<fr>;
using pb = algebra::bls12_381_backend;

namespace {

const char* modulus_dec = "52435875175126190479447740508185965837690552500527637822603658699938581184513";

std::span<const std::uint8_t> as_bytes(std::string_view s)
{
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

}  // namespace

TEST(PrimeField, ModulusReducesToZero)
{
    EXPECT_TRUE(fr::from_decimal(modulus_dec).is_zero());
    EXPECT_EQ((fr::zero() - fr::one()).to_decimal(),
              "52435875175126190479447740508185965837690552500527637822603658699938581184512");
}

TEST(PrimeField, KnownProductsAndInverse)
{
    // reference values computed with Python big integers
    auto a = fr::from_u64(2).pow(200) + fr::from_u64(12345);
    auto b = fr::from_u64(3).pow(150);
    EXPECT_EQ(a.to_decimal(), "1606938044258990275541962092341162602522202993782792835313721");
    EXPECT_EQ(b.to_decimal(), "369988485035126972924700782451696644186473100389722973815184405301748249");
    EXPECT_EQ((a * b).to_decimal(),
              "13383745281893722695073258777878771953767006888912092855727583696297372320412");
    EXPECT_EQ(a.inverse().to_decimal(),
              "36055960372958158880456082945155822794711003740563035577711296604889077199913");
}

TEST(PrimeField, FieldAxiomsOnRandomTriples)
{
    std::mt19937_64 rng(7);
    for (int t = 0; t < 2000; ++t) {
        auto a = fr::random(rng), b = fr::random(rng), c = fr::random(rng);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ((a + b) + c, a + (b + c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(a - a, fr::zero());
        if (!a.is_zero()) {
            EXPECT_EQ(a * a.inverse(), fr::one());
        }
    }
}

TEST(PrimeField, ByteRoundTripIsStrict)
{
    std::mt19937_64 rng(8);
    for (int t = 0; t < 100; ++t) {
        auto a = fr::random(rng);
        auto back = fr::from_bytes(a.to_bytes());
        ASSERT_TRUE(back);
        EXPECT_EQ(*back, a);
    }
    std::array<std::uint8_t, 32> all_ones;
    all_ones.fill(0xff);
    EXPECT_FALSE(fr::from_bytes(all_ones));
    EXPECT_FALSE(fr::from_bytes(std::span(all_ones).first(31)));
    EXPECT_THROW(fr::zero().inverse(), domain_error);
    EXPECT_EQ(fr::from_int(-5) + fr::from_u64(5), fr::zero());
}

TEST(Hash, HashToFieldMatchesReference)
{
    auto data = as_bytes("abc");
    EXPECT_EQ(algebra::hash_to_field<fr>("dom", data).to_decimal(),
              "14929861712356945575188495456455812436062072767210430872200307695197969654746");
    EXPECT_EQ(algebra::hash_to_field<f61>("dom", data).value(), 1127533051477215494ULL);
}

TEST(SmallField, Basics)
{
    EXPECT_EQ(f61::from_int(-1).value(), (std::uint64_t(1) << 61) - 2);
    EXPECT_EQ((f61::from_u64(5) * f61::from_u64(7)).value(), 35u);
    EXPECT_EQ(f61::from_u64(3) * f61::from_u64(3).inverse(), f61::one());
}

TEST(TransparentBackend, PairMultipliesExponents)
{
    EXPECT_EQ(tb::transparent_pair(fr::from_u64(5), fr::from_u64(7)).log, fr::from_u64(35));
    EXPECT_EQ(tb::transparent_pair(fr::zero(), fr::from_u64(9)).log, fr::zero());
    EXPECT_EQ(tb::transparent_pair(fr::from_u64(2), fr::from_u64(3)), tb::transparent_pair(fr::from_u64(3), fr::from_u64(2)));
    using tf = algebra::transparent_backend<f61>;
    EXPECT_EQ(tf::transparent_pair(f61::from_u64(5), f61::from_u64(7)).log.value(), 35u);
}

TEST(TransparentBackend, Bilinearity)
{
    std::mt19937_64 rng(1);
    for (int t = 0; t < 1000; ++t) {
        auto a = fr::random(rng), b = fr::random(rng);
        auto lhs = tb::pair(tb::g1_generator() * a, tb::g2_generator() * b);
        auto rhs = tb::pair(tb::g1_generator() * (a * b), tb::g2_generator());
        EXPECT_EQ(lhs, rhs);
    }
}

TEST(ProductionBackend, BilinearityAndNonDegeneracy)
{
    std::mt19937_64 rng(2);
    auto g = pb::g1_generator();
    auto h = pb::g2_generator();
    auto base = pb::pair(g, h);
    EXPECT_FALSE(base.is_one());
    // pairings are slow; 1000 pairs take a few seconds
    for (int t = 0; t < 1000; ++t) {
        auto a = fr::random(rng), b = fr::random(rng);
        EXPECT_EQ(pb::pair(g * a, h * b), pb::pair(g * (a * b), h));
    }
}

TEST(ProductionBackend, EncodingRoundTrip)
{
    std::mt19937_64 rng(3);
    auto p = pb::g1_generator() * fr::random(rng);
    auto q = pb::g2_generator() * fr::random(rng);
    std::array<std::uint8_t, 48> e1;
    std::array<std::uint8_t, 96> e2;
    pb::encode(p, e1);
    pb::encode(q, e2);
    auto p2 = pb::decode_g1(e1);
    auto q2 = pb::decode_g2(e2);
    ASSERT_TRUE(p2 && q2);
    EXPECT_EQ(*p2, p);
    EXPECT_EQ(*q2, q);
    e1[5] ^= 1;
    auto bad = pb::decode_g1(e1);
    EXPECT_TRUE(!bad || !(*bad == p));
}

TEST(ProductionBackend, MsmStrategiesAgree)
{
    std::mt19937_64 rng(4);
    std::vector<pb::g1> bases;
    std::vector<fr> scalars;
    for (int i = 0; i < 40; ++i) {
        bases.push_back(pb::g1_generator() * fr::random(rng));
        scalars.push_back(i % 7 == 0 ? fr::zero() : fr::random(rng));
    }
    auto table = pb::make_table(bases);
    auto a = pb::msm(table, scalars, algebra::msm_strategy::naive);
    auto b = pb::msm(table, scalars, algebra::msm_strategy::windowed);
    EXPECT_EQ(a, b);
}

TEST(Srs, SingleAxisOfLengthOne)
{
    auto [s, td] = commit::setup_srs<tb>({1}, "seed");
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s.monomials[0], tb::g1_generator());
}

TEST(Srs, ToyExponentsByHand)
{
    using tf = algebra::transparent_backend<f61>;
    commit::trapdoors<f61> td{{f61::from_u64(2), f61::from_u64(3)}};
    auto s = commit::setup_srs_from_trapdoors<tf>({2, 2}, td, mvpoly::grid<f61>::standard(std::vector<std::size_t>{2, 2}));
    // lex order (0,0), (0,1), (1,0), (1,1)
    EXPECT_EQ(s.monomials[0].log.value(), 1u);
    EXPECT_EQ(s.monomials[1].log.value(), 3u);
    EXPECT_EQ(s.monomials[2].log.value(), 2u);
    EXPECT_EQ(s.monomials[3].log.value(), 6u);
}

TEST(Srs, CountsAndTransparentConsistency)
{
    auto [s, td] = commit::setup_srs<tb>({3, 3}, "seed");
    EXPECT_EQ(s.size(), 9u);
    EXPECT_EQ(s.axis_g1.size(), 2u);
    for (std::size_t k = 0; k < 9; ++k) {
        auto i = mvpoly::lex_unindex(k, s.dims);
        EXPECT_EQ(s.monomials[k].log, td.taus[0].pow(i[0]) * td.taus[1].pow(i[1]));
    }
    EXPECT_EQ(s.axis_g2(1).log, td.taus[1]);
    EXPECT_EQ(s.multilinear_g2[3].log, td.taus[0] * td.taus[1]);
}

TEST(Srs, ZeroDimensionRejected)
{
    EXPECT_THROW((commit::setup_srs<tb>({3, 0}, "seed")), shape_error);
    EXPECT_THROW((commit::setup_srs<tb>({}, "seed")), shape_error);
    EXPECT_THROW((commit::setup_srs<tb>({1u << 20, 1u << 20}, "seed")), overflow_error);
}

TEST(Srs, SerializationRoundTripIsByteIdentical)
{
    auto [s, td] = commit::setup_srs<pb>({2, 3}, "round-trip");
    auto enc = commit::encode_srs(s);
    auto back = commit::decode_srs<pb>(enc);
    EXPECT_EQ(commit::encode_srs(back), enc);
    // trapdoors never appear in the public bytes
    for (const auto& tau : td.taus) {
        auto tb_bytes = tau.to_bytes();
        EXPECT_EQ(std::search(enc.begin(), enc.end(), tb_bytes.begin(), tb_bytes.end()), enc.end());
    }
    auto [st, tdt] = commit::setup_srs<tb>({4, 2}, "round-trip");
    auto enct = commit::encode_srs(st);
    EXPECT_EQ(commit::encode_srs(commit::decode_srs<tb>(enct)), enct);
    enct.pop_back();
    EXPECT_THROW(commit::decode_srs<tb>(enct), format_error);
}

TEST(Srs, SeedDeterminesTrapdoors)
{
    auto a = commit::derive_trapdoors<fr>(3, as_bytes("x"));
    auto b = commit::derive_trapdoors<fr>(3, as_bytes("x"));
    auto c = commit::derive_trapdoors<fr>(3, as_bytes("y"));
    EXPECT_EQ(a.taus, b.taus);
    EXPECT_NE(a.taus, c.taus);
}
