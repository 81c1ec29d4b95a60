#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "tensorcommit/algebra/prime_field.hpp"
#include "tensorcommit/algebra/small_field.hpp"
#include "tensorcommit/mvpoly/counting.hpp"
#include "tensorcommit/mvpoly/division.hpp"
#include "tensorcommit/mvpoly/interpolate.hpp"

using namespace tensorcommit;
using namespace tensorcommit::mvpoly;
using algebra::fr;
using poly = multi_poly<fr>;

namespace {

fr F(std::int64_t v) { return fr::from_int(v); }

poly random_poly(const shape& dims, std::mt19937_64& rng)
{
    poly p(dims);
    for (auto& c : p.coeffs()) c = fr::random(rng);
    return p;
}

grid<fr> random_grid(const shape& dims, std::mt19937_64& rng)
{
    std::vector<std::vector<fr>> axes;
    for (auto d : dims) {
        std::vector<fr> a;
        while (a.size() < d) {
            auto z = fr::random(rng);
            if (std::find(a.begin(), a.end(), z) == a.end()) a.push_back(z);
        }
        axes.push_back(a);
    }
    return grid<fr>(axes);
}

// Naive oracle: sum over all terms of c_i * prod x_j^{i_j}.
fr naive_eval(const poly& f, const std::vector<fr>& x)
{
    fr acc = fr::zero();
    for (std::size_t k = 0; k < f.size(); ++k) {
        auto i = lex_unindex(k, f.dims());
        fr term = f[k];
        for (std::size_t j = 0; j < i.size(); ++j) term *= x[j].pow(i[j]);
        acc += term;
    }
    return acc;
}

// Independent expansion of q * (X_axis - v) term by term, into the same shape.
poly expand_linear(const poly& q, std::size_t axis, const fr& v)
{
    poly out(q.dims());
    for (std::size_t k = 0; k < q.size(); ++k) {
        if (q[k].is_zero()) continue;
        auto i = lex_unindex(k, q.dims());
        out[k] -= v * q[k];
        i[axis] += 1;
        EXPECT_LT(i[axis], q.dims()[axis]);
        if (i[axis] < q.dims()[axis]) out.at(i) += q[k];
    }
    return out;
}

// Oracle for interpolation: Gaussian elimination on the full Vandermonde system.
poly vandermonde_solve(const poly& values, const grid<fr>& g)
{
    const std::size_t n = values.size();
    std::vector<std::vector<fr>> a(n, std::vector<fr>(n + 1));
    for (std::size_t row = 0; row < n; ++row) {
        auto pt = g.point(lex_unindex(row, values.dims()));
        for (std::size_t col = 0; col < n; ++col) {
            auto e = lex_unindex(col, values.dims());
            fr t = fr::one();
            for (std::size_t j = 0; j < e.size(); ++j) t *= pt[j].pow(e[j]);
            a[row][col] = t;
        }
        a[row][n] = values[row];
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (a[piv][c].is_zero()) ++piv;
        std::swap(a[piv], a[c]);
        auto inv = a[c][c].inverse();
        for (auto& x : a[c]) x *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c].is_zero()) continue;
            auto f = a[r][c];
            for (std::size_t k = c; k <= n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    poly out(values.dims());
    for (std::size_t k = 0; k < n; ++k) out[k] = a[k][n];
    return out;
}

}  // namespace

TEST(LexIndex, Examples)
{
    EXPECT_EQ(lex_index(std::vector<std::size_t>{0, 0}, std::vector<std::size_t>{3, 3}), 0u);
    EXPECT_EQ(lex_index(std::vector<std::size_t>{1, 2}, std::vector<std::size_t>{3, 3}), 5u);
    EXPECT_EQ(lex_index(std::vector<std::size_t>{1, 2, 3}, std::vector<std::size_t>{2, 3, 4}), 23u);
    EXPECT_THROW(lex_index(std::vector<std::size_t>{3, 0}, std::vector<std::size_t>{3, 3}), std::out_of_range);
    EXPECT_THROW(lex_index(std::vector<std::size_t>{0}, std::vector<std::size_t>{3, 3}), shape_error);
}

TEST(LexIndex, BijectionByEnumeration)
{
    for (const shape& dims : {shape{7}, shape{3, 5}, shape{2, 3, 4}, shape{10, 10, 10, 10}, shape{5, 1, 7, 2, 3}}) {
        // odometer enumeration with the last axis fastest
        multi_index i(dims.size(), 0);
        std::size_t n = shape_size(dims);
        for (std::size_t k = 0; k < n; ++k) {
            ASSERT_EQ(lex_index(i, dims), k);
            ASSERT_EQ(lex_unindex(k, dims), i);
            for (std::size_t j = dims.size(); j-- > 0;) {
                if (++i[j] < dims[j]) break;
                i[j] = 0;
            }
        }
    }
}

TEST(Shape, ParseAndFormat)
{
    EXPECT_EQ(parse_shape("4x4x4"), (shape{4, 4, 4}));
    EXPECT_EQ(parse_shape("2,3"), (shape{2, 3}));
    EXPECT_EQ(format_shape(shape{2, 3}), "2x3");
    EXPECT_THROW(parse_shape("4xx4"), format_error);
    EXPECT_THROW(parse_shape("4x0"), shape_error);
    EXPECT_THROW(parse_shape(""), format_error);
}

TEST(Eval, Examples)
{
    auto c = poly::constant({3, 2}, F(11));
    EXPECT_EQ(eval<fr>(c, std::vector<fr>{F(5), F(9)}), F(11));
    poly xy({2, 2});
    xy.at(std::vector<std::size_t>{1, 1}) = fr::one();
    EXPECT_EQ(eval<fr>(xy, std::vector<fr>{F(2), F(3)}), F(6));
    EXPECT_THROW(eval<fr>(xy, std::vector<fr>{F(2)}), shape_error);
}

TEST(Eval, MatchesNaiveExpansion)
{
    std::mt19937_64 rng(11);
    for (int t = 0; t < 50; ++t) {
        shape dims{1 + rng() % 4, 1 + rng() % 4, 1 + rng() % 3};
        auto f = random_poly(dims, rng);
        std::vector<fr> x{fr::random(rng), fr::random(rng), fr::random(rng)};
        EXPECT_EQ(eval<fr>(f, x), naive_eval(f, x));
    }
}

TEST(Interpolate, ConstantAndProductExamples)
{
    auto g = grid<fr>::standard(shape{3, 2});
    poly t({3, 2}, std::vector<fr>(6, F(7)));
    EXPECT_EQ(interpolate_lagrange(t, g), poly::constant({3, 2}, F(7)));

    auto g2 = grid<fr>::standard(shape{2, 2});
    poly v({2, 2});
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) v.at(std::vector<std::size_t>{i, j}) = g2.axis(0)[i] * g2.axis(1)[j];
    poly xy({2, 2});
    xy.at(std::vector<std::size_t>{1, 1}) = fr::one();
    EXPECT_EQ(interpolate_lagrange(v, g2), xy);
}

TEST(Interpolate, RoundTripOnRandomGrid)
{
    std::mt19937_64 rng(12);
    for (int t = 0; t < 20; ++t) {
        shape dims{3, 3, 3};
        auto g = random_grid(dims, rng);
        auto v = random_poly(dims, rng);
        auto f = interpolate_lagrange(v, g);
        for (std::size_t k = 0; k < v.size(); ++k) EXPECT_EQ(eval<fr>(f, g.point(lex_unindex(k, dims))), v[k]);
    }
}

TEST(Interpolate, AgreesWithVandermondeOracle)
{
    std::mt19937_64 rng(13);
    for (int t = 0; t < 10; ++t) {
        shape dims{1 + rng() % 3, 1 + rng() % 4};
        auto g = random_grid(dims, rng);
        auto v = random_poly(dims, rng);
        EXPECT_EQ(interpolate_lagrange(v, g), vandermonde_solve(v, g));
    }
}

TEST(Interpolate, RepeatedNodeAndShapeMismatch)
{
    grid<fr> g({{F(1), F(1)}});
    poly v({2});
    EXPECT_THROW(interpolate_lagrange(v, g), domain_error);
    EXPECT_THROW(newton_interpolate(v, g), domain_error);
    EXPECT_THROW(interpolate_lagrange(poly({3}), grid<fr>::standard(shape{2})), shape_error);
}

TEST(Newton, Examples)
{
    grid<fr> g({{F(0), F(1)}});
    poly v({2}, {F(0), F(1)});
    auto nf = newton_coefficients(v, g);
    EXPECT_EQ(nf.coeffs, poly({2}, {F(0), F(1)}));
    EXPECT_EQ(nf.to_monomial(), poly({2}, {F(0), F(1)}));

    auto g2 = grid<fr>::standard(shape{3, 4});
    poly c({3, 4}, std::vector<fr>(12, F(5)));
    auto nc = newton_coefficients(c, g2);
    EXPECT_EQ(nc.coeffs, poly::constant({3, 4}, F(5)));
}

TEST(Newton, MatchesLagrangeOnRandom4x4)
{
    std::mt19937_64 rng(14);
    for (int t = 0; t < 50; ++t) {
        auto g = random_grid({4, 4}, rng);
        auto v = random_poly({4, 4}, rng);
        auto nf = newton_coefficients(v, g);
        EXPECT_EQ(nf.to_monomial(), interpolate_lagrange(v, g));
        std::vector<fr> x{fr::random(rng), fr::random(rng)};
        EXPECT_EQ(nf.eval(x), eval<fr>(interpolate_lagrange(v, g), x));
    }
}

TEST(Barycentric, Examples)
{
    std::mt19937_64 rng(15);
    auto g = random_grid({3, 2}, rng);
    auto v = random_poly({3, 2}, rng);
    EXPECT_EQ(barycentric_eval(v, g, g.point(std::vector<std::size_t>{2, 1})), v.at(std::vector<std::size_t>{2, 1}));
    // one coordinate on a node, the other off the grid
    std::vector<fr> mixed{g.axis(0)[1], fr::random(rng)};
    EXPECT_EQ(barycentric_eval<fr>(v, g, mixed), eval<fr>(interpolate_lagrange(v, g), mixed));
    poly c({3, 2}, std::vector<fr>(6, F(4)));
    EXPECT_EQ(barycentric_eval<fr>(c, g, std::vector<fr>{F(1000), F(-3)}), F(4));
}

TEST(Barycentric, MatchesLagrangeOnRandom5x5)
{
    std::mt19937_64 rng(16);
    for (int t = 0; t < 50; ++t) {
        auto g = random_grid({5, 5}, rng);
        auto v = random_poly({5, 5}, rng);
        std::vector<fr> x{fr::random(rng), fr::random(rng)};
        EXPECT_EQ(barycentric_eval<fr>(v, g, x), eval<fr>(interpolate_lagrange(v, g), x));
    }
}

TEST(Gregory, Examples)
{
    grid<fr> g({{F(0), F(1), F(2)}});
    poly v({3}, {F(0), F(1), F(4)});
    EXPECT_EQ(gregory_eval<fr>(v, g, std::vector<fr>{F(3)}), F(9));
    EXPECT_EQ(gregory_eval<fr>(v, g, std::vector<fr>{F(0)}), F(0));

    auto g2 = grid<fr>::standard(shape{3, 3});
    std::mt19937_64 rng(17);
    auto t = random_poly({3, 3}, rng);
    EXPECT_EQ(gregory_eval<fr>(t, g2, std::vector<fr>{F(1), F(1)}), t[0]);

    grid<fr> uneven({{F(0), F(1), F(3)}});
    EXPECT_THROW(gregory_eval<fr>(v, uneven, std::vector<fr>{F(3)}), domain_error);
}

TEST(Gregory, MatchesBarycentricOnUniform4x4)
{
    std::mt19937_64 rng(18);
    for (int t = 0; t < 50; ++t) {
        // random start and spacing per axis
        std::vector<std::vector<fr>> axes;
        for (int j = 0; j < 2; ++j) {
            auto z0 = fr::random(rng), h = fr::random(rng);
            axes.push_back({z0, z0 + h, z0 + h + h, z0 + h + h + h});
        }
        grid<fr> g(axes);
        auto v = random_poly({4, 4}, rng);
        std::vector<fr> x{fr::random(rng), fr::random(rng)};
        EXPECT_EQ(gregory_eval<fr>(v, g, x), barycentric_eval<fr>(v, g, x));
    }
}

TEST(Interpolate, FloatInstantiationReproducesSamples)
{
    auto g = grid<double>::standard(shape{4, 5});
    multi_poly<double> v({4, 5});
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::sin(double(k));
    auto f = newton_interpolate(v, g);
    auto f2 = interpolate_lagrange(v, g);
    for (std::size_t k = 0; k < v.size(); ++k) {
        auto pt = g.point(lex_unindex(k, v.dims()));
        EXPECT_NEAR(eval<double>(f, pt), v[k], 1e-8);
        EXPECT_NEAR(eval<double>(f2, pt), v[k], 1e-8);
        EXPECT_NEAR(barycentric_eval<double>(v, g, pt), v[k], 1e-12);
    }
    std::vector<double> off{2.5, 3.25};
    EXPECT_NEAR(gregory_eval<double>(v, g, off), barycentric_eval<double>(v, g, off), 1e-8);
}

TEST(Division, Examples)
{
    poly x2({3}, {F(0), F(0), F(1)});
    auto [q, r] = divide_by_linear(x2, 0, F(3));
    EXPECT_EQ(q, poly({3}, {F(3), F(1), F(0)}));
    EXPECT_EQ(r, poly({3}, {F(9), F(0), F(0)}));

    auto c = poly::constant({2, 3}, F(4));
    auto [qc, rc] = divide_by_linear(c, 1, F(8));
    EXPECT_TRUE(qc.is_zero());
    EXPECT_EQ(rc, c);

    poly one_axis({1, 3}, {F(1), F(2), F(3)});
    auto [q1, r1] = divide_by_linear(one_axis, 0, F(5));
    EXPECT_TRUE(q1.is_zero());
    EXPECT_EQ(r1, one_axis);
}

TEST(Division, IdentityOnRandom4x4)
{
    std::mt19937_64 rng(19);
    for (int t = 0; t < 100; ++t) {
        auto f = random_poly({4, 4}, rng);
        auto v = fr::random(rng);
        std::size_t axis = t % 2;
        auto [q, r] = divide_by_linear(f, axis, v);
        EXPECT_EQ(expand_linear(q, axis, v) + r, f);
        // r does not depend on X_axis
        for (std::size_t k = 0; k < r.size(); ++k)
            if (lex_unindex(k, r.dims())[axis] != 0) {
                EXPECT_TRUE(r[k].is_zero());
            }
    }
}

TEST(OpenQuotients, Examples)
{
    auto c = poly::constant({2, 2}, F(6));
    auto oc = open_quotients<fr>(c, std::vector<fr>{F(1), F(9)});
    EXPECT_TRUE(oc.q[0].is_zero() && oc.q[1].is_zero());
    EXPECT_EQ(oc.y, F(6));

    poly xy({2, 2});
    xy.at(std::vector<std::size_t>{1, 1}) = fr::one();
    auto o = open_quotients<fr>(xy, std::vector<fr>{F(2), F(3)});
    EXPECT_EQ(o.y, F(6));
    poly x2({2, 2});
    x2.at(std::vector<std::size_t>{0, 1}) = fr::one();
    EXPECT_EQ(o.q[0], x2);
    EXPECT_EQ(o.q[1], poly::constant({2, 2}, F(2)));
}

TEST(OpenQuotients, TelescopingIdentity)
{
    std::mt19937_64 rng(20);
    for (int t = 0; t < 50; ++t) {
        auto f = random_poly({3, 3, 3}, rng);
        std::vector<fr> w{fr::random(rng), fr::random(rng), fr::random(rng)};
        auto o = open_quotients<fr>(f, w);
        EXPECT_EQ(o.y, naive_eval(f, w));
        auto sum = poly::constant(f.dims(), o.y);
        for (std::size_t i = 0; i < 3; ++i) sum = sum + expand_linear(o.q[i], i, w[i]);
        EXPECT_EQ(sum, f);
    }
}

TEST(ExactDivision, DivisibleAndNot)
{
    std::mt19937_64 rng(21);
    std::vector<fr> w{fr::random(rng), fr::random(rng)};
    poly q({2, 2});
    q[0] = fr::random(rng);
    // f = q0 (X1 - w1)(X2 - w2) + 5
    auto f = expand_linear(expand_linear(q, 0, w[0]), 1, w[1]);
    poly got;
    EXPECT_TRUE(divide_by_point_product<fr>(f, w, got));
    EXPECT_EQ(got, q);
    f[0] += F(5);
    EXPECT_FALSE(divide_by_point_product<fr>(f, w, got));
}

TEST(Counting, Examples)
{
    EXPECT_EQ(n_monomials(2, 3), 10u);
    EXPECT_EQ(n_monomials(1, 3) + n_monomials(2, 2), n_monomials(2, 3));
    EXPECT_EQ(n_degree(4096, 2), 64u);
    EXPECT_EQ(n_degree(4096, 12), 2u);
    EXPECT_EQ(n_degree(4096, 13), 1u);
    EXPECT_EQ(n_degree(1, 5), 1u);
    EXPECT_EQ(n_degree(std::uint64_t(-1), 1), std::uint64_t(-1));
    EXPECT_EQ(n_degree(std::uint64_t(-1), 2), 4294967295u);
    EXPECT_THROW(n_monomials(100, 100), overflow_error);
    EXPECT_EQ(n_monomials(30, 30), 118264581564861424ULL);
}

TEST(Counting, PascalSplit)
{
    for (std::uint64_t m = 2; m <= 30; ++m)
        for (std::uint64_t n = 1; n <= 30; ++n) EXPECT_EQ(n_monomials(m - 1, n) + n_monomials(m, n - 1), n_monomials(m, n));
}

TEST(PolyFormat, RoundTrip)
{
    std::mt19937_64 rng(22);
    auto f = random_poly({2, 3}, rng);
    auto enc = encode_poly(f);
    EXPECT_EQ(decode_poly<fr>(enc), f);
    enc[4] = 9;
    EXPECT_THROW(decode_poly<fr>(enc), format_error);
}
