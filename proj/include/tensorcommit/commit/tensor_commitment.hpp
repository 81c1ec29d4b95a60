#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tensorcommit/algebra/backend.hpp"
#include "tensorcommit/bytes.hpp"
#include "tensorcommit/commit/srs.hpp"
#include "tensorcommit/errors.hpp"
#include "tensorcommit/mvpoly/division.hpp"
#include "tensorcommit/mvpoly/interpolate.hpp"
#include "tensorcommit/mvpoly/multipoly.hpp"

namespace tensorcommit::commit {

template <class F>
using tensor = mvpoly::multi_poly<F>;

/// Claimed value f_T(w) with one quotient commitment per axis.
template <algebra::group_backend B>
struct tensor_opening {
    std::vector<typename B::scalar> point;
    typename B::scalar y;
    std::vector<typename B::g1> proofs;

    friend bool operator==(const tensor_opening&, const tensor_opening&) = default;
};

/// Opening against the single pairing g2^{prod_j (tau_j - w_j)}. Only exists
/// when f_T - y is divisible by prod_j (X_j - w_j).
template <algebra::group_backend B>
struct product_opening {
    std::vector<typename B::scalar> point;
    typename B::scalar y;
    typename B::g1 proof;
};

template <algebra::group_backend B>
typename B::g1 commit_poly(const srs<B>& s, const mvpoly::multi_poly<typename B::scalar>& f,
                           algebra::msm_strategy strategy = algebra::msm_strategy::windowed)
{
    if (f.dims() != s.dims) throw shape_error("polynomial shape does not match srs shape");
    return B::msm(s.table, f.coeffs(), strategy);
}

/// f_T by Lagrange interpolation on the srs grid, then one multi-exponentiation.
template <algebra::group_backend B>
typename B::g1 tc_commit(const srs<B>& s, const tensor<typename B::scalar>& t,
                         algebra::msm_strategy strategy = algebra::msm_strategy::windowed)
{
    if (t.dims() != s.dims) throw shape_error("tensor shape does not match srs shape");
    return commit_poly(s, mvpoly::interpolate_lagrange(t, s.domain), strategy);
}

template <algebra::group_backend B>
tensor_opening<B> open_poly(const srs<B>& s, const mvpoly::multi_poly<typename B::scalar>& f,
                            std::span<const typename B::scalar> w,
                            algebra::msm_strategy strategy = algebra::msm_strategy::windowed)
{
    if (f.dims() != s.dims) throw shape_error("polynomial shape does not match srs shape");
    auto oq = mvpoly::open_quotients(f, w);
    tensor_opening<B> out{{w.begin(), w.end()}, oq.y, {}};
    for (const auto& q : oq.q) out.proofs.push_back(commit_poly(s, q, strategy));
    return out;
}

template <algebra::group_backend B>
tensor_opening<B> tc_open(const srs<B>& s, const tensor<typename B::scalar>& t, std::span<const typename B::scalar> w,
                          algebra::msm_strategy strategy = algebra::msm_strategy::windowed)
{
    if (t.dims() != s.dims) throw shape_error("tensor shape does not match srs shape");
    if (w.size() != s.arity()) throw shape_error("opening point arity does not match srs");
    return open_poly(s, mvpoly::interpolate_lagrange(t, s.domain), w, strategy);
}

/// e(C - y g1, g2) == prod_i e(pi_i, g2^{tau_i - w_i}), checked as a single
/// pairing product equal to one.
template <algebra::group_backend B>
bool tc_verify(const srs<B>& s, const typename B::g1& c, const tensor_opening<B>& op)
{
    if (op.proofs.size() != s.arity()) throw shape_error("opening carries the wrong number of proofs");
    if (op.point.size() != s.arity()) throw shape_error("opening point arity does not match srs");
    using g1 = typename B::g1;
    using g2 = typename B::g2;
    const auto& h = s.g2_generator();
    std::vector<std::pair<g1, g2>> pairs;
    pairs.reserve(s.arity() + 1);
    pairs.emplace_back(c - B::g1_generator() * op.y, -h);
    for (std::size_t i = 0; i < s.arity(); ++i) pairs.emplace_back(op.proofs[i], s.axis_g2(i) - h * op.point[i]);
    return B::pairing_product_is_one(pairs);
}

template <algebra::group_backend B>
bool tc_verify(const srs<B>& s, const typename B::g1& c, std::span<const typename B::scalar> w,
               const tensor_opening<B>& op)
{
    if (w.size() != op.point.size()) throw shape_error("opening point arity does not match srs");
    for (std::size_t i = 0; i < w.size(); ++i)
        if (!(w[i] == op.point[i])) return false;
    return tc_verify(s, c, op);
}

/// Opening for the single-pairing check, or nullopt when f_T - y is not
/// divisible by prod_j (X_j - w_j).
template <algebra::group_backend B>
std::optional<product_opening<B>> tc_open_product(const srs<B>& s, const tensor<typename B::scalar>& t,
                                                  std::span<const typename B::scalar> w)
{
    if (t.dims() != s.dims) throw shape_error("tensor shape does not match srs shape");
    if (w.size() != s.arity()) throw shape_error("opening point arity does not match srs");
    auto f = mvpoly::interpolate_lagrange(t, s.domain);
    auto y = mvpoly::eval<typename B::scalar>(f, w);
    f[0] = f[0] - y;
    mvpoly::multi_poly<typename B::scalar> q;
    if (!mvpoly::divide_by_point_product(f, w, q)) return std::nullopt;
    return product_opening<B>{{w.begin(), w.end()}, y, commit_poly(s, q)};
}

/// e(C - y g1, g2) == e(pi, g2^{prod_j (tau_j - w_j)}).
template <algebra::group_backend B>
bool tc_verify_product(const srs<B>& s, const typename B::g1& c, const product_opening<B>& op)
{
    if (op.point.size() != s.arity()) throw shape_error("opening point arity does not match srs");
    using g1 = typename B::g1;
    using g2 = typename B::g2;
    std::pair<g1, g2> pairs[2] = {{c - B::g1_generator() * op.y, -s.g2_generator()},
                                  {op.proof, s.shifted_product_g2(op.point)}};
    return B::pairing_product_is_one(pairs);
}

template <algebra::group_backend B>
bytes encode_commitment(const typename B::g1& c)
{
    bytes out(B::g1_bytes);
    B::encode(c, out);
    return out;
}

template <algebra::group_backend B>
typename B::g1 decode_commitment(std::span<const std::uint8_t> in)
{
    auto p = B::decode_g1(in);
    if (!p) throw format_error("invalid commitment encoding");
    return *p;
}

/// "TCOP" | m u16 | w_1..w_m | y | pi_1..pi_m.
template <algebra::group_backend B>
void write_opening(byte_writer& w, const tensor_opening<B>& op)
{
    using scalar = typename B::scalar;
    w.put_magic("TCOP");
    w.put_u16(static_cast<std::uint16_t>(op.point.size()));
    for (const auto& x : op.point) x.to_bytes(w.grow(scalar::byte_size));
    op.y.to_bytes(w.grow(scalar::byte_size));
    for (const auto& p : op.proofs) B::encode(p, w.grow(B::g1_bytes));
}

template <algebra::group_backend B>
tensor_opening<B> read_opening(byte_reader& r)
{
    using scalar = typename B::scalar;
    r.expect_magic("TCOP");
    const std::size_t m = r.get_u16();
    if (m == 0 || m > max_order) throw format_error("opening: bad arity");
    auto field = [&] {
        auto x = scalar::from_bytes(r.get_bytes(scalar::byte_size));
        if (!x) throw format_error("opening: non-canonical field element");
        return *x;
    };
    tensor_opening<B> op;
    for (std::size_t i = 0; i < m; ++i) op.point.push_back(field());
    op.y = field();
    for (std::size_t i = 0; i < m; ++i) {
        auto p = B::decode_g1(r.get_bytes(B::g1_bytes));
        if (!p) throw format_error("opening: invalid group element");
        op.proofs.push_back(*p);
    }
    return op;
}

template <algebra::group_backend B>
bytes encode_opening(const tensor_opening<B>& op)
{
    byte_writer w;
    write_opening(w, op);
    return std::move(w).take();
}

template <algebra::group_backend B>
tensor_opening<B> decode_opening(std::span<const std::uint8_t> in)
{
    byte_reader r(in);
    auto op = read_opening<B>(r);
    r.expect_end();
    return op;
}

}  // namespace tensorcommit::commit
