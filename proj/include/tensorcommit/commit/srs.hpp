#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "tensorcommit/algebra/backend.hpp"
#include "tensorcommit/algebra/hash.hpp"
#include "tensorcommit/bytes.hpp"
#include "tensorcommit/errors.hpp"
#include "tensorcommit/mvpoly/grid.hpp"
#include "tensorcommit/mvpoly/multipoly.hpp"
#include "tensorcommit/mvpoly/shape.hpp"

namespace tensorcommit::commit {

/// Largest tensor order accepted by setup. The G2 section grows as 2^m.
inline constexpr std::size_t max_order = 16;

/// Largest number of monomials accepted by setup and by the decoder.
inline constexpr std::size_t max_srs_size = std::size_t(1) << 24;

/// Secret per-axis evaluation points. Never serialized.
template <class F>
struct trapdoors {
    std::vector<F> taus;
};

/// Public parameters for one tensor shape.
///
/// `monomials[lex_index(i)]` is g1^{prod_j tau_j^{i_j}}; `axis_g1[j]` is
/// g1^{tau_j}. The verifier works in G2 with `multilinear_g2[mask]` =
/// g2^{prod_{j in mask} tau_j}, so entry 0 is the G2 generator and entry
/// 1 << j is g2^{tau_j}.
template <algebra::group_backend B>
struct srs {
    using scalar = typename B::scalar;
    using g1 = typename B::g1;
    using g2 = typename B::g2;

    mvpoly::shape dims;
    std::vector<g1> monomials;
    std::vector<g1> axis_g1;
    std::vector<g2> multilinear_g2;
    mvpoly::grid<scalar> domain;
    typename B::g1_table table;

    std::size_t arity() const { return dims.size(); }
    std::size_t size() const { return monomials.size(); }
    const g2& g2_generator() const { return multilinear_g2[0]; }
    const g2& axis_g2(std::size_t j) const { return multilinear_g2[std::size_t(1) << j]; }

    /// g2^{prod_j (tau_j - w_j)}, expanded over the multilinear section.
    g2 shifted_product_g2(std::span<const scalar> w) const
    {
        const std::size_t m = arity();
        g2 acc = g2::identity();
        for (std::size_t mask = 0; mask < multilinear_g2.size(); ++mask) {
            scalar c = scalar::one();
            for (std::size_t j = 0; j < m; ++j)
                if (!(mask >> j & 1)) c = c * (-w[j]);
            if (!c.is_zero()) acc = acc + multilinear_g2[mask] * c;
        }
        return acc;
    }
};

/// Derives tau_j = HMAC-SHA512(entropy, "tau" || j) reduced into the field.
template <class F>
trapdoors<F> derive_trapdoors(std::size_t m, std::span<const std::uint8_t> entropy)
{
    trapdoors<F> t;
    for (std::uint32_t j = 0; j < m; ++j) {
        for (std::uint32_t ctr = 0;; ++ctr) {
            byte_writer msg;
            msg.put_magic("tau");
            msg.put_u32(j);
            msg.put_u32(ctr);
            auto tau = F::from_bytes_wide(algebra::hmac_sha512(entropy, msg.data()));
            if (!tau.is_zero()) {
                t.taus.push_back(tau);
                break;
            }
        }
    }
    return t;
}

/// Builds the reference string for `dims` from explicit trapdoors.
template <algebra::group_backend B>
srs<B> setup_srs_from_trapdoors(const mvpoly::shape& dims, const trapdoors<typename B::scalar>& td,
                                mvpoly::grid<typename B::scalar> domain)
{
    using scalar = typename B::scalar;
    const std::size_t n = mvpoly::shape_size(dims, max_srs_size);
    const std::size_t m = dims.size();
    if (m > max_order) throw shape_error("tensor order exceeds the supported maximum");
    if (td.taus.size() != m) throw shape_error("trapdoor count does not match tensor order");
    if (domain.dims() != dims) throw shape_error("grid shape does not match srs shape");

    srs<B> s;
    s.dims = dims;
    s.domain = std::move(domain);

    // exponents in lex order: the last axis varies fastest
    std::vector<scalar> exps(n);
    auto st = mvpoly::strides(dims);
    exps[0] = scalar::one();
    for (std::size_t k = 1; k < n; ++k) {
        std::size_t j = m - 1;
        while ((k / st[j]) % dims[j] == 0) --j;
        exps[k] = exps[k - st[j]] * td.taus[j];
    }
    const auto g = B::g1_generator();
    s.monomials.reserve(n);
    for (const auto& e : exps) s.monomials.push_back(g * e);
    for (const auto& tau : td.taus) s.axis_g1.push_back(g * tau);

    const auto h = B::g2_generator();
    s.multilinear_g2.resize(std::size_t(1) << m);
    std::vector<scalar> ml(std::size_t(1) << m, scalar::one());
    for (std::size_t mask = 1; mask < ml.size(); ++mask) {
        std::size_t low = static_cast<std::size_t>(__builtin_ctzll(mask));
        ml[mask] = ml[mask & (mask - 1)] * td.taus[low];
    }
    for (std::size_t mask = 0; mask < ml.size(); ++mask) s.multilinear_g2[mask] = h * ml[mask];

    s.table = B::make_table(s.monomials);
    return s;
}

/// Trusted setup: trapdoors derived from `entropy`, default grid {1..d_j}.
template <algebra::group_backend B>
std::pair<srs<B>, trapdoors<typename B::scalar>> setup_srs(const mvpoly::shape& dims,
                                                           std::span<const std::uint8_t> entropy)
{
    using scalar = typename B::scalar;
    mvpoly::shape_size(dims, max_srs_size);
    if (dims.size() > max_order) throw shape_error("tensor order exceeds the supported maximum");
    auto td = derive_trapdoors<scalar>(dims.size(), entropy);
    auto s = setup_srs_from_trapdoors<B>(dims, td, mvpoly::grid<scalar>::standard(dims));
    return {std::move(s), std::move(td)};
}

template <algebra::group_backend B>
std::pair<srs<B>, trapdoors<typename B::scalar>> setup_srs(const mvpoly::shape& dims, std::string_view entropy)
{
    return setup_srs<B>(dims, std::span(reinterpret_cast<const std::uint8_t*>(entropy.data()), entropy.size()));
}

inline constexpr std::uint16_t srs_version = 1;

/// "TCSR" | version u16 | shape header | monomials | axis elements | grid |
/// G2 count u32 | G2 elements.
template <algebra::group_backend B>
bytes encode_srs(const srs<B>& s)
{
    using scalar = typename B::scalar;
    byte_writer w;
    w.put_magic("TCSR");
    w.put_u16(srs_version);
    mvpoly::write_shape_header(w, s.dims);
    for (const auto& p : s.monomials) B::encode(p, w.grow(B::g1_bytes));
    for (const auto& p : s.axis_g1) B::encode(p, w.grow(B::g1_bytes));
    for (std::size_t j = 0; j < s.arity(); ++j)
        for (const auto& z : s.domain.axis(j)) z.to_bytes(w.grow(scalar::byte_size));
    w.put_u32(static_cast<std::uint32_t>(s.multilinear_g2.size()));
    for (const auto& q : s.multilinear_g2) B::encode(q, w.grow(B::g2_bytes));
    return std::move(w).take();
}

template <algebra::group_backend B>
srs<B> decode_srs(std::span<const std::uint8_t> in)
{
    using scalar = typename B::scalar;
    byte_reader r(in);
    r.expect_magic("TCSR");
    if (r.get_u16() != srs_version) throw format_error("unsupported srs version");
    srs<B> s;
    s.dims = mvpoly::read_shape_header(r, max_srs_size);
    const std::size_t m = s.dims.size();
    if (m > max_order) throw format_error("srs order exceeds the supported maximum");
    const std::size_t n = mvpoly::shape_size(s.dims);
    auto g1_at = [&] {
        auto p = B::decode_g1(r.get_bytes(B::g1_bytes));
        if (!p) throw format_error("invalid G1 element in srs");
        return *p;
    };
    s.monomials.reserve(n);
    for (std::size_t k = 0; k < n; ++k) s.monomials.push_back(g1_at());
    for (std::size_t j = 0; j < m; ++j) s.axis_g1.push_back(g1_at());
    std::vector<std::vector<scalar>> axes(m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < s.dims[j]; ++k) {
            auto z = scalar::from_bytes(r.get_bytes(scalar::byte_size));
            if (!z) throw format_error("non-canonical grid node in srs");
            axes[j].push_back(*z);
        }
    }
    s.domain = mvpoly::grid<scalar>(std::move(axes));
    if (r.get_u32() != (std::size_t(1) << m)) throw format_error("srs G2 section has the wrong length");
    for (std::size_t k = 0; k < (std::size_t(1) << m); ++k) {
        auto q = B::decode_g2(r.get_bytes(B::g2_bytes));
        if (!q) throw format_error("invalid G2 element in srs");
        s.multilinear_g2.push_back(*q);
    }
    r.expect_end();
    if (!(s.monomials[0] == B::g1_generator())) throw format_error("srs does not start with the generator");
    s.table = B::make_table(s.monomials);
    return s;
}

}  // namespace tensorcommit::commit
