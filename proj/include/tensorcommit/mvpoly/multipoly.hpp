#pragma once

#include <span>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "tensorcommit/algebra/scalar_traits.hpp"
#include "tensorcommit/bytes.hpp"
#include "tensorcommit/errors.hpp"
#include "tensorcommit/mvpoly/shape.hpp"

namespace tensorcommit::mvpoly {

/// A point in F^m; written so that F is deduced from the polynomial argument
/// and braced lists or vectors convert implicitly.
template <class F>
using point_view = std::type_identity_t<std::span<const F>>;

/// Dense polynomial with per-variable degree bound d_j - 1. Coefficients are
/// stored in lexicographic exponent order: coeffs[lex_index(i)] multiplies
/// X_1^{i_1} ... X_m^{i_m}. Also used for plain tensors of samples.
template <class F>
class multi_poly {
public:
    multi_poly() = default;

    explicit multi_poly(shape dims) : dims_(std::move(dims)), coeffs_(shape_size(dims_), algebra::scalar_traits<F>::zero()) {}

    multi_poly(shape dims, std::vector<F> coeffs) : dims_(std::move(dims)), coeffs_(std::move(coeffs))
    {
        if (coeffs_.size() != shape_size(dims_)) throw shape_error("coefficient count does not match shape");
    }

    static multi_poly constant(shape dims, const F& c)
    {
        multi_poly p(std::move(dims));
        p.coeffs_[0] = c;
        return p;
    }

    const shape& dims() const { return dims_; }
    std::size_t arity() const { return dims_.size(); }
    std::size_t size() const { return coeffs_.size(); }

    std::span<const F> coeffs() const { return coeffs_; }
    std::span<F> coeffs() { return coeffs_; }

    const F& operator[](std::size_t off) const { return coeffs_[off]; }
    F& operator[](std::size_t off) { return coeffs_[off]; }

    const F& at(std::span<const std::size_t> i) const { return coeffs_[lex_index(i, dims_)]; }
    F& at(std::span<const std::size_t> i) { return coeffs_[lex_index(i, dims_)]; }

    bool is_zero() const
    {
        for (const auto& c : coeffs_)
            if (!algebra::scalar_traits<F>::is_zero(c)) return false;
        return true;
    }

    friend bool operator==(const multi_poly& a, const multi_poly& b) = default;

    friend multi_poly operator+(multi_poly a, const multi_poly& b)
    {
        a.check_same(b);
        for (std::size_t k = 0; k < a.size(); ++k) a.coeffs_[k] += b.coeffs_[k];
        return a;
    }

    friend multi_poly operator-(multi_poly a, const multi_poly& b)
    {
        a.check_same(b);
        for (std::size_t k = 0; k < a.size(); ++k) a.coeffs_[k] -= b.coeffs_[k];
        return a;
    }

private:
    void check_same(const multi_poly& b) const
    {
        if (dims_ != b.dims_) throw shape_error("polynomial shapes differ");
    }

    shape dims_;
    std::vector<F> coeffs_;
};

/// Horner evaluation of the monomial form, one axis at a time from the last.
template <class F>
F eval(const multi_poly<F>& f, point_view<F> x)
{
    if (x.size() != f.arity()) throw shape_error("evaluation point arity does not match polynomial");
    std::vector<F> cur(f.coeffs().begin(), f.coeffs().end());
    std::size_t n = cur.size();
    for (std::size_t j = f.arity(); j-- > 0;) {
        const std::size_t d = f.dims()[j];
        const std::size_t groups = n / d;
        for (std::size_t g = 0; g < groups; ++g) {
            F acc = cur[g * d + d - 1];
            for (std::size_t k = d - 1; k-- > 0;) acc = acc * x[j] + cur[g * d + k];
            cur[g] = acc;
        }
        n = groups;
    }
    return cur[0];
}

// Shared shape header: m (u32), then d_1..d_m (u32 each).
inline void write_shape_header(byte_writer& w, std::span<const std::size_t> dims)
{
    w.put_u32(static_cast<std::uint32_t>(dims.size()));
    for (auto d : dims) w.put_u32(static_cast<std::uint32_t>(d));
}

inline shape read_shape_header(byte_reader& r, std::size_t max_elems = std::size_t(1) << 28)
{
    auto m = r.get_u32();
    if (m == 0 || m > 64) throw format_error("shape header: bad axis count");
    shape dims(m);
    for (auto& d : dims) d = r.get_u32();
    try {
        shape_size(dims, max_elems);
    } catch (const std::exception& e) {
        throw format_error(std::string("shape header: ") + e.what());
    }
    return dims;
}

/// "TCPL" file: magic, shape header, coefficients in lex order.
template <class F>
bytes encode_poly(const multi_poly<F>& f)
{
    byte_writer w;
    w.put_magic("TCPL");
    write_shape_header(w, f.dims());
    for (const auto& c : f.coeffs()) c.to_bytes(w.grow(F::byte_size));
    return std::move(w).take();
}

template <class F>
multi_poly<F> decode_poly(std::span<const std::uint8_t> in)
{
    byte_reader r(in);
    r.expect_magic("TCPL");
    auto dims = read_shape_header(r);
    std::vector<F> coeffs;
    coeffs.reserve(shape_size(dims));
    for (std::size_t k = 0; k < shape_size(dims); ++k) {
        auto c = F::from_bytes(r.get_bytes(F::byte_size));
        if (!c) throw format_error("non-canonical field element in polynomial file");
        coeffs.push_back(*c);
    }
    r.expect_end();
    return multi_poly<F>(std::move(dims), std::move(coeffs));
}

}  // namespace tensorcommit::mvpoly
