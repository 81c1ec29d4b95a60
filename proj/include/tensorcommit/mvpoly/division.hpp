#pragma once

#include <span>
#include <utility>
#include <vector>

#include "tensorcommit/algebra/scalar_traits.hpp"
#include "tensorcommit/errors.hpp"
#include "tensorcommit/mvpoly/multipoly.hpp"

namespace tensorcommit::mvpoly {

// Quotients and remainders keep the shape of the dividend so that they can be
// committed against the same reference string; the top coefficient of q on
// the divided axis and every non-constant coefficient of r on it are zero.

template <class F>
struct division_result {
    multi_poly<F> q;
    multi_poly<F> r;
};

/// f = q * (X_axis - v) + r by synthetic division along every fiber of `axis`.
template <class F>
division_result<F> divide_by_linear(const multi_poly<F>& f, std::size_t axis, const F& v)
{
    if (axis >= f.arity()) throw shape_error("division axis out of range");
    using tr = algebra::scalar_traits<F>;
    division_result<F> out{multi_poly<F>(f.dims()), multi_poly<F>(f.dims())};
    const std::size_t d = f.dims()[axis];
    auto src = f.coeffs();
    auto q = out.q.coeffs();
    auto r = out.r.coeffs();
    for_each_fiber(f.dims(), axis, [&](std::size_t base, std::size_t stride) {
        F carry = tr::zero();
        for (std::size_t k = d; k-- > 1;) {
            carry = carry * v + src[base + k * stride];
            q[base + (k - 1) * stride] = carry;
        }
        r[base] = carry * v + src[base];
    });
    return out;
}

template <class F>
struct opening_quotients {
    std::vector<multi_poly<F>> q;
    F y;
};

/// Peels off one variable at a time: r_0 = f, r_{i-1} = q_i (X_i - w_i) + r_i,
/// so that f - f(w) = sum_i q_i (X_i - w_i) and y = r_m.
template <class F>
opening_quotients<F> open_quotients(const multi_poly<F>& f, point_view<F> w)
{
    if (w.size() != f.arity()) throw shape_error("opening point arity does not match polynomial");
    opening_quotients<F> out;
    multi_poly<F> rem = f;
    for (std::size_t i = 0; i < f.arity(); ++i) {
        auto [q, r] = divide_by_linear(rem, i, w[i]);
        out.q.push_back(std::move(q));
        rem = std::move(r);
    }
    out.y = rem[0];
    return out;
}

/// Exact quotient of f by prod_j (X_j - w_j). Returns false if some
/// remainder along the way is nonzero.
template <class F>
bool divide_by_point_product(const multi_poly<F>& f, point_view<F> w, multi_poly<F>& quotient)
{
    if (w.size() != f.arity()) throw shape_error("opening point arity does not match polynomial");
    multi_poly<F> cur = f;
    for (std::size_t i = 0; i < f.arity(); ++i) {
        auto [q, r] = divide_by_linear(cur, i, w[i]);
        if (!r.is_zero()) return false;
        cur = std::move(q);
    }
    quotient = std::move(cur);
    return true;
}

/// p * (X_axis - v); the caller guarantees the top coefficient on `axis` is
/// zero so the product fits the same shape.
template <class F>
multi_poly<F> multiply_by_linear(const multi_poly<F>& p, std::size_t axis, const F& v)
{
    if (axis >= p.arity()) throw shape_error("axis out of range");
    const std::size_t d = p.dims()[axis];
    multi_poly<F> out(p.dims());
    auto src = p.coeffs();
    auto dst = out.coeffs();
    bool overflow = false;
    for_each_fiber(p.dims(), axis, [&](std::size_t base, std::size_t stride) {
        if (!algebra::scalar_traits<F>::is_zero(src[base + (d - 1) * stride])) overflow = true;
        for (std::size_t k = 0; k < d; ++k) {
            F acc = algebra::scalar_traits<F>::zero() - v * src[base + k * stride];
            if (k > 0) acc = acc + src[base + (k - 1) * stride];
            dst[base + k * stride] = acc;
        }
    });
    if (overflow) throw shape_error("product exceeds the degree bound of the shape");
    return out;
}

}  // namespace tensorcommit::mvpoly
