#pragma once

#include <span>
#include <vector>

#include "tensorcommit/algebra/scalar_traits.hpp"
#include "tensorcommit/errors.hpp"
#include "tensorcommit/mvpoly/grid.hpp"
#include "tensorcommit/mvpoly/multipoly.hpp"

namespace tensorcommit::mvpoly {

// Interpolation on tensor grids. Every method works one axis at a time: a
// univariate transform is applied to each fiber along axis j, which is exactly
// the tensor-product structure of the interpolant.

namespace detail {

template <class F>
void check_grid(const multi_poly<F>& values, const grid<F>& g)
{
    if (values.dims() != g.dims()) throw shape_error("sample tensor shape does not match grid shape");
}

/// Applies `fn(fiber)` to every fiber along `axis`, gathering and scattering.
template <class F, class Fn>
void transform_axis(std::span<F> data, std::span<const std::size_t> dims, std::size_t axis, Fn&& fn)
{
    std::vector<F> fiber(dims[axis]);
    for_each_fiber(dims, axis, [&](std::size_t base, std::size_t stride) {
        for (std::size_t r = 0; r < fiber.size(); ++r) fiber[r] = data[base + r * stride];
        fn(std::span<F>(fiber));
        for (std::size_t r = 0; r < fiber.size(); ++r) data[base + r * stride] = fiber[r];
    });
}

/// Contracts the trailing axis of a row-major block with `w`, in place.
template <class F>
std::size_t contract_last(std::vector<F>& cur, std::size_t n, std::span<const F> w)
{
    const std::size_t d = w.size();
    const std::size_t groups = n / d;
    for (std::size_t gi = 0; gi < groups; ++gi) {
        F acc = algebra::scalar_traits<F>::zero();
        for (std::size_t k = 0; k < d; ++k) acc = acc + w[k] * cur[gi * d + k];
        cur[gi] = acc;
    }
    return groups;
}

/// sum_i (prod_j w_j[i_j]) T[i]
template <class F>
F contract_all(std::span<const F> values, const std::vector<std::vector<F>>& weights)
{
    std::vector<F> cur(values.begin(), values.end());
    std::size_t n = cur.size();
    for (std::size_t j = weights.size(); j-- > 0;) n = contract_last<F>(cur, n, weights[j]);
    return cur[0];
}

/// Monomial coefficients of the Lagrange basis on `nodes`:
/// result[k * d + l] = coefficient of X^k in L_l(X).
template <class F>
std::vector<F> lagrange_basis_matrix(std::span<const F> nodes)
{
    using tr = algebra::scalar_traits<F>;
    const std::size_t d = nodes.size();
    // master(X) = prod_r (X - z_r), degree d, coefficients low to high
    std::vector<F> master(d + 1, tr::zero());
    master[0] = tr::one();
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t k = r + 1; k > 0; --k) master[k] = master[k - 1] - nodes[r] * master[k];
        master[0] = tr::zero() - nodes[r] * master[0];
    }
    std::vector<F> out(d * d, tr::zero());
    std::vector<F> quot(d);
    std::vector<F> denom(d);
    for (std::size_t l = 0; l < d; ++l) {
        F denom_l = tr::one();
        for (std::size_t r = 0; r < d; ++r)
            if (r != l) denom_l = denom_l * (nodes[l] - nodes[r]);
        denom[l] = denom_l;
    }
    batch_invert<F>(denom, "repeated interpolation node on an axis");
    for (std::size_t l = 0; l < d; ++l) {
        // master / (X - z_l) by synthetic division
        F carry = master[d];
        for (std::size_t k = d; k-- > 0;) {
            quot[k] = carry;
            carry = master[k] + nodes[l] * carry;
        }
        for (std::size_t k = 0; k < d; ++k) out[k * d + l] = quot[k] * denom[l];
    }
    return out;
}

}  // namespace detail

/// Unique polynomial with per-axis degree < d_j matching `values` on `g`,
/// in monomial form.
template <class F>
multi_poly<F> interpolate_lagrange(const multi_poly<F>& values, const grid<F>& g)
{
    detail::check_grid(values, g);
    multi_poly<F> out = values;
    std::vector<F> tmp;
    for (std::size_t j = 0; j < g.arity(); ++j) {
        const auto& nodes = g.axis(j);
        const std::size_t d = nodes.size();
        auto basis = detail::lagrange_basis_matrix<F>(nodes);
        tmp.resize(d);
        detail::transform_axis<F>(out.coeffs(), out.dims(), j, [&](std::span<F> fiber) {
            for (std::size_t k = 0; k < d; ++k) {
                F acc = algebra::scalar_traits<F>::zero();
                for (std::size_t l = 0; l < d; ++l) acc = acc + basis[k * d + l] * fiber[l];
                tmp[k] = acc;
            }
            std::copy(tmp.begin(), tmp.end(), fiber.begin());
        });
    }
    return out;
}

/// Tensor-product Newton form: coefficients a_i of prod_j N_{j,i_j}(X_j),
/// with N_{j,r}(X) = prod_{t<r} (X - zeta_{j,t}).
template <class F>
struct newton_form {
    grid<F> nodes;
    multi_poly<F> coeffs;

    /// Expands the Newton basis into the monomial basis, axis by axis.
    multi_poly<F> to_monomial() const
    {
        multi_poly<F> out = coeffs;
        for (std::size_t j = 0; j < nodes.arity(); ++j) {
            const auto& z = nodes.axis(j);
            const std::size_t d = z.size();
            std::vector<F> acc(d);
            detail::transform_axis<F>(out.coeffs(), out.dims(), j, [&](std::span<F> a) {
                // Horner on the Newton form: p = a_{d-1}; p = p (X - z_r) + a_r
                std::fill(acc.begin(), acc.end(), algebra::scalar_traits<F>::zero());
                acc[0] = a[d - 1];
                std::size_t deg = 0;
                for (std::size_t r = d - 1; r-- > 0;) {
                    // acc *= (X - z_r)
                    for (std::size_t k = deg + 1; k > 0; --k) acc[k] = acc[k - 1] - z[r] * acc[k];
                    acc[0] = algebra::scalar_traits<F>::zero() - z[r] * acc[0];
                    ++deg;
                    acc[0] = acc[0] + a[r];
                }
                std::copy(acc.begin(), acc.end(), a.begin());
            });
        }
        return out;
    }

    F eval(std::span<const F> x) const
    {
        if (x.size() != nodes.arity()) throw shape_error("evaluation point arity does not match grid");
        std::vector<std::vector<F>> w;
        for (std::size_t j = 0; j < nodes.arity(); ++j) {
            const auto& z = nodes.axis(j);
            std::vector<F> basis(z.size());
            basis[0] = algebra::scalar_traits<F>::one();
            for (std::size_t r = 1; r < z.size(); ++r) basis[r] = basis[r - 1] * (x[j] - z[r - 1]);
            w.push_back(std::move(basis));
        }
        return detail::contract_all<F>(coeffs.coeffs(), w);
    }
};

/// Divided differences along each axis (forward substitution in the
/// triangular Newton system).
template <class F>
newton_form<F> newton_coefficients(const multi_poly<F>& values, const grid<F>& g)
{
    detail::check_grid(values, g);
    newton_form<F> out{g, values};
    auto data = out.coeffs.coeffs();
    const auto& dims = out.coeffs.dims();
    std::vector<F> inv;
    for (std::size_t j = 0; j < g.arity(); ++j) {
        const auto& z = g.axis(j);
        const std::size_t d = z.size();
        for (std::size_t level = 1; level < d; ++level) {
            // 1 / (z_i - z_{i-level}) for i = level..d-1
            inv.resize(d - level);
            for (std::size_t i = level; i < d; ++i) inv[i - level] = z[i] - z[i - level];
            batch_invert<F>(inv, "repeated interpolation node on an axis");
            for_each_fiber(dims, j, [&](std::size_t base, std::size_t stride) {
                for (std::size_t i = d - 1; i >= level; --i) {
                    auto hi = base + i * stride;
                    data[hi] = (data[hi] - data[hi - stride]) * inv[i - level];
                }
            });
        }
    }
    return out;
}

/// Newton route to the monomial form; agrees with interpolate_lagrange.
template <class F>
multi_poly<F> newton_interpolate(const multi_poly<F>& values, const grid<F>& g)
{
    return newton_coefficients(values, g).to_monomial();
}

/// Per-axis barycentric weights beta_{j,l} = 1 / prod_{r != l} (z_l - z_r).
template <class F>
std::vector<std::vector<F>> barycentric_weights(const grid<F>& g)
{
    std::vector<std::vector<F>> out;
    for (std::size_t j = 0; j < g.arity(); ++j) {
        const auto& z = g.axis(j);
        std::vector<F> w(z.size(), algebra::scalar_traits<F>::one());
        for (std::size_t l = 0; l < z.size(); ++l)
            for (std::size_t r = 0; r < z.size(); ++r)
                if (r != l) w[l] = w[l] * (z[l] - z[r]);
        batch_invert<F>(w, "repeated interpolation node on an axis");
        out.push_back(std::move(w));
    }
    return out;
}

/// Evaluates the interpolant of `values` at `x` in barycentric form given
/// precomputed weights. A coordinate that hits a node collapses that axis to
/// the stored samples.
template <class F>
F barycentric_eval(const multi_poly<F>& values, const grid<F>& g, const std::vector<std::vector<F>>& weights,
                   point_view<F> x)
{
    using tr = algebra::scalar_traits<F>;
    detail::check_grid(values, g);
    if (x.size() != g.arity()) throw shape_error("evaluation point arity does not match grid");
    std::vector<std::vector<F>> factors;
    for (std::size_t j = 0; j < g.arity(); ++j) {
        const auto& z = g.axis(j);
        std::vector<F> c(z.size(), tr::zero());
        std::size_t hit = z.size();
        for (std::size_t l = 0; l < z.size(); ++l)
            if (x[j] == z[l]) hit = l;
        if (hit < z.size()) {
            c[hit] = tr::one();
        } else {
            std::vector<F> diff(z.size());
            for (std::size_t l = 0; l < z.size(); ++l) diff[l] = x[j] - z[l];
            batch_invert<F>(diff);
            F total = tr::zero();
            for (std::size_t l = 0; l < z.size(); ++l) {
                c[l] = weights[j][l] * diff[l];
                total = total + c[l];
            }
            F inv_total = tr::one() / total;
            for (auto& v : c) v = v * inv_total;
        }
        factors.push_back(std::move(c));
    }
    return detail::contract_all<F>(values.coeffs(), factors);
}

template <class F>
F barycentric_eval(const multi_poly<F>& values, const grid<F>& g, point_view<F> x)
{
    return barycentric_eval(values, g, barycentric_weights(g), x);
}

/// Mixed forward differences Delta^r T[0,...,0] for every r, in place of T.
/// Requires a uniform grid.
template <class F>
multi_poly<F> forward_differences(const multi_poly<F>& values, const grid<F>& g)
{
    detail::check_grid(values, g);
    if (!g.is_uniform()) throw domain_error("Gregory interpolation needs equally spaced nodes on every axis");
    multi_poly<F> out = values;
    auto data = out.coeffs();
    for (std::size_t j = 0; j < g.arity(); ++j) {
        const std::size_t d = g.axis(j).size();
        for_each_fiber(out.dims(), j, [&](std::size_t base, std::size_t stride) {
            for (std::size_t level = 1; level < d; ++level)
                for (std::size_t i = d - 1; i >= level; --i)
                    data[base + i * stride] = data[base + i * stride] - data[base + (i - 1) * stride];
        });
    }
    return out;
}

/// Gregory-Newton evaluation from precomputed forward differences:
/// sum_r prod_j C(s_j, r_j) Delta^r T[0], with s_j = (x_j - z_{j,0}) / h_j
/// and C(s, r) = prod_{t<r} (s - t) / r!.
template <class F>
F gregory_eval_differences(const multi_poly<F>& diffs, const grid<F>& g, point_view<F> x)
{
    using tr = algebra::scalar_traits<F>;
    if (x.size() != g.arity()) throw shape_error("evaluation point arity does not match grid");
    std::vector<std::vector<F>> factors;
    for (std::size_t j = 0; j < g.arity(); ++j) {
        auto h = g.spacing(j);
        if (!h) throw domain_error("Gregory interpolation needs equally spaced nodes on every axis");
        const std::size_t d = g.axis(j).size();
        F s = (x[j] - g.axis(j)[0]) / *h;
        std::vector<F> inv_r(d > 1 ? d - 1 : 0);
        for (std::size_t r = 1; r < d; ++r) inv_r[r - 1] = tr::from_int(static_cast<std::int64_t>(r));
        batch_invert<F>(inv_r, "field characteristic too small for Gregory weights");
        std::vector<F> c(d);
        c[0] = tr::one();
        for (std::size_t r = 1; r < d; ++r)
            c[r] = c[r - 1] * (s - tr::from_int(static_cast<std::int64_t>(r - 1))) * inv_r[r - 1];
        factors.push_back(std::move(c));
    }
    return detail::contract_all<F>(diffs.coeffs(), factors);
}

template <class F>
F gregory_eval(const multi_poly<F>& values, const grid<F>& g, point_view<F> x)
{
    return gregory_eval_differences(forward_differences(values, g), g, x);
}

}  // namespace tensorcommit::mvpoly
