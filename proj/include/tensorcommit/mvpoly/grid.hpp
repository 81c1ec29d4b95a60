#pragma once

#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "tensorcommit/algebra/scalar_traits.hpp"
#include "tensorcommit/errors.hpp"
#include "tensorcommit/mvpoly/shape.hpp"

namespace tensorcommit::mvpoly {

/// Tensor-product evaluation domain Omega_1 x ... x Omega_m.
template <class F>
class grid {
public:
    grid() = default;
    explicit grid(std::vector<std::vector<F>> axes) : axes_(std::move(axes))
    {
        if (axes_.empty()) throw shape_error("grid needs at least one axis");
        for (const auto& a : axes_)
            if (a.empty()) throw shape_error("grid axis without nodes");
    }

    /// Omega_j = {1, 2, ..., d_j}.
    static grid standard(std::span<const std::size_t> dims)
    {
        shape_size(dims);
        std::vector<std::vector<F>> axes;
        for (auto d : dims) {
            std::vector<F> a;
            a.reserve(d);
            for (std::size_t r = 0; r < d; ++r) a.push_back(algebra::scalar_traits<F>::from_int(static_cast<std::int64_t>(r + 1)));
            axes.push_back(std::move(a));
        }
        return grid(std::move(axes));
    }

    std::size_t arity() const { return axes_.size(); }
    const std::vector<F>& axis(std::size_t j) const { return axes_[j]; }
    const std::vector<std::vector<F>>& axes() const { return axes_; }

    shape dims() const
    {
        shape d;
        for (const auto& a : axes_) d.push_back(a.size());
        return d;
    }

    std::vector<F> point(std::span<const std::size_t> i) const
    {
        if (i.size() != axes_.size()) throw shape_error("multi-index arity does not match grid");
        std::vector<F> x;
        for (std::size_t j = 0; j < i.size(); ++j) {
            if (i[j] >= axes_[j].size()) throw std::out_of_range("grid index out of range");
            x.push_back(axes_[j][i[j]]);
        }
        return x;
    }

    /// Node spacing h_j if axis j is an arithmetic progression with h_j != 0.
    std::optional<F> spacing(std::size_t j) const
    {
        const auto& a = axes_[j];
        if (a.size() == 1) return algebra::scalar_traits<F>::one();
        F h = a[1] - a[0];
        if (algebra::scalar_traits<F>::is_zero(h)) return std::nullopt;
        F expect = a[0];
        for (std::size_t r = 1; r < a.size(); ++r) {
            expect = expect + h;
            if (!(a[r] == expect)) return std::nullopt;
        }
        return h;
    }

    bool is_uniform() const
    {
        for (std::size_t j = 0; j < axes_.size(); ++j)
            if (!spacing(j)) return false;
        return true;
    }

    friend bool operator==(const grid&, const grid&) = default;

private:
    std::vector<std::vector<F>> axes_;
};

/// In-place batch inversion (one inversion plus 3n multiplications).
/// Throws domain_error if any entry is zero; `what` names the failure.
template <class F>
void batch_invert(std::span<F> v, const char* what = "zero divisor")
{
    using tr = algebra::scalar_traits<F>;
    if (v.empty()) return;
    if constexpr (std::is_floating_point_v<F>) {
        // running products over- or underflow in floating point
        for (auto& x : v) {
            if (x == 0) throw domain_error(what);
            x = 1 / x;
        }
        return;
    }
    std::vector<F> prefix(v.size());
    F acc = tr::one();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (tr::is_zero(v[i])) throw domain_error(what);
        prefix[i] = acc;
        acc = acc * v[i];
    }
    F inv = tr::one() / acc;
    for (std::size_t i = v.size(); i-- > 0;) {
        F vi = v[i];
        v[i] = inv * prefix[i];
        inv = inv * vi;
    }
}

}  // namespace tensorcommit::mvpoly
