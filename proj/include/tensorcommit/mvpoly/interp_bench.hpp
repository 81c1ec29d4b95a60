#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#if defined(__SSE__) || defined(__x86_64__)
#include <xmmintrin.h>
#define TENSORCOMMIT_HAVE_MXCSR 1
#endif

#include "tensorcommit/mvpoly/grid.hpp"
#include "tensorcommit/mvpoly/interpolate.hpp"
#include "tensorcommit/mvpoly/multipoly.hpp"

namespace tensorcommit::mvpoly {

/// Sets flush-to-zero and denormals-are-zero for the lifetime of the guard.
class flush_denormals {
public:
    flush_denormals()
    {
#ifdef TENSORCOMMIT_HAVE_MXCSR
        saved_ = _mm_getcsr();
        _mm_setcsr(saved_ | 0x8040u);
#endif
    }
    ~flush_denormals()
    {
#ifdef TENSORCOMMIT_HAVE_MXCSR
        _mm_setcsr(saved_);
#endif
    }
    flush_denormals(const flush_denormals&) = delete;
    flush_denormals& operator=(const flush_denormals&) = delete;

private:
    unsigned saved_ = 0;
};

enum class interp_method { newton, barycentric, gregory };

inline const char* method_name(interp_method m)
{
    switch (m) {
    case interp_method::newton: return "newton";
    case interp_method::barycentric: return "barycentric";
    case interp_method::gregory: return "gregory";
    }
    return "?";
}

struct interp_row {
    std::string method;
    std::string domain;
    std::size_t m = 0;
    std::size_t per_axis = 0;
    std::size_t total = 0;
    double interpolate_ns = 0;
    double eval_ns = 0;
};

/// Exact integer m-th root of D, or 0 when D is not a perfect m-th power.
inline std::size_t exact_root(std::size_t D, std::size_t m)
{
    if (m == 0) return 0;
    auto d = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(D), 1.0 / static_cast<double>(m))));
    for (std::size_t c = d > 1 ? d - 1 : 1; c <= d + 1; ++c) {
        std::size_t p = 1;
        for (std::size_t t = 0; t < m && p <= D; ++t) p *= c;
        if (p == D) return c;
    }
    return 0;
}

namespace detail {

template <class F, class Rng>
F sample(Rng& rng)
{
    if constexpr (std::is_same_v<F, double>)
        return std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    else
        return F::random(rng);
}

/// A point off every node: half-way between two nodes for doubles.
template <class F, class Rng>
std::vector<F> off_grid_point(const grid<F>& g, Rng& rng)
{
    std::vector<F> x;
    for (std::size_t j = 0; j < g.arity(); ++j) {
        if constexpr (std::is_same_v<F, double>) {
            const auto d = g.axis(j).size();
            x.push_back(static_cast<double>(rng() % d) + 1.5);
        } else {
            x.push_back(F::random(rng));
        }
    }
    return x;
}

inline double median_of(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace detail

/// Times one (method, m) cell on D = d^m points: median over `trials` of the
/// interpolation step and of one evaluation at an off-grid point.
template <class F>
interp_row bench_interp(interp_method method, std::size_t m, std::size_t D, std::size_t trials, std::uint64_t seed)
{
    using clock = std::chrono::steady_clock;
    const std::size_t d = exact_root(D, m);
    if (d < 2) throw domain_error("D must be a perfect m-th power with at least two nodes per axis");
    const shape dims(m, d);
    const auto g = grid<F>::standard(dims);
    std::mt19937_64 rng(seed ^ (m * 0x9e3779b97f4a7c15ULL) ^ static_cast<std::uint64_t>(method));
    std::vector<F> vals(D);
    for (auto& v : vals) v = detail::sample<F>(rng);
    const multi_poly<F> values(dims, vals);
    const auto x = detail::off_grid_point(g, rng);

    std::vector<double> t_interp, t_eval;
    volatile bool sink = false;
    for (std::size_t t = 0; t < std::max<std::size_t>(trials, 1); ++t) {
        F y{};
        auto t0 = clock::now();
        switch (method) {
        case interp_method::newton: {
            auto nf = newton_coefficients(values, g);
            auto t1 = clock::now();
            y = nf.eval(x);
            t_eval.push_back(std::chrono::duration<double, std::nano>(clock::now() - t1).count());
            t_interp.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count());
            break;
        }
        case interp_method::barycentric: {
            auto w = barycentric_weights(g);
            auto t1 = clock::now();
            y = barycentric_eval(values, g, w, x);
            t_eval.push_back(std::chrono::duration<double, std::nano>(clock::now() - t1).count());
            t_interp.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count());
            break;
        }
        case interp_method::gregory: {
            auto diffs = forward_differences(values, g);
            auto t1 = clock::now();
            y = gregory_eval_differences(diffs, g, x);
            t_eval.push_back(std::chrono::duration<double, std::nano>(clock::now() - t1).count());
            t_interp.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count());
            break;
        }
        }
        sink = sink ^ algebra::scalar_traits<F>::is_zero(y);
    }
    return {method_name(method), std::is_same_v<F, double> ? "float" : "field", m, d, D,
            detail::median_of(t_interp), detail::median_of(t_eval)};
}

/// Every (method, m) cell; float cells run with denormals flushed.
template <class F>
std::vector<interp_row> bench_interp_sweep(const std::vector<std::size_t>& ms, std::size_t D, std::size_t trials,
                                           std::uint64_t seed)
{
    std::vector<interp_row> rows;
    for (auto method : {interp_method::newton, interp_method::barycentric, interp_method::gregory}) {
        for (auto m : ms) {
            if constexpr (std::is_same_v<F, double>) {
                flush_denormals guard;
                rows.push_back(bench_interp<F>(method, m, D, trials, seed));
            } else {
                rows.push_back(bench_interp<F>(method, m, D, trials, seed));
            }
        }
    }
    return rows;
}

inline void write_interp_csv(std::ostream& os, const std::vector<interp_row>& rows)
{
    os << "method,m,per_axis,D,interpolate_ns,eval_ns\n";
    for (const auto& r : rows)
        os << r.method << ',' << r.m << ',' << r.per_axis << ',' << r.total << ','
           << static_cast<long long>(r.interpolate_ns) << ',' << static_cast<long long>(r.eval_ns) << '\n';
}

}  // namespace tensorcommit::mvpoly
