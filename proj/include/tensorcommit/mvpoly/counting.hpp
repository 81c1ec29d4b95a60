#pragma once

#include <cstdint>
#include <limits>

#include "tensorcommit/errors.hpp"

namespace tensorcommit::mvpoly {

/// Number of monomials of total degree <= n in m variables, C(m + n, n).
/// Throws overflow_error if the count does not fit in 64 bits.
inline std::uint64_t n_monomials(std::uint64_t m, std::uint64_t n)
{
    if (m < 1) throw domain_error("n_monomials needs m >= 1");
    // C(m+n, k) built up with k = min(m, n); every partial value is itself a binomial
    const std::uint64_t k = m < n ? m : n;
    const std::uint64_t top = m + n;
    if (top < m) throw overflow_error("n_monomials: m + n overflows");
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        acc = acc * (top - k + i) / i;
        if (acc > std::numeric_limits<std::uint64_t>::max()) throw overflow_error("n_monomials: count exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(acc);
}

/// True iff n^m <= D, without overflow.
inline bool pow_at_most(std::uint64_t n, std::uint64_t m, std::uint64_t D)
{
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 0; i < m; ++i) {
        acc *= n;
        if (acc > D) return false;
    }
    return true;
}

/// Largest n with n^m <= D (the per-axis degree admitted by a budget of D points).
inline std::uint64_t n_degree(std::uint64_t D, std::uint64_t m)
{
    if (m < 1) throw domain_error("n_degree needs m >= 1");
    if (D < 1) throw domain_error("n_degree needs D >= 1");
    std::uint64_t lo = 1, hi = D;
    while (lo < hi) {
        std::uint64_t mid = lo + (hi - lo + 1) / 2;
        if (pow_at_most(mid, m, D))
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

}  // namespace tensorcommit::mvpoly
