#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tensorcommit/errors.hpp"

namespace tensorcommit::protocol {

/// Fixed-point scale used for activations.
inline constexpr int default_scale_bits = 16;

/// Largest |q| accepted by `quantize` for field F: below p/2 and within int64.
template <class F>
constexpr std::uint64_t quantize_limit()
{
    if constexpr (requires { F::modulus + 0u; })
        return std::min<std::uint64_t>(F::modulus / 2, std::uint64_t(1) << 62);
    else
        return std::uint64_t(1) << 62;
}

/// Round-half-even fixed point, negatives mapped to p - |q|.
template <class F>
F quantize_value(double v, int scale_bits = default_scale_bits)
{
    if (!std::isfinite(v)) throw overflow_error("cannot quantize a non-finite value");
    const double q = std::nearbyint(std::ldexp(v, scale_bits));
    if (std::fabs(q) >= static_cast<double>(quantize_limit<F>())) throw overflow_error("value exceeds the field half-range");
    return F::from_int(static_cast<std::int64_t>(q));
}

template <class F>
std::vector<F> quantize(std::span<const double> v, int scale_bits = default_scale_bits)
{
    std::vector<F> out;
    out.reserve(v.size());
    for (double x : v) out.push_back(quantize_value<F>(x, scale_bits));
    return out;
}

/// Inverse of the sign convention: the integer q with F(q) == v, if |q| is in range.
template <class F>
std::optional<std::int64_t> to_signed(const F& v)
{
    auto small = [](const F& x) -> std::optional<std::uint64_t> {
        std::array<std::uint8_t, F::byte_size> b{};
        x.to_bytes(b);
        std::uint64_t lo = 0;
        for (std::size_t i = 0; i < 8 && i < b.size(); ++i) lo |= std::uint64_t(b[i]) << (8 * i);
        for (std::size_t i = 8; i < b.size(); ++i)
            if (b[i]) return std::nullopt;
        if (lo >= quantize_limit<F>()) return std::nullopt;
        return lo;
    };
    if (auto p = small(v)) return static_cast<std::int64_t>(*p);
    if (auto n = small(-v)) return -static_cast<std::int64_t>(*n);
    return std::nullopt;
}

template <class F>
double dequantize_value(const F& v, int scale_bits = default_scale_bits)
{
    auto q = to_signed(v);
    if (!q) throw overflow_error("field element is outside the quantized range");
    return std::ldexp(static_cast<double>(*q), -scale_bits);
}

}  // namespace tensorcommit::protocol
