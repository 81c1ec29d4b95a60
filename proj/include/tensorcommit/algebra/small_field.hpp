#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>

#include "tensorcommit/errors.hpp"

namespace tensorcommit::algebra {

/// Prime field Z/PZ for a prime P < 2^63, stored canonically in one word.
/// Small enough to hand-check; used as a toy exponent group in tests.
template <std::uint64_t P>
class small_field {
    static_assert(P > 2 && P < (std::uint64_t(1) << 63));

public:
    static constexpr std::uint64_t modulus = P;
    static constexpr std::size_t byte_size = 8;

    constexpr small_field() = default;

    static constexpr small_field zero() { return {}; }
    static constexpr small_field one() { return from_u64(1); }
    static constexpr small_field from_u64(std::uint64_t v) { return raw(v % P); }

    static constexpr small_field from_int(std::int64_t v)
    {
        auto m = static_cast<std::int64_t>(P);
        auto r = v % m;
        return raw(static_cast<std::uint64_t>(r < 0 ? r + m : r));
    }

    static std::optional<small_field> from_bytes(std::span<const std::uint8_t> in)
    {
        if (in.size() != byte_size) return std::nullopt;
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t(in[i]) << (8 * i);
        if (v >= P) return std::nullopt;
        return raw(v);
    }

    static small_field from_bytes_wide(std::span<const std::uint8_t> in)
    {
        unsigned __int128 acc = 0;
        for (std::size_t i = in.size(); i-- > 0;) acc = ((acc << 8) | in[i]) % P;
        return raw(static_cast<std::uint64_t>(acc));
    }

    template <class Rng>
    static small_field random(Rng& rng)
    {
        return from_u64(rng());
    }

    void to_bytes(std::span<std::uint8_t> out) const
    {
        for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(v_ >> (8 * i));
    }

    std::array<std::uint8_t, 8> to_bytes() const
    {
        std::array<std::uint8_t, 8> out;
        to_bytes(out);
        return out;
    }

    constexpr std::uint64_t value() const { return v_; }
    std::optional<std::uint64_t> to_u64() const { return v_; }
    std::string to_decimal() const { return std::to_string(v_); }
    constexpr bool is_zero() const { return v_ == 0; }

    friend constexpr bool operator==(small_field a, small_field b) { return a.v_ == b.v_; }
    friend constexpr small_field operator+(small_field a, small_field b)
    {
        std::uint64_t s = a.v_ + b.v_;
        return raw(s >= P ? s - P : s);
    }
    friend constexpr small_field operator-(small_field a, small_field b)
    {
        return raw(a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + P - b.v_);
    }
    constexpr small_field operator-() const { return zero() - *this; }
    friend constexpr small_field operator*(small_field a, small_field b)
    {
        return raw(static_cast<std::uint64_t>((unsigned __int128)a.v_ * b.v_ % P));
    }
    friend small_field operator/(small_field a, small_field b) { return a * b.inverse(); }

    small_field& operator+=(small_field b) { return *this = *this + b; }
    small_field& operator-=(small_field b) { return *this = *this - b; }
    small_field& operator*=(small_field b) { return *this = *this * b; }
    small_field& operator/=(small_field b) { return *this = *this / b; }

    constexpr small_field pow(std::uint64_t e) const
    {
        small_field acc = one(), base = *this;
        for (; e; e >>= 1) {
            if (e & 1) acc = acc * base;
            base = base * base;
        }
        return acc;
    }

    small_field inverse() const
    {
        if (is_zero()) throw domain_error("inverse of zero");
        return pow(P - 2);
    }

    friend std::ostream& operator<<(std::ostream& os, small_field x) { return os << x.v_; }

private:
    static constexpr small_field raw(std::uint64_t v)
    {
        small_field f;
        f.v_ = v;
        return f;
    }

    std::uint64_t v_ = 0;
};

/// The Mersenne prime 2^61 - 1.
using f61 = small_field<(std::uint64_t(1) << 61) - 1>;

}  // namespace tensorcommit::algebra
