#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <string_view>

#include "tensorcommit/errors.hpp"

namespace tensorcommit::algebra {

namespace detail {

using u128 = unsigned __int128;
using limbs4 = std::array<std::uint64_t, 4>;

constexpr bool geq(const limbs4& a, const limbs4& b)
{
    for (int i = 3; i >= 0; --i) {
        if (a[i] != b[i]) return a[i] > b[i];
    }
    return true;
}

// a -= b, returns borrow
constexpr std::uint64_t sub_in_place(limbs4& a, const limbs4& b)
{
    std::uint64_t borrow = 0;
    for (int i = 0; i < 4; ++i) {
        u128 d = u128(a[i]) - b[i] - borrow;
        a[i] = static_cast<std::uint64_t>(d);
        borrow = static_cast<std::uint64_t>(d >> 64) & 1;
    }
    return borrow;
}

// a += b, returns carry
constexpr std::uint64_t add_in_place(limbs4& a, const limbs4& b)
{
    std::uint64_t carry = 0;
    for (int i = 0; i < 4; ++i) {
        u128 s = u128(a[i]) + b[i] + carry;
        a[i] = static_cast<std::uint64_t>(s);
        carry = static_cast<std::uint64_t>(s >> 64);
    }
    return carry;
}

// 2a mod p for a < p
constexpr limbs4 double_mod(limbs4 a, const limbs4& p)
{
    std::uint64_t top = a[3] >> 63;
    for (int i = 3; i > 0; --i) a[i] = (a[i] << 1) | (a[i - 1] >> 63);
    a[0] <<= 1;
    if (top || geq(a, p)) sub_in_place(a, p);
    return a;
}

}  // namespace detail

/// Prime field of at most 256 bits in Montgomery representation.
///
/// `Params` supplies `static constexpr std::array<std::uint64_t, 4> modulus`
/// (little-endian limbs, top bit clear) and a `name`. Montgomery constants are
/// derived at compile time.
template <class Params>
class prime_field {
public:
    using limbs = detail::limbs4;
    static constexpr limbs modulus = Params::modulus;
    static constexpr std::size_t byte_size = 32;

    constexpr prime_field() = default;

    static constexpr prime_field zero() { return {}; }
    static constexpr prime_field one() { return from_raw(r_mod_p); }

    static constexpr prime_field from_u64(std::uint64_t v) { return from_canonical({v, 0, 0, 0}); }

    static constexpr prime_field from_int(std::int64_t v)
    {
        if (v >= 0) return from_u64(static_cast<std::uint64_t>(v));
        // -(2^63) is safe: the negation happens in unsigned arithmetic
        return -from_u64(std::uint64_t(0) - static_cast<std::uint64_t>(v));
    }

    /// Requires `v < modulus`.
    static constexpr prime_field from_canonical(const limbs& v)
    {
        prime_field out;
        out.v_ = v;
        return out * from_raw(r2_mod_p);
    }

    /// Strict decoding: exactly 32 little-endian bytes holding a value below the modulus.
    static std::optional<prime_field> from_bytes(std::span<const std::uint8_t> in)
    {
        if (in.size() != byte_size) return std::nullopt;
        limbs v{};
        for (std::size_t i = 0; i < 32; ++i) v[i / 8] |= std::uint64_t(in[i]) << (8 * (i % 8));
        if (detail::geq(v, modulus)) return std::nullopt;
        return from_canonical(v);
    }

    /// Reduces 64 little-endian bytes (e.g. a SHA-512 digest) modulo p.
    static prime_field from_bytes_wide(std::span<const std::uint8_t> in)
    {
        limbs lo{}, hi{};
        for (std::size_t i = 0; i < 32 && i < in.size(); ++i) lo[i / 8] |= std::uint64_t(in[i]) << (8 * (i % 8));
        for (std::size_t i = 32; i < 64 && i < in.size(); ++i)
            hi[(i - 32) / 8] |= std::uint64_t(in[i]) << (8 * (i % 8));
        return reduce_any(lo) + reduce_any(hi) * from_raw(r2_mod_p);  // raw R2 is the field element 2^256
    }

    template <class Rng>
    static prime_field random(Rng& rng)
    {
        std::array<std::uint8_t, 64> buf;
        for (std::size_t i = 0; i < buf.size(); i += 8) {
            std::uint64_t w = rng();
            for (int b = 0; b < 8; ++b) buf[i + b] = static_cast<std::uint8_t>(w >> (8 * b));
        }
        return from_bytes_wide(buf);
    }

    /// Parses a non-negative decimal integer, reduced modulo p; a leading '-' negates.
    static prime_field from_decimal(std::string_view s)
    {
        bool neg = false;
        if (!s.empty() && s.front() == '-') {
            neg = true;
            s.remove_prefix(1);
        }
        if (s.empty()) throw format_error("empty field literal");
        prime_field acc = zero();
        const prime_field ten = from_u64(10);
        for (char c : s) {
            if (c < '0' || c > '9') throw format_error("bad field literal '" + std::string(s) + "'");
            acc = acc * ten + from_u64(static_cast<std::uint64_t>(c - '0'));
        }
        return neg ? -acc : acc;
    }

    constexpr limbs to_canonical() const
    {
        prime_field one_raw;
        one_raw.v_ = {1, 0, 0, 0};
        return (*this * one_raw).v_;
    }

    void to_bytes(std::span<std::uint8_t> out) const
    {
        auto c = to_canonical();
        for (std::size_t i = 0; i < 32; ++i) out[i] = static_cast<std::uint8_t>(c[i / 8] >> (8 * (i % 8)));
    }

    std::array<std::uint8_t, 32> to_bytes() const
    {
        std::array<std::uint8_t, 32> out;
        to_bytes(out);
        return out;
    }

    std::string to_decimal() const
    {
        auto c = to_canonical();
        if (c == limbs{}) return "0";
        std::string digits;
        while (c != limbs{}) {
            detail::u128 rem = 0;
            for (int i = 3; i >= 0; --i) {
                detail::u128 cur = (rem << 64) | c[i];
                c[i] = static_cast<std::uint64_t>(cur / 10);
                rem = cur % 10;
            }
            digits.push_back(static_cast<char>('0' + static_cast<int>(rem)));
        }
        std::reverse(digits.begin(), digits.end());
        return digits;
    }

    /// Small canonical values come back as-is; used by tests and the quantizer.
    std::optional<std::uint64_t> to_u64() const
    {
        auto c = to_canonical();
        if (c[1] | c[2] | c[3]) return std::nullopt;
        return c[0];
    }

    constexpr bool is_zero() const { return v_ == limbs{}; }

    friend constexpr bool operator==(const prime_field& a, const prime_field& b) { return a.v_ == b.v_; }

    friend constexpr prime_field operator+(prime_field a, const prime_field& b)
    {
        auto carry = detail::add_in_place(a.v_, b.v_);
        if (carry || detail::geq(a.v_, modulus)) detail::sub_in_place(a.v_, modulus);
        return a;
    }

    friend constexpr prime_field operator-(prime_field a, const prime_field& b)
    {
        if (detail::sub_in_place(a.v_, b.v_)) detail::add_in_place(a.v_, modulus);
        return a;
    }

    constexpr prime_field operator-() const { return zero() - *this; }

    friend constexpr prime_field operator*(const prime_field& a, const prime_field& b)
    {
        prime_field out;
        out.v_ = mont_mul(a.v_, b.v_);
        return out;
    }

    friend prime_field operator/(const prime_field& a, const prime_field& b) { return a * b.inverse(); }

    prime_field& operator+=(const prime_field& b) { return *this = *this + b; }
    prime_field& operator-=(const prime_field& b) { return *this = *this - b; }
    prime_field& operator*=(const prime_field& b) { return *this = *this * b; }
    prime_field& operator/=(const prime_field& b) { return *this = *this / b; }

    prime_field pow(limbs e) const
    {
        prime_field acc = one();
        for (int i = 3; i >= 0; --i) {
            for (int b = 63; b >= 0; --b) {
                acc = acc * acc;
                if ((e[i] >> b) & 1) acc = acc * *this;
            }
        }
        return acc;
    }

    prime_field pow(std::uint64_t e) const { return pow(limbs{e, 0, 0, 0}); }

    /// Fermat inverse; throws domain_error on zero.
    prime_field inverse() const
    {
        if (is_zero()) throw domain_error("inverse of zero");
        limbs e = modulus;
        detail::sub_in_place(e, limbs{2, 0, 0, 0});
        return pow(e);
    }

    friend std::ostream& operator<<(std::ostream& os, const prime_field& x) { return os << x.to_decimal(); }

private:
    static constexpr std::uint64_t compute_inv()
    {
        std::uint64_t x = 1;
        for (int i = 0; i < 7; ++i) x *= 2 - modulus[0] * x;
        return std::uint64_t(0) - x;
    }

    static constexpr limbs compute_r(int doublings)
    {
        limbs a{1, 0, 0, 0};
        for (int i = 0; i < doublings; ++i) a = detail::double_mod(a, modulus);
        return a;
    }

    static constexpr std::uint64_t inv = compute_inv();
    static constexpr limbs r_mod_p = compute_r(256);
    static constexpr limbs r2_mod_p = compute_r(512);

    static constexpr prime_field from_raw(const limbs& v)
    {
        prime_field out;
        out.v_ = v;
        return out;
    }

    static constexpr prime_field reduce_any(limbs v)
    {
        while (detail::geq(v, modulus)) detail::sub_in_place(v, modulus);
        return from_canonical(v);
    }

    static constexpr limbs mont_mul(const limbs& a, const limbs& b)
    {
        using detail::u128;
        std::uint64_t t[6] = {0, 0, 0, 0, 0, 0};
        for (int i = 0; i < 4; ++i) {
            std::uint64_t c = 0;
            for (int j = 0; j < 4; ++j) {
                u128 s = u128(t[j]) + u128(a[j]) * b[i] + c;
                t[j] = static_cast<std::uint64_t>(s);
                c = static_cast<std::uint64_t>(s >> 64);
            }
            u128 s = u128(t[4]) + c;
            t[4] = static_cast<std::uint64_t>(s);
            t[5] = static_cast<std::uint64_t>(s >> 64);

            std::uint64_t m = t[0] * inv;
            s = u128(t[0]) + u128(m) * modulus[0];
            c = static_cast<std::uint64_t>(s >> 64);
            for (int j = 1; j < 4; ++j) {
                s = u128(t[j]) + u128(m) * modulus[j] + c;
                t[j - 1] = static_cast<std::uint64_t>(s);
                c = static_cast<std::uint64_t>(s >> 64);
            }
            s = u128(t[4]) + c;
            t[3] = static_cast<std::uint64_t>(s);
            t[4] = t[5] + static_cast<std::uint64_t>(s >> 64);
        }
        limbs out{t[0], t[1], t[2], t[3]};
        if (t[4] || detail::geq(out, modulus)) detail::sub_in_place(out, modulus);
        return out;
    }

    limbs v_{};
};

struct bls12_381_fr_params {
    static constexpr std::array<std::uint64_t, 4> modulus = {
        0xffffffff00000001ULL, 0x53bda402fffe5bfeULL, 0x3339d80809a1d805ULL, 0x73eda753299d7d48ULL};
    static constexpr const char* name = "bls12-381/fr";
};

/// Scalar field of BLS12-381 (the group order r).
using fr = prime_field<bls12_381_fr_params>;

}  // namespace tensorcommit::algebra
