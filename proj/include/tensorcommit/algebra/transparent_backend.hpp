#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "tensorcommit/algebra/backend.hpp"

namespace tensorcommit::algebra {

/// Test backend whose group elements *are* their discrete logs.
///
/// `a * G` is stored as `a`, the pairing multiplies exponents, and the target
/// group adds them, so every pairing equation becomes an identity in F. Only
/// meaningful for testing algebra; it offers no hiding or binding at all.
template <class F>
struct transparent_backend {
    using scalar = F;
    static constexpr std::string_view name = "transparent";
    static constexpr std::size_t g1_bytes = F::byte_size;
    static constexpr std::size_t g2_bytes = F::byte_size;

    template <int Tag>
    struct element {
        F log{};

        static element identity() { return {}; }
        bool is_identity() const { return log.is_zero(); }

        friend element operator+(const element& a, const element& b) { return {a.log + b.log}; }
        friend element operator-(const element& a, const element& b) { return {a.log - b.log}; }
        element operator-() const { return {-log}; }
        friend element operator*(const element& a, const F& s) { return {a.log * s}; }
        element& operator+=(const element& b) { return *this = *this + b; }
        friend bool operator==(const element& a, const element& b) { return a.log == b.log; }
    };

    using g1 = element<1>;
    using g2 = element<2>;
    using gt = element<3>;
    using g1_table = std::vector<F>;

    static g1 g1_generator() { return {F::one()}; }
    static g2 g2_generator() { return {F::one()}; }

    static gt pair(const g1& a, const g2& b) { return {a.log * b.log}; }

    /// Pairing on raw exponents: the target element with exponent a*b.
    static gt transparent_pair(const F& a, const F& b) { return {a * b}; }

    static bool pairing_product_is_one(std::span<const std::pair<g1, g2>> pairs)
    {
        F acc = F::zero();
        for (const auto& [a, b] : pairs) acc += a.log * b.log;
        return acc.is_zero();
    }

    static g1_table make_table(std::span<const g1> bases)
    {
        g1_table t;
        t.reserve(bases.size());
        for (const auto& b : bases) t.push_back(b.log);
        return t;
    }

    static g1 msm(const g1_table& bases, std::span<const F> scalars, msm_strategy = msm_strategy::windowed)
    {
        F acc = F::zero();
        for (std::size_t i = 0; i < scalars.size(); ++i) {
            if (!scalars[i].is_zero()) acc += bases[i] * scalars[i];
        }
        return {acc};
    }

    template <int Tag>
    static void encode(const element<Tag>& e, std::span<std::uint8_t> out)
    {
        e.log.to_bytes(out);
    }

    static std::optional<g1> decode_g1(std::span<const std::uint8_t> in)
    {
        auto f = F::from_bytes(in);
        if (!f) return std::nullopt;
        return g1{*f};
    }

    static std::optional<g2> decode_g2(std::span<const std::uint8_t> in)
    {
        auto f = F::from_bytes(in);
        if (!f) return std::nullopt;
        return g2{*f};
    }
};

}  // namespace tensorcommit::algebra
