#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace tensorcommit::algebra {

/// How a multi-exponentiation (sum of scalar * base) is carried out.
enum class msm_strategy { naive, windowed };

/// Contract every group backend satisfies. Group elements are written
/// additively: `a * G` is the paper-style `g^a` and `+` is the group law.
///
/// The pairing is asymmetric on real curves, so commitments and proofs live in
/// g1 and the verifier-side powers of the trapdoors live in g2.
template <class B>
concept group_backend = requires(const typename B::g1& p, const typename B::g2& q, const typename B::scalar& s,
                                 std::span<const std::pair<typename B::g1, typename B::g2>> pairs,
                                 std::span<std::uint8_t> out, std::span<const std::uint8_t> in) {
    typename B::scalar;
    typename B::g1;
    typename B::g2;
    typename B::gt;
    typename B::g1_table;
    { B::name } -> std::convertible_to<std::string_view>;
    { B::g1_bytes } -> std::convertible_to<std::size_t>;
    { B::g2_bytes } -> std::convertible_to<std::size_t>;
    { B::g1_generator() } -> std::same_as<typename B::g1>;
    { B::g2_generator() } -> std::same_as<typename B::g2>;
    { p + p } -> std::same_as<typename B::g1>;
    { p - p } -> std::same_as<typename B::g1>;
    { p * s } -> std::same_as<typename B::g1>;
    { q * s } -> std::same_as<typename B::g2>;
    { p == p } -> std::same_as<bool>;
    { B::pair(p, q) } -> std::same_as<typename B::gt>;
    { B::pairing_product_is_one(pairs) } -> std::same_as<bool>;
    B::encode(p, out);
    B::encode(q, out);
    { B::decode_g1(in) } -> std::same_as<std::optional<typename B::g1>>;
    { B::decode_g2(in) } -> std::same_as<std::optional<typename B::g2>>;
};

}  // namespace tensorcommit::algebra
