#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <blst.h>

#include "tensorcommit/algebra/backend.hpp"
#include "tensorcommit/algebra/prime_field.hpp"

namespace tensorcommit::algebra {

/// BLS12-381 via blst. Scalars are the curve's group order r.
struct bls12_381_backend {
    using scalar = fr;
    static constexpr std::string_view name = "bls12-381";
    static constexpr std::size_t g1_bytes = 48;
    static constexpr std::size_t g2_bytes = 96;

    class g1 {
    public:
        g1() = default;
        explicit g1(const blst_p1& p) : p_(p) {}

        static g1 identity() { return {}; }
        bool is_identity() const { return blst_p1_is_inf(&p_); }
        const blst_p1& raw() const { return p_; }

        friend g1 operator+(const g1& a, const g1& b)
        {
            g1 out;
            blst_p1_add_or_double(&out.p_, &a.p_, &b.p_);
            return out;
        }
        g1 operator-() const
        {
            g1 out = *this;
            blst_p1_cneg(&out.p_, true);
            return out;
        }
        friend g1 operator-(const g1& a, const g1& b) { return a + (-b); }
        friend g1 operator*(const g1& a, const scalar& s)
        {
            auto le = s.to_bytes();
            g1 out;
            blst_p1_mult(&out.p_, &a.p_, le.data(), 255);
            return out;
        }
        g1& operator+=(const g1& b) { return *this = *this + b; }
        friend bool operator==(const g1& a, const g1& b) { return blst_p1_is_equal(&a.p_, &b.p_); }

    private:
        blst_p1 p_{};
    };

    class g2 {
    public:
        g2() = default;
        explicit g2(const blst_p2& p) : p_(p) {}

        static g2 identity() { return {}; }
        bool is_identity() const { return blst_p2_is_inf(&p_); }
        const blst_p2& raw() const { return p_; }

        friend g2 operator+(const g2& a, const g2& b)
        {
            g2 out;
            blst_p2_add_or_double(&out.p_, &a.p_, &b.p_);
            return out;
        }
        g2 operator-() const
        {
            g2 out = *this;
            blst_p2_cneg(&out.p_, true);
            return out;
        }
        friend g2 operator-(const g2& a, const g2& b) { return a + (-b); }
        friend g2 operator*(const g2& a, const scalar& s)
        {
            auto le = s.to_bytes();
            g2 out;
            blst_p2_mult(&out.p_, &a.p_, le.data(), 255);
            return out;
        }
        g2& operator+=(const g2& b) { return *this = *this + b; }
        friend bool operator==(const g2& a, const g2& b) { return blst_p2_is_equal(&a.p_, &b.p_); }

    private:
        blst_p2 p_{};
    };

    class gt {
    public:
        gt() : f_(*blst_fp12_one()) {}
        explicit gt(const blst_fp12& f) : f_(f) {}
        friend bool operator==(const gt& a, const gt& b) { return blst_fp12_is_equal(&a.f_, &b.f_); }
        bool is_one() const { return blst_fp12_is_one(&f_); }

    private:
        blst_fp12 f_;
    };

    using g1_table = std::vector<blst_p1_affine>;

    static g1 g1_generator() { return g1(*blst_p1_generator()); }
    static g2 g2_generator() { return g2(*blst_p2_generator()); }

    static gt pair(const g1& a, const g2& b)
    {
        if (a.is_identity() || b.is_identity()) return gt{};
        blst_p1_affine pa;
        blst_p2_affine qa;
        blst_p1_to_affine(&pa, &a.raw());
        blst_p2_to_affine(&qa, &b.raw());
        blst_fp12 f;
        blst_miller_loop(&f, &qa, &pa);
        blst_final_exp(&f, &f);
        return gt(f);
    }

    /// Product of pairings equals one, with a single final exponentiation.
    static bool pairing_product_is_one(std::span<const std::pair<g1, g2>> pairs)
    {
        blst_fp12 acc = *blst_fp12_one();
        for (const auto& [a, b] : pairs) {
            if (a.is_identity() || b.is_identity()) continue;
            blst_p1_affine pa;
            blst_p2_affine qa;
            blst_p1_to_affine(&pa, &a.raw());
            blst_p2_to_affine(&qa, &b.raw());
            blst_fp12 f;
            blst_miller_loop(&f, &qa, &pa);
            blst_fp12_mul(&acc, &acc, &f);
        }
        blst_final_exp(&acc, &acc);
        return blst_fp12_is_one(&acc);
    }

    static g1_table make_table(std::span<const g1> bases)
    {
        g1_table t(bases.size());
        std::vector<const blst_p1*> ptrs(bases.size());
        for (std::size_t i = 0; i < bases.size(); ++i) ptrs[i] = &bases[i].raw();
        if (!bases.empty()) blst_p1s_to_affine(t.data(), ptrs.data(), bases.size());
        return t;
    }

    static g1 msm(const g1_table& bases, std::span<const scalar> scalars, msm_strategy strategy = msm_strategy::windowed)
    {
        const std::size_t n = scalars.size();
        if (strategy == msm_strategy::naive || n < 2) {
            g1 acc;
            for (std::size_t i = 0; i < n; ++i) {
                if (scalars[i].is_zero()) continue;
                blst_p1 p;
                blst_p1_from_affine(&p, &bases[i]);
                acc += g1(p) * scalars[i];
            }
            return acc;
        }
        std::vector<std::array<std::uint8_t, 32>> le(n);
        std::vector<const std::uint8_t*> sptr(n);
        std::vector<const blst_p1_affine*> pptr(n);
        for (std::size_t i = 0; i < n; ++i) {
            le[i] = scalars[i].to_bytes();
            sptr[i] = le[i].data();
            pptr[i] = &bases[i];
        }
        std::vector<limb_t> scratch(blst_p1s_mult_pippenger_scratch_sizeof(n) / sizeof(limb_t) + 1);
        blst_p1 out;
        blst_p1s_mult_pippenger(&out, pptr.data(), n, sptr.data(), 255, scratch.data());
        return g1(out);
    }

    static void encode(const g1& p, std::span<std::uint8_t> out) { blst_p1_compress(out.data(), &p.raw()); }
    static void encode(const g2& p, std::span<std::uint8_t> out) { blst_p2_compress(out.data(), &p.raw()); }

    static std::optional<g1> decode_g1(std::span<const std::uint8_t> in)
    {
        if (in.size() != g1_bytes) return std::nullopt;
        blst_p1_affine a;
        if (blst_p1_uncompress(&a, in.data()) != BLST_SUCCESS) return std::nullopt;
        if (!blst_p1_affine_in_g1(&a)) return std::nullopt;
        blst_p1 p;
        blst_p1_from_affine(&p, &a);
        return g1(p);
    }

    static std::optional<g2> decode_g2(std::span<const std::uint8_t> in)
    {
        if (in.size() != g2_bytes) return std::nullopt;
        blst_p2_affine a;
        if (blst_p2_uncompress(&a, in.data()) != BLST_SUCCESS) return std::nullopt;
        if (!blst_p2_affine_in_g2(&a)) return std::nullopt;
        blst_p2 p;
        blst_p2_from_affine(&p, &a);
        return g2(p);
    }
};

static_assert(group_backend<bls12_381_backend>);

}  // namespace tensorcommit::algebra
