#pragma once

#include <cmath>
#include <cstdint>

namespace tensorcommit::algebra {

/// Uniform access to the constants the interpolation code needs, so the same
/// templates run over exact fields and over `double` (timing benchmarks).
template <class T>
struct scalar_traits {
    static T zero() { return T::zero(); }
    static T one() { return T::one(); }
    static T from_int(std::int64_t v) { return T::from_int(v); }
    static bool is_zero(const T& v) { return v.is_zero(); }
};

template <>
struct scalar_traits<double> {
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double from_int(std::int64_t v) { return static_cast<double>(v); }
    static bool is_zero(double v) { return v == 0.0; }
};

}  // namespace tensorcommit::algebra
