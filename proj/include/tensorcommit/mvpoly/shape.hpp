#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tensorcommit/errors.hpp"

namespace tensorcommit::mvpoly {

/// Per-axis extents (d_1, ..., d_m); axis j holds exponents / nodes 0..d_j-1.
using shape = std::vector<std::size_t>;
using multi_index = std::vector<std::size_t>;

/// Product of the extents; throws on zero extents or overflow past `limit`.
inline std::size_t shape_size(std::span<const std::size_t> dims,
                              std::size_t limit = std::numeric_limits<std::size_t>::max())
{
    if (dims.empty()) throw shape_error("shape must have at least one axis");
    std::size_t n = 1;
    for (auto d : dims) {
        if (d == 0) throw shape_error("zero-length axis in shape");
        if (n > limit / d) throw overflow_error("shape size overflows addressable range");
        n *= d;
    }
    return n;
}

/// Element stride of each axis under lexicographic order (last axis fastest).
inline std::vector<std::size_t> strides(std::span<const std::size_t> dims)
{
    std::vector<std::size_t> s(dims.size(), 1);
    for (std::size_t j = dims.size(); j-- > 1;) s[j - 1] = s[j] * dims[j];
    return s;
}

/// Flat offset of `i`: sum_j i_j * prod_{t>j} d_t.
inline std::size_t lex_index(std::span<const std::size_t> i, std::span<const std::size_t> dims)
{
    if (i.size() != dims.size()) throw shape_error("multi-index arity does not match shape");
    std::size_t off = 0;
    for (std::size_t j = 0; j < dims.size(); ++j) {
        if (i[j] >= dims[j]) throw std::out_of_range("multi-index out of bounds on axis " + std::to_string(j));
        off = off * dims[j] + i[j];
    }
    return off;
}

inline multi_index lex_unindex(std::size_t off, std::span<const std::size_t> dims)
{
    multi_index i(dims.size());
    for (std::size_t j = dims.size(); j-- > 0;) {
        i[j] = off % dims[j];
        off /= dims[j];
    }
    if (off != 0) throw std::out_of_range("flat offset out of bounds");
    return i;
}

/// Parses "4x4x4" (also accepts ',' separators).
inline shape parse_shape(std::string_view text)
{
    shape out;
    std::size_t cur = 0;
    bool have = false;
    for (char c : text) {
        if (c >= '0' && c <= '9') {
            cur = cur * 10 + static_cast<std::size_t>(c - '0');
            have = true;
            if (cur > (std::size_t(1) << 32)) throw format_error("shape extent too large");
        } else if (c == 'x' || c == 'X' || c == ',') {
            if (!have) throw format_error("bad shape '" + std::string(text) + "'");
            out.push_back(cur);
            cur = 0;
            have = false;
        } else {
            throw format_error("bad shape '" + std::string(text) + "'");
        }
    }
    if (!have) throw format_error("bad shape '" + std::string(text) + "'");
    out.push_back(cur);
    shape_size(out);
    return out;
}

inline std::string format_shape(std::span<const std::size_t> dims)
{
    std::string s;
    for (std::size_t j = 0; j < dims.size(); ++j) {
        if (j) s += 'x';
        s += std::to_string(dims[j]);
    }
    return s;
}

/// Calls fn(base, stride) for every fiber along `axis`; the fiber's r-th
/// element sits at base + r * stride.
template <class Fn>
void for_each_fiber(std::span<const std::size_t> dims, std::size_t axis, Fn&& fn)
{
    std::size_t inner = 1, outer = 1;
    for (std::size_t t = axis + 1; t < dims.size(); ++t) inner *= dims[t];
    for (std::size_t t = 0; t < axis; ++t) outer *= dims[t];
    const std::size_t block = dims[axis] * inner;
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t in = 0; in < inner; ++in) fn(o * block + in, inner);
}

}  // namespace tensorcommit::mvpoly
