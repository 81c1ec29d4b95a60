#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <span>
#include <vector>

#include "tensorcommit/algebra/hash.hpp"
#include "tensorcommit/errors.hpp"

namespace tensorcommit::authtree {

using algebra::digest256;

/// Smallest L with B^L >= n; 0 for a single leaf.
inline std::size_t tree_depth(std::size_t n, std::size_t arity)
{
    if (n == 0) throw shape_error("tree needs at least one leaf");
    if (arity < 2) throw shape_error("tree arity must be at least 2");
    std::size_t depth = 0;
    for (std::size_t cap = 1; cap < n; ++depth) {
        if (cap > SIZE_MAX / arity) throw overflow_error("tree capacity overflows");
        cap *= arity;
    }
    return depth;
}

/// SHA-256 over `tag || parts...`. Leaves use tag 0, internal nodes their height.
inline digest256 merkle_hash(std::uint8_t tag, std::span<const digest256> parts)
{
    std::vector<std::uint8_t> buf(1 + parts.size() * sizeof(digest256));
    buf[0] = tag;
    if (!parts.empty()) std::memcpy(buf.data() + 1, parts.data(), parts.size() * sizeof(digest256));
    return algebra::sha256(buf);
}

template <class F>
digest256 merkle_leaf_hash(const F& leaf)
{
    std::array<std::uint8_t, 1 + F::byte_size> buf{};
    leaf.to_bytes(std::span(buf).subspan(1));
    return algebra::sha256(buf);
}

struct merkle_root {
    digest256 hash{};
    std::size_t leaf_count = 0;
    std::size_t depth = 0;
    friend bool operator==(const merkle_root&, const merkle_root&) = default;
};

/// Sibling hashes per level, bottom-up; each level holds B - 1 digests in
/// child order with the path's own slot left out.
struct merkle_proof {
    std::vector<std::vector<digest256>> siblings;
    std::size_t hash_count() const
    {
        std::size_t n = 0;
        for (const auto& l : siblings) n += l.size();
        return n;
    }
};

/// Full B-ary hash tree, padded with the field's zero leaf.
template <class F>
class merkle_tree {
public:
    merkle_tree(std::span<const F> leaves, std::size_t arity) : arity_(arity)
    {
        depth_ = tree_depth(leaves.size(), arity);
        leaf_count_ = leaves.size();
        std::size_t width = 1;
        for (std::size_t l = 0; l < depth_; ++l) width *= arity;
        std::vector<digest256> level(width);
        const digest256 pad = merkle_leaf_hash(F::zero());
        for (std::size_t i = 0; i < width; ++i) level[i] = i < leaves.size() ? merkle_leaf_hash(leaves[i]) : pad;
        levels_.push_back(std::move(level));
        for (std::size_t h = 1; h <= depth_; ++h) {
            const auto& below = levels_.back();
            std::vector<digest256> up(below.size() / arity);
            for (std::size_t k = 0; k < up.size(); ++k)
                up[k] = merkle_hash(static_cast<std::uint8_t>(h), std::span(below).subspan(k * arity, arity));
            levels_.push_back(std::move(up));
        }
    }

    merkle_root root() const { return {levels_.back()[0], leaf_count_, depth_}; }
    std::size_t arity() const { return arity_; }
    std::size_t depth() const { return depth_; }
    std::size_t leaf_count() const { return leaf_count_; }

    merkle_proof prove(std::size_t i) const
    {
        if (i >= leaf_count_) throw std::out_of_range("leaf index out of range");
        merkle_proof p;
        std::size_t pos = i;
        for (std::size_t h = 0; h < depth_; ++h) {
            const std::size_t first = pos - pos % arity_;
            std::vector<digest256> sib;
            sib.reserve(arity_ - 1);
            for (std::size_t k = first; k < first + arity_; ++k)
                if (k != pos) sib.push_back(levels_[h][k]);
            p.siblings.push_back(std::move(sib));
            pos /= arity_;
        }
        return p;
    }

    /// Structural problems throw format_error; a wrong hash returns false.
    static bool verify(const merkle_root& root, std::size_t arity, std::size_t i, const F& leaf, const merkle_proof& p)
    {
        if (p.siblings.size() != root.depth) throw format_error("merkle proof has the wrong number of levels");
        for (const auto& l : p.siblings)
            if (l.size() != arity - 1) throw format_error("merkle proof level has the wrong number of siblings");
        if (i >= root.leaf_count) return false;
        digest256 cur = merkle_leaf_hash(leaf);
        std::size_t pos = i;
        std::vector<digest256> block(arity);
        for (std::size_t h = 0; h < root.depth; ++h) {
            const std::size_t slot = pos % arity;
            for (std::size_t k = 0, s = 0; k < arity; ++k) block[k] = k == slot ? cur : p.siblings[h][s++];
            cur = merkle_hash(static_cast<std::uint8_t>(h + 1), block);
            pos /= arity;
        }
        return pos == 0 && cur == root.hash;
    }

private:
    std::size_t arity_;
    std::size_t depth_ = 0;
    std::size_t leaf_count_ = 0;
    std::vector<std::vector<digest256>> levels_;
};

}  // namespace tensorcommit::authtree
