#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tensorcommit/authtree/commitment_tree.hpp"
#include "tensorcommit/authtree/merkle.hpp"
#include "tensorcommit/bytes.hpp"

namespace tensorcommit::authtree {

enum class tree_kind : std::uint8_t { merkle = 0, verkle = 1, terkle = 2 };

inline std::string_view kind_name(tree_kind k)
{
    switch (k) {
    case tree_kind::merkle: return "merkle";
    case tree_kind::verkle: return "verkle";
    case tree_kind::terkle: return "terkle";
    }
    return "?";
}

inline tree_kind parse_kind(std::string_view s)
{
    if (s == "merkle") return tree_kind::merkle;
    if (s == "verkle") return tree_kind::verkle;
    if (s == "terkle") return tree_kind::terkle;
    throw format_error("unknown tree kind '" + std::string(s) + "'");
}

/// Kind plus node arity; terkle nodes additionally carry their tensor shape.
struct tree_config {
    tree_kind kind = tree_kind::merkle;
    std::size_t arity = 2;
    mvpoly::shape child_shape;

    static tree_config merkle(std::size_t b) { return {tree_kind::merkle, b, {b}}; }
    static tree_config verkle(std::size_t b) { return {tree_kind::verkle, b, {b}}; }
    static tree_config terkle(mvpoly::shape dims)
    {
        auto b = mvpoly::shape_size(dims);
        return {tree_kind::terkle, b, std::move(dims)};
    }

    std::size_t order() const { return kind == tree_kind::terkle ? child_shape.size() : 1; }

    void validate() const
    {
        if (arity < 2) throw shape_error("tree arity must be at least 2");
        if (kind == tree_kind::terkle && mvpoly::shape_size(child_shape) != arity)
            throw shape_error("terkle child shape does not multiply to the arity");
        if (kind != tree_kind::terkle && (child_shape.size() != 1 || child_shape[0] != arity))
            throw shape_error("merkle and verkle nodes are one-dimensional");
    }
};

template <algebra::group_backend B>
struct tree_root {
    tree_kind kind = tree_kind::merkle;
    digest256 hash{};
    typename B::g1 commitment{};
    std::size_t leaf_count = 0;
    std::size_t depth = 0;
};

template <algebra::group_backend B>
struct membership_proof {
    tree_kind kind = tree_kind::merkle;
    std::size_t depth = 0;
    merkle_proof merkle;
    commitment_proof<B> commitments;

    std::size_t hash_count() const { return merkle.hash_count(); }
    std::size_t opening_count() const { return kind == tree_kind::merkle ? 0 : commitments.opening_count(); }
    std::size_t quotient_count() const { return kind == tree_kind::merkle ? 0 : commitments.quotient_count(); }
};

/// Merkle, verkle or terkle tree behind one build / prove / verify surface.
template <algebra::group_backend B>
class auth_tree {
public:
    using scalar = typename B::scalar;

    /// `node_srs` is required for verkle and terkle and must match the node shape.
    auth_tree(tree_config cfg, std::span<const scalar> leaves, std::shared_ptr<const commit::srs<B>> node_srs = nullptr)
        : cfg_(std::move(cfg))
    {
        cfg_.validate();
        if (leaves.empty()) throw shape_error("tree needs at least one leaf");
        if (cfg_.kind == tree_kind::merkle) {
            impl_.template emplace<merkle_tree<scalar>>(leaves, cfg_.arity);
        } else {
            if (!node_srs || node_srs->dims != cfg_.child_shape) throw shape_error("node srs does not match the tree configuration");
            impl_.template emplace<commitment_tree<B>>(std::move(node_srs), leaves);
        }
    }

    const tree_config& config() const { return cfg_; }

    std::size_t depth() const
    {
        if (auto* m = std::get_if<merkle_tree<scalar>>(&impl_)) return m->depth();
        return std::get<commitment_tree<B>>(impl_).depth();
    }

    tree_root<B> root() const
    {
        tree_root<B> r;
        r.kind = cfg_.kind;
        if (auto* m = std::get_if<merkle_tree<scalar>>(&impl_)) {
            auto mr = m->root();
            r.hash = mr.hash;
            r.leaf_count = mr.leaf_count;
            r.depth = mr.depth;
        } else {
            auto cr = std::get<commitment_tree<B>>(impl_).root();
            r.commitment = cr.commitment;
            r.leaf_count = cr.leaf_count;
            r.depth = cr.depth;
        }
        return r;
    }

    membership_proof<B> prove(std::size_t i) const
    {
        membership_proof<B> p;
        p.kind = cfg_.kind;
        p.depth = depth();
        if (auto* m = std::get_if<merkle_tree<scalar>>(&impl_))
            p.merkle = m->prove(i);
        else
            p.commitments = std::get<commitment_tree<B>>(impl_).prove(i);
        return p;
    }

    /// `node_srs` may be null for merkle trees.
    static bool verify(const tree_root<B>& root, std::size_t i, const scalar& leaf, const membership_proof<B>& p,
                       const tree_config& cfg, const commit::srs<B>* node_srs)
    {
        cfg.validate();
        if (p.kind != cfg.kind || root.kind != cfg.kind) throw format_error("proof kind does not match tree kind");
        if (p.depth != root.depth) throw format_error("proof depth does not match root depth");
        if (cfg.kind == tree_kind::merkle)
            return merkle_tree<scalar>::verify({root.hash, root.leaf_count, root.depth}, cfg.arity, i, leaf, p.merkle);
        if (!node_srs || node_srs->dims != cfg.child_shape) throw shape_error("node srs does not match the tree configuration");
        return commitment_tree<B>::verify(*node_srs, {root.commitment, root.leaf_count, root.depth}, i, leaf, p.commitments);
    }

private:
    tree_config cfg_;
    std::variant<std::monostate, merkle_tree<scalar>, commitment_tree<B>> impl_;
};

/// "TCTP" | kind u8 | depth u16 | per level: u32 length + payload.
/// Merkle payloads are the sibling digests; verkle/terkle payloads are the
/// child value, the quotient elements and, below the top, the node commitment.
template <algebra::group_backend B>
bytes encode_proof(const membership_proof<B>& p)
{
    using scalar = typename B::scalar;
    byte_writer w;
    w.put_magic("TCTP");
    w.put_u8(static_cast<std::uint8_t>(p.kind));
    w.put_u16(static_cast<std::uint16_t>(p.depth));
    for (std::size_t l = 0; l < p.depth; ++l) {
        byte_writer lw;
        if (p.kind == tree_kind::merkle) {
            for (const auto& d : p.merkle.siblings[l]) lw.put_bytes(d);
        } else {
            const auto& lv = p.commitments.levels[l];
            lv.y.to_bytes(lw.grow(scalar::byte_size));
            lw.put_u16(static_cast<std::uint16_t>(lv.proofs.size()));
            for (const auto& q : lv.proofs) B::encode(q, lw.grow(B::g1_bytes));
            if (l + 1 < p.depth) B::encode(p.commitments.path[l], lw.grow(B::g1_bytes));
        }
        w.put_blob(lw.data());
    }
    return std::move(w).take();
}

template <algebra::group_backend B>
membership_proof<B> decode_proof(std::span<const std::uint8_t> in)
{
    using scalar = typename B::scalar;
    byte_reader r(in);
    r.expect_magic("TCTP");
    membership_proof<B> p;
    auto kind = r.get_u8();
    if (kind > 2) throw format_error("unknown proof kind");
    p.kind = static_cast<tree_kind>(kind);
    p.depth = r.get_u16();
    for (std::size_t l = 0; l < p.depth; ++l) {
        byte_reader lr(r.get_blob());
        if (p.kind == tree_kind::merkle) {
            if (lr.remaining() % sizeof(digest256) != 0) throw format_error("merkle level payload is not a list of digests");
            std::vector<digest256> sib(lr.remaining() / sizeof(digest256));
            for (auto& d : sib) std::memcpy(d.data(), lr.get_bytes(d.size()).data(), d.size());
            p.merkle.siblings.push_back(std::move(sib));
        } else {
            level_opening<B> lv;
            auto y = scalar::from_bytes(lr.get_bytes(scalar::byte_size));
            if (!y) throw format_error("non-canonical child value");
            lv.y = *y;
            const std::size_t m = lr.get_u16();
            for (std::size_t k = 0; k < m; ++k) {
                auto q = B::decode_g1(lr.get_bytes(B::g1_bytes));
                if (!q) throw format_error("invalid quotient element");
                lv.proofs.push_back(*q);
            }
            if (l + 1 < p.depth) {
                auto c = B::decode_g1(lr.get_bytes(B::g1_bytes));
                if (!c) throw format_error("invalid path commitment");
                p.commitments.path.push_back(*c);
            }
            p.commitments.levels.push_back(std::move(lv));
        }
        lr.expect_end();
    }
    r.expect_end();
    return p;
}

}  // namespace tensorcommit::authtree
