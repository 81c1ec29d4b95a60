#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "tensorcommit/algebra/hash.hpp"
#include "tensorcommit/authtree/merkle.hpp"
#include "tensorcommit/commit/tensor_commitment.hpp"
#include "tensorcommit/commit/vector_commitment.hpp"

namespace tensorcommit::authtree {

/// Domain tag used when a child commitment is stored in its parent's node.
inline constexpr std::string_view child_domain = "tensorcommit/child-commitment";

template <algebra::group_backend B>
typename B::scalar commitment_to_field(const typename B::g1& c)
{
    std::array<std::uint8_t, B::g1_bytes> enc;
    B::encode(c, enc);
    return algebra::hash_to_field<typename B::scalar>(child_domain, enc);
}

template <algebra::group_backend B>
struct commitment_root {
    typename B::g1 commitment;
    std::size_t leaf_count = 0;
    std::size_t depth = 0;
};

/// One level of a verkle/terkle path: the opened child value and the
/// quotient commitments (one for verkle, m for terkle).
template <algebra::group_backend B>
struct level_opening {
    typename B::scalar y;
    std::vector<typename B::g1> proofs;
};

/// `levels` runs bottom-up. `path[l]` is the commitment of the level-l node
/// on the path; the top node is the root and is not repeated.
template <algebra::group_backend B>
struct commitment_proof {
    std::vector<level_opening<B>> levels;
    std::vector<typename B::g1> path;

    std::size_t opening_count() const { return levels.size(); }
    std::size_t quotient_count() const
    {
        std::size_t n = 0;
        for (const auto& l : levels) n += l.proofs.size();
        return n;
    }
};

/// Tree whose internal nodes commit to B children. With a one-axis node shape
/// this is a verkle tree over vector commitments; with shape (d_1..d_m),
/// prod d_t = B, each node is a tensor commitment (terkle tree).
template <algebra::group_backend B>
class commitment_tree {
public:
    using scalar = typename B::scalar;
    using g1 = typename B::g1;

    commitment_tree(std::shared_ptr<const commit::srs<B>> node_srs, std::span<const scalar> leaves)
        : srs_(std::move(node_srs))
    {
        arity_ = mvpoly::shape_size(srs_->dims);
        depth_ = tree_depth(leaves.size(), arity_);
        leaf_count_ = leaves.size();
        std::size_t width = arity_;
        for (std::size_t l = 1; l < depth_; ++l) width *= arity_;
        std::vector<scalar> values(width, scalar::zero());
        std::copy(leaves.begin(), leaves.end(), values.begin());
        const std::size_t levels = depth_ == 0 ? 1 : depth_;
        for (std::size_t l = 0; l < levels; ++l) {
            const std::size_t nodes = values.size() / arity_;
            std::vector<g1> commits(nodes);
            std::vector<scalar> up(nodes);
            for (std::size_t k = 0; k < nodes; ++k) {
                commits[k] = commit::tc_commit(*srs_, node_tensor(values, k));
                up[k] = commitment_to_field<B>(commits[k]);
            }
            values_.push_back(std::move(values));
            commits_.push_back(std::move(commits));
            values = std::move(up);
        }
    }

    const commit::srs<B>& node_srs() const { return *srs_; }
    std::size_t arity() const { return arity_; }
    std::size_t order() const { return srs_->arity(); }
    std::size_t depth() const { return depth_; }
    std::size_t leaf_count() const { return leaf_count_; }
    bool is_verkle() const { return srs_->arity() == 1; }

    commitment_root<B> root() const { return {commits_.back()[0], leaf_count_, depth_}; }

    commitment_proof<B> prove(std::size_t i) const
    {
        if (i >= leaf_count_) throw std::out_of_range("leaf index out of range");
        commitment_proof<B> p;
        std::size_t pos = i;
        for (std::size_t l = 0; l < depth_; ++l) {
            const std::size_t node = pos / arity_, slot = pos % arity_;
            auto t = node_tensor(values_[l], node);
            if (is_verkle()) {
                auto op = commit::vc_open(*srs_, t.coeffs(), slot);
                p.levels.push_back({op.y, {op.proof}});
            } else {
                auto w = srs_->domain.point(mvpoly::lex_unindex(slot, srs_->dims));
                auto op = commit::tc_open<B>(*srs_, t, w);
                p.levels.push_back({op.y, std::move(op.proofs)});
            }
            if (l + 1 < depth_) p.path.push_back(commits_[l][node]);
            pos = node;
        }
        return p;
    }

    /// Structural problems throw format_error; a failed check returns false.
    static bool verify(const commit::srs<B>& s, const commitment_root<B>& root, std::size_t i, const scalar& leaf,
                       const commitment_proof<B>& p)
    {
        const std::size_t arity = mvpoly::shape_size(s.dims);
        const std::size_t m = s.arity();
        if (p.levels.size() != root.depth) throw format_error("proof has the wrong number of levels");
        if (p.path.size() != (root.depth == 0 ? 0 : root.depth - 1)) throw format_error("proof has the wrong path length");
        for (const auto& l : p.levels)
            if (l.proofs.size() != m) throw format_error("proof level has the wrong number of quotient elements");
        if (i >= root.leaf_count) return false;
        if (root.depth == 0) {
            commit::tensor<scalar> t(s.dims);
            t[0] = leaf;
            return commit::tc_commit(s, t) == root.commitment;
        }
        std::size_t pos = i;
        scalar expect = leaf;
        for (std::size_t l = 0; l < root.depth; ++l) {
            const std::size_t slot = pos % arity;
            const auto& node = l + 1 < root.depth ? p.path[l] : root.commitment;
            const auto& lv = p.levels[l];
            if (!(lv.y == expect)) return false;
            bool ok;
            if (m == 1) {
                ok = commit::vc_verify(s, node, slot, commit::vector_opening<B>{slot, lv.y, lv.proofs[0]});
            } else {
                commit::tensor_opening<B> op{s.domain.point(mvpoly::lex_unindex(slot, s.dims)), lv.y, lv.proofs};
                ok = commit::tc_verify(s, node, op);
            }
            if (!ok) return false;
            expect = commitment_to_field<B>(node);
            pos /= arity;
        }
        return true;
    }

private:
    commit::tensor<scalar> node_tensor(const std::vector<scalar>& values, std::size_t node) const
    {
        auto first = values.begin() + static_cast<std::ptrdiff_t>(node * arity_);
        return commit::tensor<scalar>(srs_->dims, std::vector<scalar>(first, first + static_cast<std::ptrdiff_t>(arity_)));
    }

    std::shared_ptr<const commit::srs<B>> srs_;
    std::size_t arity_ = 0;
    std::size_t depth_ = 0;
    std::size_t leaf_count_ = 0;
    std::vector<std::vector<scalar>> values_;
    std::vector<std::vector<g1>> commits_;
};

}  // namespace tensorcommit::authtree
