#pragma once

#include <span>
#include <vector>

#include "tensorcommit/commit/tensor_commitment.hpp"

namespace tensorcommit::commit {

// Univariate KZG: a vector of length d is the order-1 tensor case, with
// entry i sitting at the grid node Omega[i].

template <algebra::group_backend B>
struct vector_opening {
    std::size_t index = 0;
    typename B::scalar y;
    typename B::g1 proof;
};

template <algebra::group_backend B>
void check_univariate(const srs<B>& s)
{
    if (s.arity() != 1) throw shape_error("vector commitments need an order-1 srs");
}

template <algebra::group_backend B>
typename B::g1 vc_commit(const srs<B>& s, std::span<const typename B::scalar> v)
{
    check_univariate(s);
    if (v.size() != s.dims[0]) throw shape_error("vector length does not match srs length");
    tensor<typename B::scalar> t(s.dims, {v.begin(), v.end()});
    return tc_commit(s, t);
}

template <algebra::group_backend B>
vector_opening<B> vc_open(const srs<B>& s, std::span<const typename B::scalar> v, std::size_t i)
{
    check_univariate(s);
    if (v.size() != s.dims[0]) throw shape_error("vector length does not match srs length");
    if (i >= v.size()) throw std::out_of_range("vector index out of range");
    tensor<typename B::scalar> t(s.dims, {v.begin(), v.end()});
    auto w = s.domain.axis(0)[i];
    auto op = tc_open(s, t, std::span(&w, 1));
    return {i, op.y, op.proofs[0]};
}

/// e(C - y g1, g2) == e(pi, g2^{tau - Omega[i]}).
template <algebra::group_backend B>
bool vc_verify(const srs<B>& s, const typename B::g1& c, std::size_t i, const vector_opening<B>& op)
{
    check_univariate(s);
    if (i >= s.dims[0]) throw std::out_of_range("vector index out of range");
    if (op.index != i) return false;
    tensor_opening<B> t{{s.domain.axis(0)[i]}, op.y, {op.proof}};
    return tc_verify(s, c, t);
}

}  // namespace tensorcommit::commit
