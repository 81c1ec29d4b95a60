#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tensorcommit/algebra/hash.hpp"
#include "tensorcommit/authtree/auth_tree.hpp"
#include "tensorcommit/commit/tensor_commitment.hpp"
#include "tensorcommit/protocol/quantize.hpp"
#include "tensorcommit/protocol/toy_model.hpp"
#include "tensorcommit/select/interval_dp.hpp"

namespace tensorcommit::protocol {

/// Node shape of the tree over per-layer commitments (arity 4).
inline const mvpoly::shape layer_tree_shape{2, 2};

inline authtree::tree_config layer_tree_config() { return authtree::tree_config::terkle(layer_tree_shape); }

/// One srs per tensor shape, generated on first use from a fixed entropy string.
template <algebra::group_backend B>
class srs_pool {
public:
    explicit srs_pool(std::string entropy = "tensorcommit/protocol") : entropy_(std::move(entropy)) {}

    std::shared_ptr<const commit::srs<B>> get(const mvpoly::shape& dims)
    {
        auto& slot = pool_[dims];
        if (!slot) slot = std::make_shared<commit::srs<B>>(commit::setup_srs<B>(dims, entropy_).first);
        return slot;
    }

private:
    std::string entropy_;
    std::map<mvpoly::shape, std::shared_ptr<const commit::srs<B>>> pool_;
};

template <class F>
algebra::digest256 input_digest(std::span<const double> input)
{
    byte_writer w;
    w.put_magic("TCIN");
    for (const auto& q : quantize<F>(input, activation_bits)) q.to_bytes(w.grow(F::byte_size));
    return algebra::sha256(w.data());
}

/// Everything the prover keeps after committing to one inference.
template <algebra::group_backend B>
struct prover_state {
    using scalar = typename B::scalar;

    mvpoly::shape dims;
    algebra::digest256 digest{};
    std::vector<commit::tensor<scalar>> tensors;  // layer l at index l-1
    std::vector<typename B::g1> commitments;
    std::vector<scalar> claimed_output;
    std::shared_ptr<const authtree::auth_tree<B>> tree;
    authtree::tree_root<B> root;

    std::size_t layers() const { return tensors.size(); }
};

/// Commits every captured layer tensor and builds the tree over the commitments.
/// `claimed_output` defaults to the last activation.
template <algebra::group_backend B>
prover_state<B> prover_commit(const capture& acts, srs_pool<B>& pool, const mvpoly::shape& dims,
                              std::optional<std::vector<double>> claimed_output = std::nullopt)
{
    using scalar = typename B::scalar;
    if (acts.acts.size() < 2) throw shape_error("capture holds no layers");
    const auto s = pool.get(dims);
    const std::size_t cells = mvpoly::shape_size(dims);
    prover_state<B> st;
    st.dims = dims;
    st.digest = input_digest<scalar>(acts.acts[0]);
    std::vector<scalar> leaves;
    for (std::size_t l = 1; l < acts.acts.size(); ++l) {
        if (acts.acts[l].size() != cells) throw shape_error("activation size does not match the tensor shape");
        commit::tensor<scalar> t(dims, quantize<scalar>(acts.acts[l], activation_bits));
        st.commitments.push_back(commit::tc_commit(*s, t));
        leaves.push_back(authtree::commitment_to_field<B>(st.commitments.back()));
        st.tensors.push_back(std::move(t));
    }
    const auto& out = claimed_output ? *claimed_output : acts.output();
    if (out.size() != cells) throw shape_error("claimed output does not match the tensor shape");
    st.claimed_output = quantize<scalar>(out, activation_bits);
    st.tree = std::make_shared<authtree::auth_tree<B>>(layer_tree_config(), leaves, pool.get(layer_tree_shape));
    st.root = st.tree->root();
    return st;
}

/// A grid cell of one layer, both 1-based layer and flat lex index.
struct challenge {
    std::uint32_t layer = 0;
    std::uint32_t index = 0;
    friend auto operator<=>(const challenge&, const challenge&) = default;
};

struct challenge_set {
    select::selection_plan plan;
    std::vector<challenge> items;  // sorted by (layer, index)
    std::size_t fingerprint_k = 0;  // nonzero: also compare the output's top-K set

    std::vector<std::size_t> layers() const { return plan.layers(); }
};

/// Layers from the interval plan; in each, `points` distinct cells drawn under `seed`.
inline challenge_set verifier_challenge(std::span<const double> nu, std::span<const double> costs,
                                        std::span<const double> budgets, std::uint64_t seed, std::size_t points,
                                        std::size_t cells)
{
    challenge_set cs;
    cs.plan = select::dp_select(nu, costs, budgets);
    const auto layers = cs.plan.layers();
    if (layers.empty()) throw domain_error("selection plan is empty");
    std::mt19937_64 rng(seed);
    points = std::min(points, cells);
    std::vector<std::uint32_t> perm(cells);
    for (auto l : layers) {
        for (std::size_t i = 0; i < cells; ++i) perm[i] = static_cast<std::uint32_t>(i);
        for (std::size_t i = 0; i < points; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, cells - 1);
            std::swap(perm[i], perm[pick(rng)]);
            cs.items.push_back({static_cast<std::uint32_t>(l), perm[i]});
        }
    }
    std::sort(cs.items.begin(), cs.items.end());
    return cs;
}

/// Challenge from published profiles with spectral benefit weights.
inline challenge_set verifier_challenge(const std::vector<select::layer_profile>& profiles, std::span<const double> budgets,
                                        std::uint64_t seed, std::size_t points, std::size_t cells)
{
    const auto nu = select::profile_benefits(profiles);
    const auto phi = select::profile_costs(profiles);
    return verifier_challenge(nu, phi, budgets, seed, points, cells);
}

enum class verdict : std::uint8_t {
    accept = 0,
    input_mismatch = 1,
    output_mismatch = 2,
    membership = 3,
    upstream_mismatch = 4,
    opening = 5,
    value_mismatch = 6,
    fingerprint = 7,
    malformed = 8,
    pending = 255,
};

inline std::string_view verdict_name(verdict v)
{
    switch (v) {
    case verdict::accept: return "accept";
    case verdict::input_mismatch: return "input_mismatch";
    case verdict::output_mismatch: return "output_mismatch";
    case verdict::membership: return "membership";
    case verdict::upstream_mismatch: return "upstream_mismatch";
    case verdict::opening: return "opening";
    case verdict::value_mismatch: return "value_mismatch";
    case verdict::fingerprint: return "fingerprint";
    case verdict::malformed: return "malformed";
    case verdict::pending: return "pending";
    }
    return "?";
}

/// A layer commitment with its membership proof; `values` holds the full
/// tensor when the layer is revealed as the upstream of a challenged layer.
template <algebra::group_backend B>
struct layer_reveal {
    std::uint32_t layer = 0;
    typename B::g1 commitment;
    authtree::membership_proof<B> proof;
    std::vector<typename B::scalar> values;
};

template <algebra::group_backend B>
struct challenge_record {
    std::uint32_t layer = 0;
    commit::tensor_opening<B> opening;
};

template <algebra::group_backend B>
struct transcript {
    algebra::digest256 digest{};
    std::vector<typename B::scalar> output;
    authtree::tree_root<B> root;
    std::vector<challenge_record<B>> records;
    std::vector<layer_reveal<B>> reveals;
    protocol::verdict result = verdict::pending;
};

/// Opens every challenged cell and reveals the commitments the verifier needs:
/// the last layer, each challenged layer, and each challenged layer's upstream
/// tensor in full.
template <algebra::group_backend B>
transcript<B> prover_respond(const prover_state<B>& st, const challenge_set& cs, srs_pool<B>& pool)
{
    const auto s = pool.get(st.dims);
    transcript<B> tr;
    tr.digest = st.digest;
    tr.output = st.claimed_output;
    tr.root = st.root;
    std::map<std::uint32_t, bool> need;  // layer -> reveal full tensor
    need[static_cast<std::uint32_t>(st.layers())] = false;
    for (const auto& c : cs.items) {
        if (c.layer < 1 || c.layer > st.layers()) throw std::out_of_range("challenge layer out of range");
        need.try_emplace(c.layer, false);
        if (c.layer > 1) need[c.layer - 1] = true;
        const auto w = s->domain.point(mvpoly::lex_unindex(c.index, st.dims));
        tr.records.push_back({c.layer, commit::tc_open<B>(*s, st.tensors[c.layer - 1], w)});
    }
    for (const auto& [l, full] : need) {
        layer_reveal<B> r;
        r.layer = l;
        r.commitment = st.commitments[l - 1];
        r.proof = st.tree->prove(l - 1);
        if (full) r.values.assign(st.tensors[l - 1].coeffs().begin(), st.tensors[l - 1].coeffs().end());
        tr.reveals.push_back(std::move(r));
    }
    return tr;
}

/// What the verifier holds independently of the prover.
struct verifier_context {
    const toy_model* model = nullptr;
    std::vector<double> input;
    challenge_set challenges;
};

struct check_result {
    protocol::verdict result = verdict::accept;
    std::optional<challenge> failing;
    std::string detail;

    bool accepted() const { return result == verdict::accept; }
};

/// Expected quantized activation of layer `l` (1-based) at cell `r`, recomputed
/// from the published weights and the upstream activations.
inline double expected_entry(const toy_model& m, std::size_t l, std::span<const double> upstream, std::size_t r)
{
    return layer_entry(m.weights[l - 1], m.scales[l - 1], upstream, r);
}

/// Accepts iff the input digest, the output-consistency check, every
/// membership proof, every upstream recommitment, every opening and every
/// recomputed value pass (and the fingerprint, when requested). The first
/// failing check is reported.
template <algebra::group_backend B>
check_result verifier_check(const transcript<B>& tr, const verifier_context& ctx, srs_pool<B>& pool)
{
    using scalar = typename B::scalar;
    auto fail = [](verdict v, std::string d, std::optional<challenge> c = std::nullopt) {
        return check_result{v, c, std::move(d)};
    };
    if (!ctx.model) throw std::invalid_argument("verifier context has no model");
    const auto& m = *ctx.model;
    const auto& dims = m.config.tensor_shape;
    const std::size_t cells = mvpoly::shape_size(dims), L = m.layers();
    const auto s = pool.get(dims);
    const auto node = pool.get(layer_tree_shape);
    const auto cfg = layer_tree_config();

    if (tr.digest != input_digest<scalar>(ctx.input)) return fail(verdict::input_mismatch, "input digest differs");
    if (tr.root.kind != authtree::tree_kind::terkle || tr.root.leaf_count != L)
        return fail(verdict::malformed, "root does not describe the model's layers");
    if (tr.output.size() != cells) return fail(verdict::malformed, "claimed output has the wrong size");

    std::map<std::uint32_t, const layer_reveal<B>*> by_layer;
    for (const auto& r : tr.reveals) {
        if (r.layer < 1 || r.layer > L || !by_layer.emplace(r.layer, &r).second)
            return fail(verdict::malformed, "bad or repeated revealed layer");
    }
    for (const auto& [l, r] : by_layer) {
        bool ok = false;
        try {
            ok = authtree::auth_tree<B>::verify(tr.root, l - 1, authtree::commitment_to_field<B>(r->commitment), r->proof,
                                                cfg, node.get());
        } catch (const format_error&) {
            return fail(verdict::malformed, "membership proof is malformed");
        }
        if (!ok) return fail(verdict::membership, "membership proof failed for layer " + std::to_string(l));
    }

    auto last = by_layer.find(static_cast<std::uint32_t>(L));
    if (last == by_layer.end()) return fail(verdict::malformed, "last layer commitment missing");
    if (commit::tc_commit(*s, commit::tensor<scalar>(dims, tr.output)) != last->second->commitment)
        return fail(verdict::output_mismatch, "claimed output does not match the last layer commitment");

    for (const auto& [l, r] : by_layer) {
        if (r->values.empty()) continue;
        if (r->values.size() != cells) return fail(verdict::malformed, "revealed tensor has the wrong size");
        if (commit::tc_commit(*s, commit::tensor<scalar>(dims, r->values)) != r->commitment)
            return fail(verdict::upstream_mismatch, "revealed tensor does not match layer " + std::to_string(l));
    }

    const auto& issued = ctx.challenges.items;
    if (tr.records.size() != issued.size()) return fail(verdict::malformed, "openings do not match the challenge set");
    for (std::size_t k = 0; k < issued.size(); ++k) {
        const auto& c = issued[k];
        const auto& rec = tr.records[k];
        const auto w = s->domain.point(mvpoly::lex_unindex(c.index, dims));
        if (rec.layer != c.layer || rec.opening.point != w) return fail(verdict::malformed, "missing opening", c);
        auto it = by_layer.find(c.layer);
        if (it == by_layer.end()) return fail(verdict::malformed, "challenged layer not revealed", c);
        if (rec.opening.proofs.size() != s->arity()) return fail(verdict::malformed, "opening has the wrong arity", c);
        if (!commit::tc_verify(*s, it->second->commitment, rec.opening)) return fail(verdict::opening, "opening rejected", c);
    }

    std::map<std::uint32_t, std::vector<double>> upstream;
    auto upstream_of = [&](std::uint32_t l) -> const std::vector<double>* {
        auto [it, fresh] = upstream.try_emplace(l);
        if (fresh) {
            if (l == 1) {
                it->second = ctx.input;
                for (auto& v : it->second) v = round_to_grid(v, activation_bits);
            } else {
                auto r = by_layer.find(l - 1);
                if (r == by_layer.end() || r->second->values.empty()) return nullptr;
                for (const auto& q : r->second->values) {
                    auto v = to_signed(q);
                    if (!v) return nullptr;
                    it->second.push_back(std::ldexp(static_cast<double>(*v), -activation_bits));
                }
            }
        }
        return it->second.empty() ? nullptr : &it->second;
    };
    for (std::size_t k = 0; k < issued.size(); ++k) {
        const auto& c = issued[k];
        const auto* up = upstream_of(c.layer);
        if (!up) return fail(verdict::malformed, "upstream activations unavailable", c);
        const double e = expected_entry(m, c.layer, *up, c.index);
        if (!(quantize_value<scalar>(e, activation_bits) == tr.records[k].opening.y))
            return fail(verdict::value_mismatch, "opened value differs from the recomputation", c);
    }

    if (ctx.challenges.fingerprint_k > 0) {
        std::vector<double> y;
        for (const auto& q : tr.output) {
            auto v = to_signed(q);
            if (!v) return fail(verdict::fingerprint, "claimed output out of range");
            y.push_back(static_cast<double>(*v));
        }
        const auto clean = infer_and_capture(m, ctx.input);
        if (top_k(y, ctx.challenges.fingerprint_k) != top_k(clean.output(), ctx.challenges.fingerprint_k))
            return fail(verdict::fingerprint, "output top-K set differs from the reference");
    }
    return {};
}

}  // namespace tensorcommit::protocol
