#include <gtest/gtest.h>

#include <random>

#include "tensorcommit/algebra/bls12_381_backend.hpp"
#include "tensorcommit/algebra/small_field.hpp"
#include "tensorcommit/algebra/transparent_backend.hpp"
#include "tensorcommit/protocol/experiment.hpp"
#include "tensorcommit/protocol/transcript.hpp"

using namespace tensorcommit;
using namespace tensorcommit::protocol;
using algebra::fr;
using TB = algebra::transparent_backend<fr>;
using PB = algebra::bls12_381_backend;

namespace {

model_config small_model(std::size_t layers = 8)
{
    model_config c;
    c.layers = layers;
    return c;
}

srs_pool<TB>& tpool()
{
    static srs_pool<TB> p;
    return p;
}

// Detection predicted from the committed trajectory alone: some challenged
// cell differs from its recomputation, or the claimed output is not the
// committed last layer, or the fingerprint differs.
bool predicted_detection(const toy_model& m, std::span<const double> input, const attack_outcome& out,
                         const challenge_set& cs)
{
    if (out.claimed_output != out.acts.output()) return true;
    for (const auto& c : cs.items) {
        const auto& up = out.acts.acts[c.layer - 1];
        if (expected_entry(m, c.layer, up, c.index) != out.acts.acts[c.layer][c.index]) return true;
    }
    if (cs.fingerprint_k) {
        const auto clean = infer_and_capture(m, input);
        return top_k(out.claimed_output, cs.fingerprint_k) != top_k(clean.output(), cs.fingerprint_k);
    }
    return false;
}

}  // namespace

TEST(Quantize, Examples)
{
    EXPECT_EQ(quantize_value<fr>(0.0), fr::zero());
    EXPECT_EQ(quantize_value<fr>(1.5), fr::from_u64(98304));
    EXPECT_EQ(quantize_value<fr>(-1.0), fr::zero() - fr::from_u64(65536));
    EXPECT_EQ(quantize_value<fr>(0.5 / 65536), fr::zero());
    EXPECT_EQ(quantize_value<fr>(1.5 / 65536), fr::from_u64(2));
    EXPECT_EQ(quantize_value<fr>(-2.5 / 65536), -fr::from_u64(2));
    EXPECT_EQ(*to_signed(quantize_value<fr>(-3.25)), -3 * 65536 - 65536 / 4);
    EXPECT_DOUBLE_EQ(dequantize_value(quantize_value<fr>(-7.125)), -7.125);
    EXPECT_THROW(quantize_value<algebra::f61>(std::ldexp(1.0, 45)), overflow_error);
    EXPECT_NO_THROW(quantize_value<algebra::f61>(std::ldexp(1.0, 40)));
    EXPECT_THROW(quantize_value<fr>(std::nan("")), overflow_error);
}

TEST(ToyModel, ZeroInputGivesZeroActivations)
{
    auto m = make_toy_model(small_model());
    std::vector<double> x(m.width, 0.0);
    auto c = infer_and_capture(m, x);
    for (const auto& a : c.acts)
        for (double v : a) EXPECT_EQ(v, 0.0);
    EXPECT_THROW(infer_and_capture(m, std::vector<double>(3)), shape_error);
}

TEST(ToyModel, DeterministicCapture)
{
    auto m1 = make_toy_model(small_model());
    auto m2 = make_toy_model(small_model());
    EXPECT_EQ(m1.weights, m2.weights);
    auto x = make_input(m1.width, 42);
    auto a = infer_and_capture(m1, x), b = infer_and_capture(m2, x);
    for (std::size_t l = 0; l < a.acts.size(); ++l) {
        auto qa = quantize<fr>(a.acts[l]), qb = quantize<fr>(b.acts[l]);
        for (std::size_t i = 0; i < qa.size(); ++i) ASSERT_EQ(qa[i].to_bytes(), qb[i].to_bytes());
    }
}

TEST(ToyModel, WeightChangeMovesDownstream)
{
    auto m = make_toy_model(small_model());
    auto x = make_input(m.width, 3);
    auto a = infer_and_capture(m, x);
    auto m2 = m;
    m2.weights[2][5] += 0.25;
    auto b = infer_and_capture(m2, x);
    for (std::size_t l = 0; l <= 2; ++l) EXPECT_EQ(a.acts[l], b.acts[l]);
    for (std::size_t l = 3; l < a.acts.size(); ++l) EXPECT_NE(a.acts[l], b.acts[l]) << l;
}

TEST(ToyModel, SpotRecomputationIsExact)
{
    auto m = make_toy_model(small_model());
    auto c = infer_and_capture(m, make_input(m.width, 9));
    for (std::size_t l = 1; l <= m.layers(); ++l)
        for (std::size_t i = 0; i < m.width; ++i) ASSERT_EQ(expected_entry(m, l, c.acts[l - 1], i), c.acts[l][i]);
}

TEST(ToyModel, ProfilesTrackSpectralExponent)
{
    auto m = make_toy_model(small_model(16));
    auto p = layer_profiles(m);
    ASSERT_EQ(p.size(), 16u);
    for (const auto& pr : p) {
        EXPECT_TRUE(std::is_sorted(pr.eigenvalues.begin(), pr.eigenvalues.end()));
        EXPECT_EQ(pr.param_count, 64.0 * 64.0);
    }
    // the heaviest and lightest generated tails are ranked the same way by the estimate
    auto lo = std::min_element(m.alphas.begin(), m.alphas.end()) - m.alphas.begin();
    auto hi = std::max_element(m.alphas.begin(), m.alphas.end()) - m.alphas.begin();
    EXPECT_LT(select::hill_alpha(p[static_cast<std::size_t>(lo)].eigenvalues),
              select::hill_alpha(p[static_cast<std::size_t>(hi)].eigenvalues));
}

TEST(Prover, CommitIsDeterministicAndBinding)
{
    auto m = make_toy_model(small_model());
    auto c = infer_and_capture(m, make_input(m.width, 5));
    auto a = prover_commit<TB>(c, tpool(), m.config.tensor_shape);
    auto b = prover_commit<TB>(c, tpool(), m.config.tensor_shape);
    EXPECT_EQ(a.root.commitment, b.root.commitment);
    EXPECT_EQ(a.root.leaf_count, m.layers());
    EXPECT_EQ(a.root.depth, 2u);
    auto c2 = c;
    c2.acts[4][7] += std::ldexp(1.0, -16);
    auto d = prover_commit<TB>(c2, tpool(), m.config.tensor_shape);
    EXPECT_NE(d.commitments[3], a.commitments[3]);
    EXPECT_EQ(d.commitments[2], a.commitments[2]);
    EXPECT_NE(d.root.commitment, a.root.commitment);
    EXPECT_THROW(prover_commit<TB>(c, tpool(), mvpoly::shape{4, 4}), shape_error);
}

TEST(Verifier, ChallengeSets)
{
    auto m = make_toy_model(small_model());
    auto prof = layer_profiles(m);
    std::vector<double> all{static_cast<double>(m.layers())};
    auto cs = verifier_challenge(prof, all, 1, 2, m.width);
    EXPECT_EQ(cs.layers().size(), m.layers());
    EXPECT_EQ(cs.items.size(), 2 * m.layers());
    auto again = verifier_challenge(prof, all, 1, 2, m.width);
    EXPECT_EQ(cs.items, again.items);
    std::vector<double> zero{0, 0};
    EXPECT_THROW(verifier_challenge(prof, zero, 1, 2, m.width), domain_error);
}

TEST(Protocol, HonestRunsAccept)
{
    auto m = make_toy_model(small_model());
    auto prof = layer_profiles(m);
    budget_config b;
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto x = make_input(m.width, 100 + s);
        auto c = infer_and_capture(m, x);
        for (auto p : {policy::all_layers, policy::alpha_score, policy::uniform, policy::random, policy::last_layer_fingerprint}) {
            auto cs = policy_challenge(p, m, prof, b, s);
            auto r = run_protocol<TB>(m, x, c, c.output(), cs, tpool());
            ASSERT_TRUE(r.accepted()) << policy_name(p) << ": " << r.detail;
        }
    }
}

TEST(Protocol, HonestRunAcceptsOnPairingBackend)
{
    auto m = make_toy_model(small_model(4));
    auto prof = layer_profiles(m);
    srs_pool<PB> pool;
    auto x = make_input(m.width, 77);
    auto c = infer_and_capture(m, x);
    budget_config b;
    b.layers_per_verifier = 2;
    b.points_per_layer = 2;
    auto cs = policy_challenge(policy::alpha_score, m, prof, b, 3);
    EXPECT_TRUE(run_protocol<PB>(m, x, c, c.output(), cs, pool).accepted());
    auto bad = c.output();
    std::swap(bad[0], bad[1]);
    EXPECT_EQ(run_protocol<PB>(m, x, c, bad, cs, pool).result, verdict::output_mismatch);
}

TEST(Protocol, TranscriptRoundTrip)
{
    auto m = make_toy_model(small_model());
    auto x = make_input(m.width, 8);
    auto c = infer_and_capture(m, x);
    budget_config b;
    auto cs = policy_challenge(policy::uniform, m, layer_profiles(m), b, 4);
    auto st = prover_commit<TB>(c, tpool(), m.config.tensor_shape);
    auto tr = prover_respond(st, cs, tpool());
    verifier_context ctx{&m, x, cs};
    tr.result = verifier_check(tr, ctx, tpool()).result;
    EXPECT_EQ(tr.result, verdict::accept);
    auto wire = encode_transcript(tr);
    auto back = decode_transcript<TB>(wire);
    EXPECT_EQ(encode_transcript(back), wire);
    EXPECT_EQ(verifier_check(back, ctx, tpool()).result, tr.result);

    auto cut = wire;
    cut.pop_back();
    cut.pop_back();
    EXPECT_THROW(decode_transcript<TB>(cut), format_error);
    auto junk = wire;
    junk[0] = 'X';
    EXPECT_THROW(decode_transcript<TB>(junk), format_error);
}

TEST(Protocol, EachCheckRejects)
{
    auto m = make_toy_model(small_model());
    auto x = make_input(m.width, 12);
    auto c = infer_and_capture(m, x);
    budget_config b;
    auto cs = policy_challenge(policy::all_layers, m, layer_profiles(m), b, 6);
    auto st = prover_commit<TB>(c, tpool(), m.config.tensor_shape);
    const auto honest = prover_respond(st, cs, tpool());
    verifier_context ctx{&m, x, cs};
    ASSERT_TRUE(verifier_check(honest, ctx, tpool()).accepted());

    auto other = ctx;
    other.input = make_input(m.width, 13);
    EXPECT_EQ(verifier_check(honest, other, tpool()).result, verdict::input_mismatch);

    auto tr = honest;
    tr.output[3] = tr.output[3] + fr::one();
    EXPECT_EQ(verifier_check(tr, ctx, tpool()).result, verdict::output_mismatch);

    tr = honest;
    tr.reveals[2].proof.commitments.levels[0].y = tr.reveals[2].proof.commitments.levels[0].y + fr::one();
    EXPECT_EQ(verifier_check(tr, ctx, tpool()).result, verdict::membership);

    tr = honest;
    for (auto& r : tr.reveals)
        if (!r.values.empty()) {
            r.values[0] = r.values[0] + fr::one();
            break;
        }
    EXPECT_EQ(verifier_check(tr, ctx, tpool()).result, verdict::upstream_mismatch);

    tr = honest;
    tr.records[5].opening.y = tr.records[5].opening.y + fr::one();
    auto r = verifier_check(tr, ctx, tpool());
    EXPECT_EQ(r.result, verdict::opening);
    ASSERT_TRUE(r.failing);
    EXPECT_EQ(*r.failing, cs.items[5]);

    tr = honest;
    tr.records.pop_back();
    EXPECT_EQ(verifier_check(tr, ctx, tpool()).result, verdict::malformed);

    // a consistent but dishonest layer: committed and opened faithfully, wrong value
    auto cs3 = cs;
    cs3.items.clear();
    for (const auto& it : cs.items)
        if (it.layer == 3) cs3.items.push_back(it);
    ASSERT_FALSE(cs3.items.empty());
    auto c2 = c;
    c2.acts[3][cs3.items[0].index] += 1.0;
    for (std::size_t l = 4; l < c2.acts.size(); ++l) c2.acts[l] = apply_layer(m.weights[l - 1], m.scales[l - 1], c2.acts[l - 1]);
    auto st2 = prover_commit<TB>(c2, tpool(), m.config.tensor_shape);
    verifier_context ctx3{&m, x, cs3};
    r = verifier_check(prover_respond(st2, cs3, tpool()), ctx3, tpool());
    EXPECT_EQ(r.result, verdict::value_mismatch);
}

TEST(Attacks, ZeroNoiseLeavesArtifactUnchanged)
{
    auto m = make_toy_model(small_model());
    auto x = make_input(m.width, 1);
    auto clean = infer_and_capture(m, x);
    std::mt19937_64 rng(1);
    for (auto k : {attack_kind::weight_noise, attack_kind::activation_noise}) {
        attack_spec s{k, {2, 5}, 0.0};
        auto out = attack_apply(m, x, s, rng);
        EXPECT_EQ(out.acts.acts, clean.acts);
        EXPECT_FALSE(out.success);
    }
    attack_spec bad{attack_kind::weight_noise, {}, 1.0};
    EXPECT_THROW(attack_apply(m, x, bad, rng), domain_error);
}

TEST(Attacks, LargeEarlyNoiseFlipsTheToken)
{
    auto m = make_toy_model(small_model(16));
    std::mt19937_64 rng(2);
    int flips = 0;
    for (int s = 0; s < 100; ++s) {
        attack_spec spec{attack_kind::weight_noise, {1}, 3.0};
        flips += attack_apply(m, make_input(m.width, 500 + static_cast<std::uint64_t>(s)), spec, rng).success;
    }
    EXPECT_GE(flips, 50);
}

TEST(Attacks, TopKPreservingKeepsTheFingerprint)
{
    auto m = make_toy_model(small_model(16));
    std::mt19937_64 rng(3);
    int feasible = 0, infeasible = 0;
    for (int s = 0; s < 300; ++s) {
        auto x = make_input(m.width, 900 + static_cast<std::uint64_t>(s));
        attack_spec spec{attack_kind::topk_preserving, {1 + static_cast<std::size_t>(s % 15)}, 0.5, 5, 0.02};
        auto out = attack_apply(m, x, spec, rng);
        const auto clean = infer_and_capture(m, x).output();
        if (!out.feasible) {
            EXPECT_LE(top_k_margin(clean, 5), 0.04);
            ++infeasible;
            continue;
        }
        ++feasible;
        EXPECT_EQ(top_k(out.claimed_output, 5), top_k(clean, 5));
        for (std::size_t i = 0; i < clean.size(); ++i) EXPECT_LE(std::fabs(out.claimed_output[i] - clean[i]), 0.02 + 1e-12);
    }
    EXPECT_GT(feasible, 50);
}

TEST(Attacks, PromptTamperingChangesTheInputDigest)
{
    EXPECT_EQ(taco_prompts[0].system_prompt, "Always praise tacos.");
    auto m = make_toy_model(small_model(4));
    const std::string user = "What should I eat tonight?";
    auto x = embed_prompt(user, m.width);
    EXPECT_EQ(x, embed_prompt(user, m.width));
    for (const auto& f : taco_prompts) {
        auto tampered = embed_prompt(tamper_prompt(f, user), m.width);
        auto c = infer_and_capture(m, tampered);
        budget_config b;
        b.layers_per_verifier = 2;
        auto cs = policy_challenge(policy::uniform, m, layer_profiles(m), b, 1);
        auto st = prover_commit<TB>(c, tpool(), m.config.tensor_shape);
        verifier_context ctx{&m, x, cs};
        EXPECT_EQ(verifier_check(prover_respond(st, cs, tpool()), ctx, tpool()).result, verdict::input_mismatch) << f.name;
    }
}

TEST(Experiment, DetectionMatchesCoverage)
{
    auto m = make_toy_model(small_model(16));
    auto prof = layer_profiles(m);
    std::mt19937_64 rng(21);
    budget_config b;
    for (int t = 0; t < 60; ++t) {
        const auto kind = static_cast<attack_kind>(t % 4);
        auto x = make_input(m.width, rng());
        attack_spec spec{kind, draw_targets(m.layers(), 2, kind, rng), 0.3, 5, 0.05};
        auto out = attack_apply(m, x, spec, rng);
        for (auto p : {policy::alpha_score, policy::uniform, policy::last_layer_fingerprint, policy::all_layers}) {
            auto cs = policy_challenge(p, m, prof, b, static_cast<std::uint64_t>(t));
            const bool got = !run_protocol<TB>(m, x, out.acts, out.claimed_output, cs, tpool()).accepted();
            ASSERT_EQ(got, predicted_detection(m, x, out, cs)) << attack_name(kind) << " " << policy_name(p);
        }
    }
}

TEST(Experiment, PolicySummary)
{
    experiment_config cfg;
    cfg.model = small_model(16);
    cfg.attacks = {attack_kind::weight_noise, attack_kind::topk_preserving, attack_kind::output_tamper};
    cfg.policies = {policy::all_layers, policy::last_layer_fingerprint, policy::alpha_score};
    cfg.seeds = {1, 2};
    cfg.attacks_per_seed = 10;
    cfg.eta = 0.3;
    auto res = run_detection_experiment<TB>(cfg, tpool());
    EXPECT_EQ(res.rows.size(), 2u * 3u * 10u * 3u);
    for (const auto& [p, st] : res.stats) EXPECT_EQ(st.false_rejects, 0u) << policy_name(p);
    std::size_t fp_topk = 0, fp_topk_det = 0;
    for (const auto& r : res.rows) {
        if (r.policy == policy::all_layers) {
            EXPECT_TRUE(r.detected);
        }
        if (r.kind == attack_kind::output_tamper) {
            EXPECT_TRUE(r.detected);
        }
        if (r.kind == attack_kind::topk_preserving && r.policy == policy::last_layer_fingerprint) {
            ++fp_topk;
            fp_topk_det += r.detected;
        }
    }
    EXPECT_EQ(fp_topk, 20u);
    EXPECT_LE(fp_topk_det, 2u);
    std::ostringstream os;
    write_experiment_csv(os, res.rows);
    const auto text = os.str();
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), static_cast<long>(res.rows.size()) + 1);
}
