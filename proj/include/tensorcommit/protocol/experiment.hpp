#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tensorcommit/protocol/attacks.hpp"
#include "tensorcommit/protocol/session.hpp"
#include "tensorcommit/protocol/transcript.hpp"
#include "tensorcommit/select/amc.hpp"

namespace tensorcommit::protocol {

enum class policy { all_layers, last_layer_fingerprint, alpha_score, uniform, size, random };

inline std::string_view policy_name(policy p)
{
    switch (p) {
    case policy::all_layers: return "all_layers";
    case policy::last_layer_fingerprint: return "last_layer_fingerprint";
    case policy::alpha_score: return "alpha_score";
    case policy::uniform: return "uniform";
    case policy::size: return "size";
    case policy::random: return "random";
    }
    return "?";
}

inline policy parse_policy(std::string_view s)
{
    for (auto p : {policy::all_layers, policy::last_layer_fingerprint, policy::alpha_score, policy::uniform, policy::size,
                   policy::random})
        if (policy_name(p) == s) return p;
    throw format_error("unknown selection policy '" + std::string(s) + "'");
}

/// Budget shared by every interval-based policy.
struct budget_config {
    std::size_t verifiers = 1;
    double layers_per_verifier = 4;  // unit cost per layer
    std::size_t points_per_layer = 8;
    std::size_t fingerprint_k = 5;
};

/// Challenge set for one policy. The fingerprint policy opens nothing and
/// compares the output's top-K set; the others solve the interval problem
/// with their own benefit weights.
inline challenge_set policy_challenge(policy p, const toy_model& m, const std::vector<select::layer_profile>& profiles,
                                      const budget_config& b, std::uint64_t seed)
{
    const std::size_t L = m.layers(), cells = m.width;
    std::vector<double> phi(L, 1.0), nu(L, 1.0 / static_cast<double>(L));
    std::vector<double> budgets(b.verifiers, b.layers_per_verifier);
    switch (p) {
    case policy::last_layer_fingerprint: {
        challenge_set cs;
        cs.fingerprint_k = b.fingerprint_k;
        cs.plan.intervals = {select::interval{L, L}};
        cs.plan.cost = {1.0};
        cs.plan.benefit = {0.0};
        return cs;
    }
    case policy::all_layers: budgets = {static_cast<double>(L)}; break;
    case policy::alpha_score: nu = select::profile_benefits(profiles); break;
    case policy::uniform: break;
    case policy::size: {
        double total = 0;
        for (const auto& pr : profiles) total += pr.param_count;
        for (std::size_t i = 0; i < L; ++i) nu[i] = profiles[i].param_count / total;
        break;
    }
    case policy::random: {
        std::mt19937_64 rng(seed ^ 0x5eedf00dULL);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (auto& v : nu) v = u(rng);
        break;
    }
    }
    return verifier_challenge(nu, phi, budgets, seed, b.points_per_layer, cells);
}

/// Runs prover and verifier end to end; the transcript is serialized and
/// parsed on the way, as it would be between separate parties.
template <algebra::group_backend B>
check_result run_protocol(const toy_model& m, std::span<const double> input, const capture& committed,
                          const std::vector<double>& claimed_output, const challenge_set& cs, srs_pool<B>& pool)
{
    auto st = prover_commit<B>(committed, pool, m.config.tensor_shape, claimed_output);
    auto wire = encode_transcript(prover_respond(st, cs, pool));
    auto tr = decode_transcript<B>(wire);
    verifier_context ctx{&m, std::vector<double>(input.begin(), input.end()), cs};
    return verifier_check(tr, ctx, pool);
}

struct experiment_config {
    model_config model;
    std::vector<attack_kind> attacks{attack_kind::weight_noise};
    std::vector<policy> policies{policy::alpha_score};
    std::vector<std::uint64_t> seeds{1};
    std::size_t attacks_per_seed = 100;  // successful attacks per (kind, seed)
    std::size_t max_attempts = 100000;   // per (kind, seed)
    std::size_t targets = 1;             // |xi|
    double eta = 0.1;
    double epsilon = 0.05;
    budget_config budget;
    std::size_t honest_runs_per_seed = 1;
};

struct experiment_row {
    attack_kind kind;
    protocol::policy policy;
    std::uint64_t seed = 0;
    bool detected = false;
    double amc = 0;
    std::vector<std::size_t> challenged_layers;
    std::set<std::size_t> attacked_layers;
};

struct policy_stats {
    std::size_t attacks = 0;
    std::size_t detected = 0;
    std::size_t honest_runs = 0;
    std::size_t false_rejects = 0;
    double amc_sum = 0;

    double detection_rate() const { return attacks ? static_cast<double>(detected) / static_cast<double>(attacks) : 0; }
    double false_reject_rate() const
    {
        return honest_runs ? static_cast<double>(false_rejects) / static_cast<double>(honest_runs) : 0;
    }
    double mean_amc() const { return attacks ? amc_sum / static_cast<double>(attacks) : 0; }
};

struct experiment_result {
    std::vector<experiment_row> rows;
    std::map<policy, policy_stats> stats;
    std::size_t infeasible = 0;  // top-K attacks skipped for a thin margin
};

/// Draws target layers (distinct, uniform) for one attack.
template <class Rng>
std::set<std::size_t> draw_targets(std::size_t layers, std::size_t count, attack_kind kind, Rng& rng)
{
    if (kind == attack_kind::output_tamper) return {layers};
    const std::size_t pool = kind == attack_kind::topk_preserving && layers > 1 ? layers - 1 : layers;
    count = std::min(count, pool);
    std::set<std::size_t> xi;
    while (xi.size() < count) xi.insert(1 + static_cast<std::size_t>(rng() % pool));
    return xi;
}

/// For each seed and attack kind, collects `attacks_per_seed` successful
/// attacks and checks each against every policy's challenge. Honest runs
/// under every policy measure false rejects.
template <algebra::group_backend B>
experiment_result run_detection_experiment(const experiment_config& cfg, srs_pool<B>& pool)
{
    const auto model = make_toy_model(cfg.model);
    const auto profiles = layer_profiles(model);
    experiment_result res;
    for (auto p : cfg.policies) res.stats[p];
    for (auto seed : cfg.seeds) {
        std::mt19937_64 rng(seed);
        for (std::size_t h = 0; h < cfg.honest_runs_per_seed; ++h) {
            const auto x = make_input(model.width, rng());
            const auto acts = infer_and_capture(model, x);
            const auto cseed = rng();
            for (auto p : cfg.policies) {
                auto cs = policy_challenge(p, model, profiles, cfg.budget, cseed);
                auto& st = res.stats[p];
                ++st.honest_runs;
                st.false_rejects += !run_protocol<B>(model, x, acts, acts.output(), cs, pool).accepted();
            }
        }
        for (auto kind : cfg.attacks) {
            std::size_t found = 0;
            for (std::size_t attempt = 0; found < cfg.attacks_per_seed && attempt < cfg.max_attempts; ++attempt) {
                const auto x = make_input(model.width, rng());
                attack_spec spec;
                spec.kind = kind;
                spec.layers = draw_targets(model.layers(), cfg.targets, kind, rng);
                spec.eta = cfg.eta;
                spec.k = cfg.budget.fingerprint_k;
                spec.epsilon = cfg.epsilon;
                auto out = attack_apply(model, x, spec, rng);
                if (!out.feasible) ++res.infeasible;
                if (!out.success) continue;
                ++found;
                const auto cseed = rng();
                for (auto p : cfg.policies) {
                    auto cs = policy_challenge(p, model, profiles, cfg.budget, cseed);
                    experiment_row row;
                    row.kind = kind;
                    row.policy = p;
                    row.seed = seed;
                    row.challenged_layers = cs.layers();
                    row.attacked_layers = spec.layers;
                    row.detected = !run_protocol<B>(model, x, out.acts, out.claimed_output, cs, pool).accepted();
                    const std::set<std::size_t> sel(row.challenged_layers.begin(), row.challenged_layers.end());
                    row.amc = *select::amc(sel, {{spec.layers, true}});
                    auto& st = res.stats[p];
                    ++st.attacks;
                    st.detected += row.detected;
                    st.amc_sum += row.amc;
                    res.rows.push_back(std::move(row));
                }
            }
        }
    }
    return res;
}

inline void write_experiment_csv(std::ostream& os, const std::vector<experiment_row>& rows)
{
    os.precision(6);
    os << "attack_kind,policy,seed,detected,amc,challenged_layers\n";
    for (const auto& r : rows) {
        os << attack_name(r.kind) << ',' << policy_name(r.policy) << ',' << r.seed << ',' << (r.detected ? 1 : 0) << ','
           << r.amc << ',';
        for (std::size_t i = 0; i < r.challenged_layers.size(); ++i) os << (i ? ";" : "") << r.challenged_layers[i];
        os << '\n';
    }
}

}  // namespace tensorcommit::protocol
