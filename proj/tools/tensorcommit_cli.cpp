// Batch front-end: file-driven commit pipeline, benchmarks, layer selection
// and the attack simulation. Exit codes: 0 success or accept, 1 reject,
// 2 malformed input.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tensorcommit/algebra/bls12_381_backend.hpp"
#include "tensorcommit/algebra/prime_field.hpp"
#include "tensorcommit/algebra/transparent_backend.hpp"
#include "tensorcommit/authtree/bench.hpp"
#include "tensorcommit/commit/srs.hpp"
#include "tensorcommit/commit/tensor_commitment.hpp"
#include "tensorcommit/errors.hpp"
#include "tensorcommit/mvpoly/interp_bench.hpp"
#include "tensorcommit/protocol/experiment.hpp"
#include "tensorcommit/protocol/quantize.hpp"
#include "tensorcommit/select/interval_dp.hpp"
#include "tensorcommit/select/profile.hpp"

namespace tc = tensorcommit;
using tc::algebra::fr;
using transparent = tc::algebra::transparent_backend<fr>;
using production = tc::algebra::bls12_381_backend;

namespace {

constexpr int exit_accept = 0;
constexpr int exit_reject = 1;
constexpr int exit_malformed = 2;

/// Input the user can fix: bad files, shapes or flag values.
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

tc::bytes read_file(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw input_error("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::span<const std::uint8_t> data)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write '" + path + "'");
    os.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

/// Runs `fn(stream)` against the --out file, or stdout when none was given.
template <class Fn>
void with_output(const std::string& path, Fn&& fn)
{
    if (path.empty() || path == "-") {
        fn(std::cout);
        return;
    }
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write '" + path + "'");
    fn(os);
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(item);
    return out;
}

std::int64_t parse_int(const std::string& s)
{
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        throw input_error("bad integer '" + s + "'");
    }
    if (used != s.size()) throw input_error("bad integer '" + s + "'");
    return v;
}

/// Text tensor: a shape line such as "4x4x4", then the entries in lex order
/// separated by whitespace. Entries are integers, or reals quantized at
/// `scale_bits` fractional bits when scale_bits > 0.
tc::commit::tensor<fr> read_tensor(const std::string& path, int scale_bits)
{
    std::ifstream is(path);
    if (!is) throw input_error("cannot open '" + path + "'");
    std::string header;
    if (!(is >> header)) throw input_error("tensor file is empty");
    const auto dims = tc::mvpoly::parse_shape(header);
    std::vector<fr> vals;
    for (std::string tok; is >> tok;) {
        if (scale_bits > 0) {
            double v = 0;
            std::size_t used = 0;
            try {
                v = std::stod(tok, &used);
            } catch (const std::exception&) {
                throw input_error("bad tensor entry '" + tok + "'");
            }
            if (used != tok.size()) throw input_error("bad tensor entry '" + tok + "'");
            vals.push_back(tc::protocol::quantize_value<fr>(v, scale_bits));
        } else {
            vals.push_back(fr::from_int(parse_int(tok)));
        }
    }
    if (vals.size() != tc::mvpoly::shape_size(dims))
        throw input_error("tensor file has " + std::to_string(vals.size()) + " entries, shape " + header + " needs " +
                          std::to_string(tc::mvpoly::shape_size(dims)));
    return tc::commit::tensor<fr>(dims, std::move(vals));
}

struct common_opts {
    std::uint64_t seed = 1;
    std::string backend = "transparent";
    std::string out;
    std::size_t trials = 5;
};

template <class Fn>
int dispatch_backend(const std::string& name, Fn&& fn)
{
    if (name == "transparent") return fn.template operator()<transparent>();
    if (name == "production") return fn.template operator()<production>();
    throw input_error("unknown backend '" + name + "'");
}

// ---- commitment pipeline ----

struct pipeline_opts {
    std::string shape;
    std::string srs_path;
    std::string tensor_path;
    std::string commitment_path;
    std::string opening_path;
    std::string poly_out;
    std::string point;
    int scale_bits = 0;
};

template <class B>
tc::commit::srs<B> load_srs(const std::string& path)
{
    return tc::commit::decode_srs<B>(read_file(path));
}

std::vector<fr> parse_point(const std::string& text, std::size_t arity, std::uint64_t seed)
{
    std::vector<fr> w;
    if (text.empty()) {
        std::mt19937_64 rng(seed);
        for (std::size_t j = 0; j < arity; ++j) w.push_back(fr::random(rng));
        return w;
    }
    for (const auto& s : split_list(text)) w.push_back(fr::from_int(parse_int(s)));
    if (w.size() != arity) throw input_error("opening point has the wrong arity");
    return w;
}

int cmd_setup(const common_opts& c, const pipeline_opts& p)
{
    if (c.out.empty()) throw input_error("setup needs --out");
    const auto dims = tc::mvpoly::parse_shape(p.shape);
    const std::string entropy = "tensorcommit/cli/" + std::to_string(c.seed);
    return dispatch_backend(c.backend, [&]<class B>() {
        auto s = tc::commit::setup_srs<B>(dims, entropy).first;
        write_file(c.out, tc::commit::encode_srs(s));
        std::cerr << "srs for shape " << tc::mvpoly::format_shape(dims) << " written to " << c.out << '\n';
        return exit_accept;
    });
}

int cmd_commit(const common_opts& c, const pipeline_opts& p)
{
    if (c.out.empty()) throw input_error("commit needs --out");
    return dispatch_backend(c.backend, [&]<class B>() {
        const auto s = load_srs<B>(p.srs_path);
        const auto t = read_tensor(p.tensor_path, p.scale_bits);
        if (t.dims() != s.dims)
            throw input_error("tensor shape " + tc::mvpoly::format_shape(t.dims()) + " does not match srs shape " +
                              tc::mvpoly::format_shape(s.dims));
        const auto f = tc::mvpoly::interpolate_lagrange(t, s.domain);
        write_file(c.out, tc::commit::encode_commitment<B>(tc::commit::commit_poly(s, f)));
        if (!p.poly_out.empty()) write_file(p.poly_out, tc::mvpoly::encode_poly(f));
        return exit_accept;
    });
}

int cmd_open(const common_opts& c, const pipeline_opts& p)
{
    if (c.out.empty()) throw input_error("open needs --out");
    return dispatch_backend(c.backend, [&]<class B>() {
        const auto s = load_srs<B>(p.srs_path);
        const auto t = read_tensor(p.tensor_path, p.scale_bits);
        if (t.dims() != s.dims) throw input_error("tensor shape does not match srs shape");
        const auto w = parse_point(p.point, s.arity(), c.seed);
        const auto op = tc::commit::tc_open(s, t, w);
        write_file(c.out, tc::commit::encode_opening(op));
        return exit_accept;
    });
}

int cmd_verify(const common_opts& c, const pipeline_opts& p)
{
    return dispatch_backend(c.backend, [&]<class B>() {
        const auto s = load_srs<B>(p.srs_path);
        const auto cm = tc::commit::decode_commitment<B>(read_file(p.commitment_path));
        const auto op = tc::commit::decode_opening<B>(read_file(p.opening_path));
        if (op.point.size() != s.arity()) throw input_error("opening arity does not match srs");
        bool ok = p.point.empty() ? tc::commit::tc_verify(s, cm, op)
                                  : tc::commit::tc_verify(s, cm, std::span<const fr>(parse_point(p.point, s.arity(), 0)), op);
        std::cout << (ok ? "accept" : "reject") << '\n';
        return ok ? exit_accept : exit_reject;
    });
}

// ---- benchmarks ----

struct interp_opts {
    std::string domain = "float";
    std::size_t D = 4096;
    std::string ms = "1,2,3,4,6,12";
};

int cmd_interp_bench(const common_opts& c, const interp_opts& o)
{
    std::vector<std::size_t> ms;
    for (const auto& s : split_list(o.ms)) {
        auto v = parse_int(s);
        if (v < 1) throw input_error("m must be positive");
        ms.push_back(static_cast<std::size_t>(v));
    }
    for (auto m : ms)
        if (tc::mvpoly::exact_root(o.D, m) < 2)
            throw input_error("D=" + std::to_string(o.D) + " is not a perfect " + std::to_string(m) + "-th power");
    std::vector<tc::mvpoly::interp_row> rows;
    if (o.domain == "float")
        rows = tc::mvpoly::bench_interp_sweep<double>(ms, o.D, c.trials, c.seed);
    else if (o.domain == "field")
        rows = tc::mvpoly::bench_interp_sweep<fr>(ms, o.D, c.trials, c.seed);
    else
        throw input_error("unknown domain '" + o.domain + "'");
    with_output(c.out, [&](std::ostream& os) { tc::mvpoly::write_interp_csv(os, rows); });
    return exit_accept;
}

struct tree_opts {
    std::size_t arity = 64;
    std::string sizes = "262144";
    std::string kinds = "merkle,verkle,terkle";
    std::string node_shape;  // terkle; defaults to the cube root of the arity
};

int cmd_tree_bench(const common_opts& c, const tree_opts& o)
{
    namespace at = tc::authtree;
    std::vector<std::size_t> sizes;
    for (const auto& s : split_list(o.sizes)) {
        auto v = parse_int(s);
        if (v < 1) throw input_error("tree size must be positive");
        sizes.push_back(static_cast<std::size_t>(v));
    }
    std::vector<at::tree_config> cfgs;
    for (const auto& k : split_list(o.kinds)) {
        switch (at::parse_kind(k)) {
        case at::tree_kind::merkle: cfgs.push_back(at::tree_config::merkle(o.arity)); break;
        case at::tree_kind::verkle: cfgs.push_back(at::tree_config::verkle(o.arity)); break;
        case at::tree_kind::terkle: {
            tc::mvpoly::shape dims;
            if (!o.node_shape.empty()) {
                dims = tc::mvpoly::parse_shape(o.node_shape);
            } else {
                const auto d = tc::mvpoly::exact_root(o.arity, 3);
                dims = d >= 2 ? tc::mvpoly::shape{d, d, d} : tc::mvpoly::shape{o.arity};
            }
            cfgs.push_back(at::tree_config::terkle(dims));
            break;
        }
        }
        cfgs.back().validate();
    }
    return dispatch_backend(c.backend, [&]<class B>() {
        auto rows = at::bench_trees<B>(cfgs, sizes, c.trials, c.seed);
        with_output(c.out, [&](std::ostream& os) { at::write_bench_csv(os, rows); });
        return exit_accept;
    });
}

// ---- selection ----

struct select_opts {
    std::string profile;
    std::string budgets = "4";
};

int cmd_select(const common_opts& c, const select_opts& o)
{
    std::ifstream is(o.profile);
    if (!is) throw input_error("cannot open '" + o.profile + "'");
    const auto profiles = tc::select::read_profiles(is);
    std::vector<double> budgets;
    for (const auto& s : split_list(o.budgets)) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw input_error("bad budget '" + s + "'");
        }
        if (used != s.size()) throw input_error("bad budget '" + s + "'");
        budgets.push_back(v);
    }
    if (budgets.empty()) throw input_error("no budgets given");
    const auto nu = tc::select::profile_benefits(profiles);
    const auto phi = tc::select::profile_costs(profiles);
    const auto plan = tc::select::dp_select(nu, phi, budgets);
    with_output(c.out, [&](std::ostream& os) { tc::select::write_plan(os, plan); });
    return exit_accept;
}

struct profile_opts {
    std::size_t layers = 16;
    std::uint64_t model_seed = 42;
};

int cmd_profile(const common_opts& c, const profile_opts& o)
{
    tc::protocol::model_config cfg;
    cfg.layers = o.layers;
    cfg.seed = o.model_seed;
    const auto m = tc::protocol::make_toy_model(cfg);
    with_output(c.out, [&](std::ostream& os) { tc::select::write_profiles(os, tc::protocol::layer_profiles(m)); });
    return exit_accept;
}

// ---- attack simulation ----

struct attack_opts {
    std::string attacks = "weight_noise";
    std::string policies = "alpha_score";
    std::size_t seeds = 10;
    std::size_t per_seed = 100;
    std::size_t targets = 1;
    double eta = 0.1;
    double epsilon = 0.05;
    std::size_t verifiers = 1;
    std::size_t layers_per_verifier = 4;
    std::size_t points = 8;
    std::size_t layers = 16;
    std::uint64_t model_seed = 42;
};

int cmd_attack_sim(const common_opts& c, const attack_opts& o)
{
    namespace pr = tc::protocol;
    pr::experiment_config cfg;
    cfg.model.layers = o.layers;
    cfg.model.seed = o.model_seed;
    cfg.attacks.clear();
    for (const auto& s : split_list(o.attacks)) cfg.attacks.push_back(pr::parse_attack(s));
    cfg.policies.clear();
    for (const auto& s : split_list(o.policies)) cfg.policies.push_back(pr::parse_policy(s));
    if (cfg.attacks.empty() || cfg.policies.empty()) throw input_error("need at least one attack and one policy");
    cfg.seeds.clear();
    for (std::size_t i = 0; i < o.seeds; ++i) cfg.seeds.push_back(c.seed + i);
    cfg.attacks_per_seed = o.per_seed;
    cfg.targets = o.targets;
    cfg.eta = o.eta;
    cfg.epsilon = o.epsilon;
    cfg.budget.verifiers = o.verifiers;
    cfg.budget.layers_per_verifier = o.layers_per_verifier;
    cfg.budget.points_per_layer = o.points;
    return dispatch_backend(c.backend, [&]<class B>() {
        pr::srs_pool<B> pool;
        const auto res = pr::run_detection_experiment<B>(cfg, pool);
        with_output(c.out, [&](std::ostream& os) { pr::write_experiment_csv(os, res.rows); });
        for (const auto& [p, st] : res.stats)
            std::cerr << pr::policy_name(p) << ": detection " << st.detection_rate() << ", false rejects "
                      << st.false_rejects << "/" << st.honest_runs << ", mean amc " << st.mean_amc() << '\n';
        if (res.infeasible) std::cerr << res.infeasible << " top-K attempts skipped for a thin margin\n";
        return exit_accept;
    });
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Tensor commitments, authenticated trees and verifiable layer selection"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    common_opts c;
    auto add_common = [&](CLI::App* sub, bool backend) {
        sub->add_option("--seed", c.seed, "Seed for every random choice")->capture_default_str();
        if (backend)
            sub->add_option("--backend", c.backend, "Group backend")
                ->check(CLI::IsMember({"transparent", "production"}))
                ->capture_default_str();
        sub->add_option("--out", c.out, "Output path ('-' or omitted: stdout where allowed)");
    };

    pipeline_opts p;
    auto* setup = app.add_subcommand("setup", "Generate a reference string for one tensor shape");
    add_common(setup, true);
    setup->add_option("--shape", p.shape, "Tensor shape, e.g. 4x4x4")->required();

    auto* commit = app.add_subcommand("commit", "Commit to a text tensor");
    add_common(commit, true);
    commit->add_option("--srs", p.srs_path, "Reference string file")->required();
    commit->add_option("--tensor", p.tensor_path, "Text tensor: shape line, then entries")->required();
    commit->add_option("--scale-bits", p.scale_bits, "Quantize real entries at this many fractional bits");
    commit->add_option("--poly-out", p.poly_out, "Also write the interpolated polynomial (TCPL)");

    auto* open = app.add_subcommand("open", "Open a committed tensor at a point");
    add_common(open, true);
    open->add_option("--srs", p.srs_path, "Reference string file")->required();
    open->add_option("--tensor", p.tensor_path, "Text tensor")->required();
    open->add_option("--scale-bits", p.scale_bits, "Quantize real entries at this many fractional bits");
    open->add_option("--point", p.point, "Comma-separated integer point; random from --seed when omitted");

    auto* verify = app.add_subcommand("verify", "Verify an opening against a commitment");
    add_common(verify, true);
    verify->add_option("--srs", p.srs_path, "Reference string file")->required();
    verify->add_option("--commitment", p.commitment_path, "Commitment file")->required();
    verify->add_option("--opening", p.opening_path, "Opening file")->required();
    verify->add_option("--point", p.point, "Require the opening to be at this point");

    interp_opts io;
    auto* interp = app.add_subcommand("interp-bench", "Time Newton, barycentric and Gregory interpolation");
    add_common(interp, false);
    interp->add_option("--trials", c.trials, "Trials per cell (median reported)")->capture_default_str();
    interp->add_option("--domain", io.domain, "Scalar domain")
        ->check(CLI::IsMember({"float", "field"}))
        ->capture_default_str();
    interp->add_option("--D", io.D, "Total grid points")->capture_default_str();
    interp->add_option("--m", io.ms, "Comma-separated tensor orders")->capture_default_str();

    tree_opts to;
    auto* tree = app.add_subcommand("tree-bench", "Time merkle, verkle and terkle membership proofs");
    add_common(tree, true);
    tree->add_option("--trials", c.trials, "Prove and verify trials per cell")->capture_default_str();
    tree->add_option("--arity", to.arity, "Node arity B")->capture_default_str();
    tree->add_option("--n", to.sizes, "Comma-separated leaf counts")->capture_default_str();
    tree->add_option("--kinds", to.kinds, "Comma-separated tree kinds")->capture_default_str();
    tree->add_option("--node-shape", to.node_shape, "Terkle node shape (default: cube of the arity)");

    select_opts so;
    auto* sel = app.add_subcommand("select", "Choose verified layer ranges from a spectral profile");
    add_common(sel, false);
    sel->add_option("--profile", so.profile, "Profile CSV: layer_id,param_count,cost,eigenvalues")->required();
    sel->add_option("--budgets", so.budgets, "Comma-separated per-verifier budgets")->capture_default_str();

    profile_opts po;
    auto* prof = app.add_subcommand("profile", "Write the spectral profile of the toy model");
    add_common(prof, false);
    prof->add_option("--layers", po.layers, "Model depth")->capture_default_str();
    prof->add_option("--model-seed", po.model_seed, "Model seed")->capture_default_str();

    attack_opts ao;
    auto* attack = app.add_subcommand("attack-sim", "Run attacks against the toy model and record detection");
    add_common(attack, true);
    attack->add_option("--attacks", ao.attacks, "weight_noise, activation_noise, topk_preserving, output_tamper")
        ->capture_default_str();
    attack->add_option("--policies", ao.policies,
                       "all_layers, last_layer_fingerprint, alpha_score, uniform, size, random")
        ->capture_default_str();
    attack->add_option("--seeds", ao.seeds, "Number of seeds, starting at --seed")->capture_default_str();
    attack->add_option("--attacks-per-seed", ao.per_seed, "Successful attacks per seed and kind")->capture_default_str();
    attack->add_option("--targets", ao.targets, "Attacked layers per attack")->capture_default_str();
    attack->add_option("--eta", ao.eta, "Noise level")->capture_default_str();
    attack->add_option("--epsilon", ao.epsilon, "Top-K tolerance")->capture_default_str();
    attack->add_option("--verifiers", ao.verifiers, "Verifiers")->capture_default_str();
    attack->add_option("--layers-per-verifier", ao.layers_per_verifier, "Budget per verifier, in layers")
        ->capture_default_str();
    attack->add_option("--points", ao.points, "Challenged entries per layer")->capture_default_str();
    attack->add_option("--layers", ao.layers, "Model depth")->capture_default_str();
    attack->add_option("--model-seed", ao.model_seed, "Model seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_malformed;
    }

    try {
        if (*setup) return cmd_setup(c, p);
        if (*commit) return cmd_commit(c, p);
        if (*open) return cmd_open(c, p);
        if (*verify) return cmd_verify(c, p);
        if (*interp) return cmd_interp_bench(c, io);
        if (*tree) return cmd_tree_bench(c, to);
        if (*sel) return cmd_select(c, so);
        if (*prof) return cmd_profile(c, po);
        if (*attack) return cmd_attack_sim(c, ao);
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_malformed;
    } catch (const std::invalid_argument& e) {  // shape_error and friends
        std::cerr << "error: " << e.what() << '\n';
        return exit_malformed;
    } catch (const tc::format_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_malformed;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_malformed;
    } catch (const std::overflow_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_malformed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return exit_malformed;
}
