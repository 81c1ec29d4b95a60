#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "tensorcommit/authtree/auth_tree.hpp"

namespace tensorcommit::authtree {

struct bench_row {
    std::string kind;
    std::size_t arity = 0;
    std::size_t order = 0;
    std::size_t n = 0;
    std::size_t depth = 0;      // ceil(log_B n) with B = prod d_t
    std::size_t depth_alt = 0;  // ceil(log_B(n) / m), the per-axis reading
    double build_ns = 0;
    double prove_ns = 0;
    double verify_ns = 0;
    std::size_t proof_bytes = 0;
    std::size_t hashes = 0;
    std::size_t openings = 0;
    std::size_t quotients = 0;
};

inline double median(std::vector<double> v)
{
    if (v.empty()) return 0;
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

inline std::size_t per_axis_depth(std::size_t n, std::size_t arity, std::size_t order)
{
    const auto full = tree_depth(n, arity);
    return (full + order - 1) / order;
}

/// Times build, prove and verify for every (config, n); leaves and probed
/// indices come from `seed`. Build is repeated min(trials, build_trials)
/// times, prove and verify `trials` times each.
template <algebra::group_backend B>
std::vector<bench_row> bench_trees(const std::vector<tree_config>& configs, const std::vector<std::size_t>& sizes,
                                   std::size_t trials, std::uint64_t seed, std::size_t build_trials = 3)
{
    using scalar = typename B::scalar;
    using clock = std::chrono::steady_clock;
    auto ns_since = [](clock::time_point t0) { return std::chrono::duration<double, std::nano>(clock::now() - t0).count(); };

    std::map<mvpoly::shape, std::shared_ptr<const commit::srs<B>>> pool;
    std::vector<bench_row> rows;
    trials = std::max<std::size_t>(trials, 1);
    for (const auto& cfg : configs) {
        std::shared_ptr<const commit::srs<B>> s;
        if (cfg.kind != tree_kind::merkle) {
            auto& slot = pool[cfg.child_shape];
            if (!slot) slot = std::make_shared<commit::srs<B>>(commit::setup_srs<B>(cfg.child_shape, "tree-bench").first);
            s = slot;
        }
        for (auto n : sizes) {
            std::mt19937_64 rng(seed ^ (n * 0x9e3779b97f4a7c15ULL) ^ static_cast<std::uint64_t>(cfg.kind));
            std::vector<scalar> leaves(n);
            for (auto& x : leaves) x = scalar::random(rng);

            std::vector<double> build_t;
            std::unique_ptr<auth_tree<B>> tree;
            for (std::size_t t = 0; t < std::min(trials, build_trials); ++t) {
                auto t0 = clock::now();
                tree = std::make_unique<auth_tree<B>>(cfg, leaves, s);
                build_t.push_back(ns_since(t0));
            }
            const auto root = tree->root();
            std::vector<double> prove_t, verify_t;
            bench_row row;
            for (std::size_t t = 0; t < trials; ++t) {
                const std::size_t i = rng() % n;
                auto t0 = clock::now();
                auto p = tree->prove(i);
                prove_t.push_back(ns_since(t0));
                t0 = clock::now();
                bool ok = auth_tree<B>::verify(root, i, leaves[i], p, cfg, s.get());
                verify_t.push_back(ns_since(t0));
                if (!ok) throw std::logic_error("honest membership proof failed to verify");
                row.proof_bytes = encode_proof(p).size();
                row.hashes = p.hash_count();
                row.openings = p.opening_count();
                row.quotients = p.quotient_count();
            }
            row.kind = std::string(kind_name(cfg.kind));
            row.arity = cfg.arity;
            row.order = cfg.order();
            row.n = n;
            row.depth = tree->depth();
            row.depth_alt = per_axis_depth(n, cfg.arity, cfg.order());
            row.build_ns = median(build_t);
            row.prove_ns = median(prove_t);
            row.verify_ns = median(verify_t);
            rows.push_back(row);
        }
    }
    return rows;
}

inline void write_bench_csv(std::ostream& os, const std::vector<bench_row>& rows)
{
    os << "kind,arity,order,n,depth,depth_per_axis,build_ns,prove_ns,verify_ns,proof_bytes,hashes,openings,quotients\n";
    for (const auto& r : rows)
        os << r.kind << ',' << r.arity << ',' << r.order << ',' << r.n << ',' << r.depth << ',' << r.depth_alt << ','
           << static_cast<long long>(r.build_ns) << ',' << static_cast<long long>(r.prove_ns) << ','
           << static_cast<long long>(r.verify_ns) << ',' << r.proof_bytes << ',' << r.hashes << ',' << r.openings
           << ',' << r.quotients << '\n';
}

}  // namespace tensorcommit::authtree
