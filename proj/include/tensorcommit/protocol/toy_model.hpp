#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "tensorcommit/errors.hpp"
#include "tensorcommit/mvpoly/shape.hpp"
#include "tensorcommit/select/profile.hpp"

namespace tensorcommit::protocol {

/// Activation and weight grids. Products of grid values and their sums stay
/// exact in double precision, so every forward pass is bit-reproducible.
inline constexpr int activation_bits = 16;
inline constexpr int weight_bits = 10;

inline double round_to_grid(double v, int bits) { return std::ldexp(std::nearbyint(std::ldexp(v, bits)), -bits); }

struct model_config {
    std::size_t layers = 16;
    mvpoly::shape tensor_shape{4, 4, 4};
    std::uint64_t seed = 42;
    double alpha_min = 1.5;  // heaviest spectral tail
    double alpha_max = 6.0;  // lightest spectral tail
    double gain = 0.2;       // smallest singular value of each layer
};

/// Residual MLP h_l = c_l (h_{l-1} + leaky(W_l h_{l-1})) with width
/// prod(tensor_shape). Layer l draws the eigenvalues of W_l^T W_l from a power
/// law with exponent alphas[l]; heavier tails give the layer larger top
/// singular values. The scales c_l keep the activation RMS near its input level.
struct toy_model {
    model_config config;
    std::size_t width = 0;
    std::vector<double> alphas;
    std::vector<std::vector<double>> weights;  // row-major width x width
    std::vector<double> scales;                // on the weight grid

    std::size_t layers() const { return weights.size(); }
};

/// Leaky ReLU with slope 1/8, exact on the grids above.
inline double leaky(double z) { return z >= 0 ? z : z * 0.125; }

/// Entry r of one layer's output; `h` must lie on the activation grid.
inline double layer_entry(std::span<const double> w, double scale, std::span<const double> h, std::size_t r)
{
    const std::size_t n = h.size();
    double z = 0;
    for (std::size_t c = 0; c < n; ++c) z += w[r * n + c] * h[c];
    return round_to_grid(scale * round_to_grid(h[r] + leaky(z), activation_bits), activation_bits);
}

inline std::vector<double> apply_layer(std::span<const double> w, double scale, std::span<const double> h)
{
    const std::size_t n = h.size();
    if (w.size() != n * n) throw shape_error("weight matrix does not match the activation width");
    std::vector<double> out(n);
    for (std::size_t r = 0; r < n; ++r) out[r] = layer_entry(w, scale, h, r);
    return out;
}

inline toy_model make_toy_model(const model_config& cfg)
{
    if (cfg.layers < 1) throw shape_error("model needs at least one layer");
    if (!(cfg.alpha_min > 1) || cfg.alpha_max < cfg.alpha_min) throw domain_error("bad spectral exponent range");
    toy_model m;
    m.config = cfg;
    m.width = mvpoly::shape_size(cfg.tensor_shape);
    const std::size_t n = m.width;
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t l = 0; l < cfg.layers; ++l) {
        const double alpha = cfg.alpha_min + (cfg.alpha_max - cfg.alpha_min) * u(rng);
        std::vector<double> lam(n);
        for (auto& x : lam) x = std::pow(1.0 - u(rng), -1.0 / (alpha - 1.0));
        std::sort(lam.begin(), lam.end());
        const double lam_min = lam[0];
        Eigen::MatrixXd a(n, n), b(n, n);
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            a.data()[i] = g(rng);
            b.data()[i] = g(rng);
        }
        Eigen::MatrixXd uq = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ();
        Eigen::MatrixXd vq = Eigen::HouseholderQR<Eigen::MatrixXd>(b).householderQ();
        Eigen::VectorXd sig(n);
        for (std::size_t i = 0; i < n; ++i) sig[static_cast<Eigen::Index>(i)] = cfg.gain * std::sqrt(lam[i] / lam_min);
        Eigen::MatrixXd w = uq * sig.asDiagonal() * vq.transpose();
        std::vector<double> flat(n * n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                flat[r * n + c] = round_to_grid(w(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)), weight_bits);
        m.alphas.push_back(alpha);
        m.weights.push_back(std::move(flat));
    }
    // calibrate c_l on a fixed batch of inputs
    std::vector<std::vector<double>> batch(32, std::vector<double>(n));
    for (auto& x : batch)
        for (auto& v : x) v = round_to_grid(2 * u(rng) - 1, activation_bits);
    auto rms = [](const std::vector<double>& v) {
        double s = 0;
        for (double x : v) s += x * x;
        return std::sqrt(s / static_cast<double>(v.size()));
    };
    for (std::size_t l = 0; l < cfg.layers; ++l) {
        double before = 0, after = 0;
        for (auto& x : batch) {
            before += rms(x);
            x = apply_layer(m.weights[l], 1.0, x);
            after += rms(x);
        }
        const double c = round_to_grid(after > 0 ? before / after : 1.0, weight_bits);
        for (auto& x : batch)
            for (auto& v : x) v = round_to_grid(c * v, activation_bits);
        m.scales.push_back(c);
    }
    return m;
}

/// Input vector on the activation grid with entries in [-1, 1].
inline std::vector<double> make_input(std::size_t width, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> x(width);
    for (auto& v : x) v = round_to_grid(u(rng), activation_bits);
    return x;
}

/// Activations of one inference: acts[0] is the input, acts[l] the output of layer l.
struct capture {
    std::vector<std::vector<double>> acts;

    const std::vector<double>& output() const { return acts.back(); }
};

inline capture infer_and_capture(const toy_model& m, std::span<const double> input)
{
    if (input.size() != m.width) throw shape_error("input width does not match the model");
    capture c;
    c.acts.emplace_back(input.begin(), input.end());
    for (auto& v : c.acts[0]) v = round_to_grid(v, activation_bits);
    for (std::size_t l = 0; l < m.layers(); ++l) c.acts.push_back(apply_layer(m.weights[l], m.scales[l], c.acts.back()));
    return c;
}

inline std::size_t argmax(std::span<const double> v)
{
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

/// Indices of the K largest entries, ascending by index; ties go to the lower index.
inline std::vector<std::size_t> top_k(std::span<const double> v, std::size_t k)
{
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    k = std::min(k, idx.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                      [&](std::size_t a, std::size_t b) { return v[a] > v[b] || (v[a] == v[b] && a < b); });
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

/// Gap between the K-th and (K+1)-th largest entries.
inline double top_k_margin(std::span<const double> v, std::size_t k)
{
    if (k == 0 || k >= v.size()) throw domain_error("top-K size must be in [1, width)");
    std::vector<double> s(v.begin(), v.end());
    std::sort(s.begin(), s.end(), std::greater<>());
    return s[k - 1] - s[k];
}

/// Published per-layer spectra: eigenvalues of W^T W, parameter count and unit cost.
inline std::vector<select::layer_profile> layer_profiles(const toy_model& m)
{
    std::vector<select::layer_profile> out;
    const auto n = static_cast<Eigen::Index>(m.width);
    for (std::size_t l = 0; l < m.layers(); ++l) {
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> w(m.weights[l].data(), n, n);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w.transpose() * w, Eigen::EigenvaluesOnly);
        select::layer_profile p;
        p.layer_id = l + 1;
        p.param_count = static_cast<double>(m.weights[l].size());
        p.cost = 1;
        for (Eigen::Index i = 0; i < n; ++i) p.eigenvalues.push_back(std::max(0.0, es.eigenvalues()[i]));
        std::sort(p.eigenvalues.begin(), p.eigenvalues.end());
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace tensorcommit::protocol
