#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "tensorcommit/errors.hpp"

namespace tensorcommit::select {

/// Default tail size: a tenth of the spectrum, capped at 1000.
inline std::size_t default_chi(std::size_t d)
{
    std::size_t chi = std::min<std::size_t>((d + 9) / 10, 1000);
    if (chi >= d) chi = d - 1;
    return std::max<std::size_t>(chi, 1);
}

/// Hill tail estimate over the `chi` largest eigenvalues of an ascending
/// spectrum: 1 + chi / sum_{r=1..chi} ln(L_{d-r+1} / L_{d-chi}), 1-based.
inline double hill_alpha(std::span<const double> eigs, std::size_t chi)
{
    const std::size_t d = eigs.size();
    if (chi < 1 || chi >= d) throw domain_error("tail size must satisfy 1 <= chi < d");
    if (!std::is_sorted(eigs.begin(), eigs.end())) throw domain_error("eigenvalues must be sorted ascending");
    if (eigs.front() < 0) throw domain_error("negative eigenvalue");
    const double cut = eigs[d - chi - 1];
    if (!(cut > 0)) throw domain_error("tail cut eigenvalue must be positive");
    double denom = 0;
    for (std::size_t r = 1; r <= chi; ++r) denom += std::log(eigs[d - r] / cut);
    if (!(denom > 0)) throw domain_error("degenerate tail: the top eigenvalues are all equal");
    return 1.0 + static_cast<double>(chi) / denom;
}

inline double hill_alpha(std::span<const double> eigs) { return hill_alpha(eigs, default_chi(eigs.size())); }

/// nu_i = (a_max - a_i) / (a_max - a_min) * P_i / sum P. When every alpha is
/// equal the spectral factor is undefined and nu falls back to P_i / sum P.
inline std::vector<double> benefit_scores(std::span<const double> alphas, std::span<const double> params)
{
    if (alphas.size() != params.size()) throw shape_error("alpha and parameter-count lists differ in length");
    if (alphas.size() < 2) throw shape_error("benefit scores need at least two layers");
    double total = 0;
    for (double p : params) {
        if (p < 0) throw domain_error("negative parameter count");
        total += p;
    }
    if (!(total > 0)) throw domain_error("total parameter count must be positive");
    const auto [lo, hi] = std::minmax_element(alphas.begin(), alphas.end());
    const double span = *hi - *lo;
    std::vector<double> nu(alphas.size());
    for (std::size_t i = 0; i < nu.size(); ++i) {
        const double share = params[i] / total;
        nu[i] = span > 0 ? (*hi - alphas[i]) / span * share : share;
    }
    return nu;
}

}  // namespace tensorcommit::select
