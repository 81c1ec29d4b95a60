#pragma once

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "tensorcommit/errors.hpp"
#include "tensorcommit/select/hill.hpp"
#include "tensorcommit/select/interval_dp.hpp"

namespace tensorcommit::select {

/// Spectrum and size data for one layer. Eigenvalues are ascending.
struct layer_profile {
    std::size_t layer_id = 0;
    double param_count = 0;
    double cost = 1;
    std::vector<double> eigenvalues;
};

inline void check_profile(const layer_profile& p)
{
    if (!(p.cost > 0)) throw domain_error("layer cost must be positive");
    if (!std::is_sorted(p.eigenvalues.begin(), p.eigenvalues.end())) throw domain_error("eigenvalues must be ascending");
    if (!p.eigenvalues.empty() && p.eigenvalues.front() < 0) throw domain_error("negative eigenvalue");
}

namespace detail {

inline double parse_double(const std::string& s, const char* what)
{
    double v = 0;
    const char* b = s.data();
    const char* e = b + s.size();
    while (b < e && *b == ' ') ++b;
    while (e > b && (e[-1] == ' ' || e[-1] == '\r')) --e;
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e || b == e) throw format_error(std::string("bad ") + what + " '" + s + "'");
    return v;
}

inline std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

}  // namespace detail

/// CSV with header layer_id,param_count,cost,eigenvalues; eigenvalues are ';'-joined.
inline std::vector<layer_profile> read_profiles(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line)) throw format_error("empty profile file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "layer_id,param_count,cost,eigenvalues") throw format_error("unexpected profile header");
    std::vector<layer_profile> out;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto f = detail::split(line, ',');
        if (f.size() != 4) throw format_error("profile row needs 4 fields");
        layer_profile p;
        const double id = detail::parse_double(f[0], "layer id");
        if (id < 0 || id != static_cast<double>(static_cast<std::size_t>(id))) throw format_error("bad layer id");
        p.layer_id = static_cast<std::size_t>(id);
        p.param_count = detail::parse_double(f[1], "parameter count");
        p.cost = detail::parse_double(f[2], "cost");
        for (const auto& e : detail::split(f[3], ';')) p.eigenvalues.push_back(detail::parse_double(e, "eigenvalue"));
        check_profile(p);
        out.push_back(std::move(p));
    }
    if (out.empty()) throw format_error("profile has no layers");
    return out;
}

inline void write_profiles(std::ostream& os, const std::vector<layer_profile>& profiles)
{
    os.precision(17);
    os << "layer_id,param_count,cost,eigenvalues\n";
    for (const auto& p : profiles) {
        os << p.layer_id << ',' << p.param_count << ',' << p.cost << ',';
        for (std::size_t i = 0; i < p.eigenvalues.size(); ++i) os << (i ? ";" : "") << p.eigenvalues[i];
        os << '\n';
    }
}

/// Benefit weights from spectra: Hill alpha per layer (default tail), then normalized.
inline std::vector<double> profile_benefits(const std::vector<layer_profile>& profiles)
{
    std::vector<double> alphas, params;
    for (const auto& p : profiles) {
        alphas.push_back(hill_alpha(p.eigenvalues));
        params.push_back(p.param_count);
    }
    return benefit_scores(alphas, params);
}

inline std::vector<double> profile_costs(const std::vector<layer_profile>& profiles)
{
    std::vector<double> c;
    for (const auto& p : profiles) c.push_back(p.cost);
    return c;
}

/// CSV: verifier,start,end,cost,benefit; unused verifiers are omitted. 1-based.
inline void write_plan(std::ostream& os, const selection_plan& plan)
{
    os.precision(17);
    os << "verifier,start,end,cost,benefit\n";
    for (std::size_t k = 0; k < plan.intervals.size(); ++k)
        if (plan.intervals[k])
            os << k + 1 << ',' << plan.intervals[k]->start << ',' << plan.intervals[k]->end << ',' << plan.cost[k] << ','
               << plan.benefit[k] << '\n';
}

}  // namespace tensorcommit::select
