#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "tensorcommit/errors.hpp"

namespace tensorcommit::select {

/// Closed layer range [start, end], 1-based.
struct interval {
    std::size_t start = 0;
    std::size_t end = 0;
    friend bool operator==(const interval&, const interval&) = default;
};

struct selection_plan {
    std::vector<std::optional<interval>> intervals;  // one slot per verifier
    std::vector<double> cost;                        // per verifier
    std::vector<double> benefit;                     // per verifier
    double total_benefit = 0;

    /// Selected layers, 1-based, ascending.
    std::vector<std::size_t> layers() const
    {
        std::vector<std::size_t> out;
        for (const auto& iv : intervals)
            if (iv)
                for (std::size_t l = iv->start; l <= iv->end; ++l) out.push_back(l);
        std::sort(out.begin(), out.end());
        return out;
    }
};

namespace detail {

inline void check_inputs(std::span<const double> nu, std::span<const double> phi, std::span<const double> budgets)
{
    if (nu.empty()) throw shape_error("empty layer list");
    if (nu.size() != phi.size()) throw shape_error("benefit and cost lists differ in length");
    for (double c : phi)
        if (!(c > 0)) throw domain_error("layer costs must be positive");
    for (double b : budgets)
        if (b < 0) throw domain_error("budgets must be non-negative");
}

inline std::vector<double> prefix(std::span<const double> v)
{
    std::vector<double> p(v.size() + 1, 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) p[i + 1] = p[i] + v[i];
    return p;
}

struct dp_workspace {
    std::vector<double> dp;
    std::vector<std::uint32_t> from;
    std::vector<std::uint8_t> from_cls;
    std::vector<std::uint32_t> dq;
};

}  // namespace detail

/// Checks disjointness, contiguity, budgets and the recorded totals.
inline bool validate_plan(const selection_plan& plan, std::span<const double> nu, std::span<const double> phi,
                          std::span<const double> budgets)
{
    if (plan.intervals.size() != budgets.size()) return false;
    std::vector<bool> used(nu.size() + 1, false);
    for (std::size_t k = 0; k < budgets.size(); ++k) {
        const auto& iv = plan.intervals[k];
        if (!iv) continue;
        if (iv->start < 1 || iv->end < iv->start || iv->end > nu.size()) return false;
        double c = 0;
        for (std::size_t l = iv->start; l <= iv->end; ++l) {
            if (used[l]) return false;
            used[l] = true;
            c += phi[l - 1];
        }
        if (c > budgets[k]) return false;
    }
    return true;
}

/// Exact solver for the interval selection problem: each verifier k picks at
/// most one contiguous layer range of cost <= beta_k, ranges are disjoint,
/// and the summed benefit is maximal.
///
/// Verifiers sharing a budget are interchangeable, so the state is the number
/// of ranges handed out per budget class. For each state and class the best
/// start is a sliding-window maximum of F(s) = DP[prev][s-1] - V[s-1], kept in
/// a monotone deque; with a single budget class this is O(M L).
inline selection_plan dp_select(std::span<const double> nu, std::span<const double> phi, std::span<const double> budgets)
{
    detail::check_inputs(nu, phi, budgets);
    const std::size_t L = nu.size();
    if (L >= std::numeric_limits<std::uint32_t>::max()) throw overflow_error("too many layers");
    const auto V = detail::prefix(nu);
    const auto P = detail::prefix(phi);

    // budget classes, ascending budget; members keep ascending verifier order
    std::map<double, std::vector<std::size_t>> by_budget;
    for (std::size_t k = 0; k < budgets.size(); ++k) by_budget[budgets[k]].push_back(k);
    std::vector<double> cls_budget;
    std::vector<std::vector<std::size_t>> cls_members;
    for (auto& [b, ks] : by_budget) {
        cls_budget.push_back(b);
        cls_members.push_back(ks);
    }
    const std::size_t C = cls_budget.size();
    std::vector<std::size_t> radix(C), place(C);
    std::size_t states = 1;
    for (std::size_t c = 0; c < C; ++c) {
        radix[c] = cls_members[c].size() + 1;
        place[c] = states;
        if (states > (std::size_t(1) << 20) / radix[c]) throw overflow_error("too many distinct budget classes");
        states *= radix[c];
    }
    auto digit = [&](std::size_t u, std::size_t c) { return (u / place[c]) % radix[c]; };

    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    // flat tables of width L + 1; start 0 marks layer i left unassigned
    const std::size_t W = L + 1;
    // scratch tables live per thread so repeated calls skip fresh page faults
    thread_local detail::dp_workspace ws;
    auto& dp = ws.dp;
    auto& from = ws.from;
    auto& from_cls = ws.from_cls;
    auto& dq = ws.dq;
    // every cell of rows u >= 1 is written below, so only row 0 needs filling;
    // a single class only ever reads row u - 1, so two rolling rows suffice
    const std::size_t rows = C == 1 ? 2 : states;
    auto dp_row = [&](std::size_t u) { return dp.data() + (C == 1 ? u % 2 : u) * W; };
    std::vector<double> final_value(states, 0.0);
    dp.resize(rows * W);
    from.resize(states * W);
    // class tags are only needed to tell classes apart
    from_cls.resize(C > 1 ? states * W : 0);
    std::fill(dp.begin(), dp.begin() + static_cast<std::ptrdiff_t>(W), 0.0);

    // one monotone deque per class, stored as [head, tail) over a flat buffer
    dq.resize(C * L);
    struct lane {
        const double* prev;
        std::uint32_t* q;
        double budget;
        std::size_t head, tail, lo;
        std::uint8_t cls;
    };
    std::vector<lane> active;
    active.reserve(C);
    const double* Vp = V.data();
    const double* Pp = P.data();
    for (std::size_t u = 1; u < states; ++u) {
        double* row = dp_row(u);
        std::uint32_t* fr = from.data() + u * W;
        std::uint8_t* fc = C > 1 ? from_cls.data() + u * W : nullptr;
        row[0] = neg_inf;
        active.clear();
        for (std::size_t c = 0; c < C; ++c)
            if (digit(u, c) > 0)
                active.push_back({dp_row(u - place[c]), dq.data() + c * L, cls_budget[c], 0, 0, 1,
                                  static_cast<std::uint8_t>(c)});
        for (std::size_t i = 1; i <= L; ++i) {
            double best = row[i - 1];
            std::uint32_t best_s = 0;
            std::uint8_t best_c = 0;
            for (auto& a : active) {
                const double* prev = a.prev;
                auto F = [prev, Vp](std::size_t s) { return prev[s - 1] - Vp[s - 1]; };
                std::size_t head = a.head, tail = a.tail, lo = a.lo;
                if (prev[i - 1] != neg_inf) {
                    // strict comparison keeps the earliest start among ties
                    const double fi = F(i);
                    while (tail > head && F(a.q[tail - 1]) < fi) --tail;
                    a.q[tail++] = static_cast<std::uint32_t>(i);
                }
                while (Pp[i] - Pp[lo - 1] > a.budget) ++lo;
                while (tail > head && a.q[head] < lo) ++head;
                if (tail > head) {
                    const double cand = F(a.q[head]) + Vp[i];
                    if (cand > best) {
                        best = cand;
                        best_s = a.q[head];
                        best_c = a.cls;
                    }
                }
                a.head = head;
                a.tail = tail;
                a.lo = lo;
            }
            row[i] = best;
            fr[i] = best_s;
            if (fc) fc[i] = best_c;
        }
        final_value[u] = row[L];
    }

    std::size_t u_best = 0;
    for (std::size_t u = 1; u < states; ++u)
        if (final_value[u] > final_value[u_best]) u_best = u;

    std::vector<std::vector<interval>> per_class(C);
    for (std::size_t u = u_best, i = L; u != 0 && i > 0;) {
        const std::size_t s = from[u * W + i];
        if (s == 0) {
            --i;
            continue;
        }
        const std::size_t c = C > 1 ? from_cls[u * W + i] : 0;
        per_class[c].push_back({s, i});
        u -= place[c];
        i = s - 1;
    }

    selection_plan plan;
    plan.intervals.assign(budgets.size(), std::nullopt);
    plan.cost.assign(budgets.size(), 0.0);
    plan.benefit.assign(budgets.size(), 0.0);
    for (std::size_t c = 0; c < C; ++c) {
        auto& ivs = per_class[c];
        std::sort(ivs.begin(), ivs.end(), [](const interval& a, const interval& b) { return a.start < b.start; });
        for (std::size_t t = 0; t < ivs.size(); ++t) {
            const auto k = cls_members[c][t];
            plan.intervals[k] = ivs[t];
            plan.cost[k] = P[ivs[t].end] - P[ivs[t].start - 1];
            plan.benefit[k] = V[ivs[t].end] - V[ivs[t].start - 1];
        }
    }
    plan.total_benefit = final_value[u_best];
    return plan;
}

/// Exhaustive optimum over all assignments of disjoint ranges (L <= 10, M <= 3).
inline double ilp_bruteforce(std::span<const double> nu, std::span<const double> phi, std::span<const double> budgets)
{
    detail::check_inputs(nu, phi, budgets);
    const std::size_t L = nu.size(), M = budgets.size();
    if (L > 10 || M > 3) throw domain_error("instance too large for exhaustive enumeration");
    struct cand {
        std::uint32_t mask;
        double benefit;
        double cost;
    };
    std::vector<cand> all;
    for (std::size_t s = 0; s < L; ++s) {
        std::uint32_t mask = 0;
        double b = 0, c = 0;
        for (std::size_t e = s; e < L; ++e) {
            mask |= 1u << e;
            b += nu[e];
            c += phi[e];
            all.push_back({mask, b, c});
        }
    }
    double best = 0;
    auto rec = [&](auto&& self, std::size_t k, std::uint32_t used, double acc) -> void {
        if (k == M) {
            best = std::max(best, acc);
            return;
        }
        self(self, k + 1, used, acc);
        for (const auto& cd : all)
            if (!(cd.mask & used) && cd.cost <= budgets[k]) self(self, k + 1, used | cd.mask, acc + cd.benefit);
    };
    rec(rec, 0, 0, 0.0);
    return best;
}

}  // namespace tensorcommit::select
