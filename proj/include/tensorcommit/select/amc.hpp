#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

namespace tensorcommit::select {

/// One attack: the layers it touched and whether it succeeded.
struct attack_record {
    std::set<std::size_t> layers;
    bool success = false;
};

/// Mean of |xi ∩ S| / |xi| over successful attacks; nullopt when none succeeded.
inline std::optional<double> amc(const std::set<std::size_t>& selected, const std::vector<attack_record>& attacks)
{
    double sum = 0;
    std::size_t n = 0;
    for (const auto& a : attacks) {
        if (!a.success || a.layers.empty()) continue;
        std::size_t hit = 0;
        for (auto l : a.layers) hit += selected.count(l);
        sum += static_cast<double>(hit) / static_cast<double>(a.layers.size());
        ++n;
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

}  // namespace tensorcommit::select
