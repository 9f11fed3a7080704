#pragma once

#include <algorithm>
#include <set>
#include <string>

namespace elprov::detail {

// Largest K such that `prefix K` occurs in names, plus one.
inline std::size_t first_free(const std::set<std::string>& names, const std::string& prefix) {
    std::size_t next = 0;
    for (const auto& n : names) {
        if (n.size() <= prefix.size() || n.compare(0, prefix.size(), prefix) != 0) continue;
        std::string digits = n.substr(prefix.size());
        if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) continue;
        if (digits.size() > 9) continue;
        next = std::max(next, static_cast<std::size_t>(std::stoul(digits)) + 1);
    }
    return next;
}

}  // namespace elprov::detail
