#pragma once

// Test-only reference implementations written straight from the
// definitions, sharing no code with the library's algorithms.

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

#include "envylab/market.hpp"

namespace envylab::testing {

using Rows = std::vector<std::vector<index_t>>;

inline std::size_t pos(const std::vector<index_t>& row, index_t item) {
    return static_cast<std::size_t>(std::find(row.begin(), row.end(), item) - row.begin());
}

/// A matching (student -> school) is stable if no student and school both
/// prefer each other to what they have.
inline bool is_stable(const Rows& students, const Rows& schools, const std::vector<index_t>& match) {
    const auto n = match.size();
    std::vector<index_t> holder(n);
    for (index_t i = 0; i < n; ++i) holder[match[i]] = i;
    for (index_t i = 0; i < n; ++i) {
        for (index_t s = 0; s < n; ++s) {
            if (pos(students[i], s) < pos(students[i], match[i]) && pos(schools[s], i) < pos(schools[s], holder[s])) {
                return false;
            }
        }
    }
    return true;
}

/// The stable matching every student weakly prefers to all other stable
/// matchings, found by enumerating all n! matchings.
inline std::optional<std::vector<index_t>> student_optimal_stable(const Rows& students, const Rows& schools) {
    const auto n = static_cast<index_t>(students.size());
    std::vector<index_t> perm(n);
    std::iota(perm.begin(), perm.end(), index_t{0});
    std::vector<std::vector<index_t>> stable;
    do {
        if (is_stable(students, schools, perm)) stable.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (const auto& cand : stable) {
        bool best = true;
        for (const auto& other : stable) {
            for (index_t i = 0; i < n && best; ++i) {
                if (pos(students[i], other[i]) < pos(students[i], cand[i])) best = false;
            }
        }
        if (best) return cand;
    }
    return std::nullopt;
}

/// Edge set by definition: i -> j iff i ranks j's school above her own.
inline std::vector<std::vector<bool>> envy_matrix(const Rows& students, const std::vector<index_t>& match) {
    const auto n = match.size();
    std::vector<std::vector<bool>> e(n, std::vector<bool>(n, false));
    for (index_t i = 0; i < n; ++i) {
        for (index_t j = 0; j < n; ++j) {
            e[i][j] = i != j && pos(students[i], match[j]) < pos(students[i], match[i]);
        }
    }
    return e;
}

/// Top trading cycles recomputed from scratch every round.
inline std::vector<index_t> naive_ttc(const Rows& students, const std::vector<index_t>& owns) {
    const auto n = static_cast<index_t>(students.size());
    std::vector<bool> active(n, true);
    std::vector<index_t> result(n, 0);
    index_t left = n;
    while (left > 0) {
        std::vector<index_t> points(n, 0), target(n, 0);
        for (index_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            for (index_t s : students[i]) {
                const auto owner = pos(owns, s);
                if (active[owner]) {
                    target[i] = s;
                    points[i] = static_cast<index_t>(owner);
                    break;
                }
            }
        }
        std::vector<bool> in_cycle(n, false);
        for (index_t start = 0; start < n; ++start) {
            if (!active[start]) continue;
            // Walking n steps from any node lands inside a cycle.
            index_t x = start;
            for (index_t k = 0; k < n; ++k) x = points[x];
            index_t y = x;
            do {
                in_cycle[y] = true;
                y = points[y];
            } while (y != x);
        }
        for (index_t i = 0; i < n; ++i) {
            if (in_cycle[i]) {
                result[i] = target[i];
                active[i] = false;
                --left;
            }
        }
    }
    return result;
}

}  // namespace envylab::testing
