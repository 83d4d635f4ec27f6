#include "envylab/market.hpp"

#include <string>

namespace envylab {

namespace {

constexpr index_t kUnset = static_cast<index_t>(-1);

}  // namespace

PreferenceTable PreferenceTable::from_flat(index_t n, std::vector<index_t> ranking) {
    if (ranking.size() != std::size_t(n) * n) {
        throw std::invalid_argument("preference table must hold n rows of length n");
    }
    PreferenceTable t;
    t.n_ = n;
    t.ranking_ = std::move(ranking);
    t.position_.assign(t.ranking_.size(), kUnset);
    for (index_t a = 0; a < n; ++a) {
        for (index_t k = 0; k < n; ++k) {
            const index_t item = t.ranking_[std::size_t(a) * n + k];
            if (item >= n || t.position_[std::size_t(a) * n + item] != kUnset) {
                throw std::invalid_argument("row " + std::to_string(a) + " is not a permutation");
            }
            t.position_[std::size_t(a) * n + item] = k;
        }
    }
    return t;
}

PreferenceTable PreferenceTable::from_rows(const std::vector<std::vector<index_t>>& rows) {
    const auto n = static_cast<index_t>(rows.size());
    std::vector<index_t> flat;
    flat.reserve(std::size_t(n) * n);
    for (const auto& r : rows) {
        if (r.size() != n) throw std::invalid_argument("preference rows must have length n");
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return from_flat(n, std::move(flat));
}

std::vector<std::vector<index_t>> PreferenceTable::rows() const {
    std::vector<std::vector<index_t>> out;
    out.reserve(n_);
    for (index_t a = 0; a < n_; ++a) out.emplace_back(row(a).begin(), row(a).end());
    return out;
}

MarketInstance MarketInstance::from_rows(const std::vector<std::vector<index_t>>& students,
                                         const std::vector<std::vector<index_t>>& schools) {
    if (students.empty()) throw std::invalid_argument("market size must be at least 1");
    if (students.size() != schools.size()) {
        throw std::invalid_argument("market sides must have equal size");
    }
    return {PreferenceTable::from_rows(students), PreferenceTable::from_rows(schools)};
}

bool Matching::is_perfect() const {
    std::vector<bool> taken(assignment.size(), false);
    for (index_t s : assignment) {
        if (s >= assignment.size() || taken[s]) return false;
        taken[s] = true;
    }
    return true;
}

std::vector<index_t> Matching::holders() const {
    std::vector<index_t> h(assignment.size());
    for (index_t i = 0; i < assignment.size(); ++i) h[assignment[i]] = i;
    return h;
}

PreferenceTable generate_student_preferences(index_t n, const Seed& seed) {
    if (n == 0) throw std::invalid_argument("market size must be at least 1");
    auto rng = seed.stream(stream_tag::student_prefs);
    return random_preferences(n, rng);
}

PreferenceTable generate_school_priorities(index_t n, const Seed& seed) {
    if (n == 0) throw std::invalid_argument("market size must be at least 1");
    auto rng = seed.stream(stream_tag::school_priorities);
    return random_preferences(n, rng);
}

MarketInstance generate_market(index_t n, const Seed& seed) {
    return {generate_student_preferences(n, seed), generate_school_priorities(n, seed)};
}

LazyStudentPreferences::LazyStudentPreferences(index_t n, const Seed& seed) {
    if (n == 0) throw std::invalid_argument("market size must be at least 1");
    streams_.reserve(n);
    for (index_t i = 0; i < n; ++i) {
        streams_.emplace_back(i, n, UniformDrawSource(n, seed.stream(stream_tag::student_prefs, i)));
    }
}

std::vector<std::vector<index_t>> LazyStudentPreferences::realized_profile() const {
    return envylab::realized_profile(std::span<const LazyPreferenceStream>(streams_));
}

PreferenceTable LazyStudentPreferences::completed() const {
    const index_t n = size();
    std::vector<index_t> flat;
    flat.reserve(std::size_t(n) * n);
    DrawLog scratch;
    for (const auto& s : streams_) {
        auto copy = s;
        while (!copy.exhausted()) {
            copy.next_proposal(scratch);
            scratch.clear();
        }
        flat.insert(flat.end(), copy.emitted().begin(), copy.emitted().end());
    }
    return PreferenceTable::from_flat(n, std::move(flat));
}

}  // namespace envylab
