#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "envylab/random.hpp"

namespace envylab {

using index_t = std::uint32_t;

/// Complete strict rankings for one side of the market, stored both as
/// position -> item (row) and item -> position (rank) so that pairwise
/// comparisons are O(1).
class PreferenceTable {
public:
    PreferenceTable() = default;

    /// Validates that every row is a permutation of {0..n-1}.
    static PreferenceTable from_rows(const std::vector<std::vector<index_t>>& rows);

    /// Takes a flat row-major block of n permutations of length n.
    static PreferenceTable from_flat(index_t n, std::vector<index_t> ranking);

    index_t size() const noexcept { return n_; }

    std::span<const index_t> row(index_t agent) const noexcept {
        return {ranking_.data() + std::size_t(agent) * n_, n_};
    }
    // 0-based: at(a, 0) is a's favourite.
    index_t at(index_t agent, index_t position) const noexcept {
        return ranking_[std::size_t(agent) * n_ + position];
    }
    index_t position_of(index_t agent, index_t item) const noexcept {
        return position_[std::size_t(agent) * n_ + item];
    }
    bool prefers(index_t agent, index_t a, index_t b) const noexcept {
        return position_of(agent, a) < position_of(agent, b);
    }

    std::vector<std::vector<index_t>> rows() const;

    friend bool operator==(const PreferenceTable& a, const PreferenceTable& b) {
        return a.n_ == b.n_ && a.ranking_ == b.ranking_;
    }

private:
    index_t n_ = 0;
    std::vector<index_t> ranking_;
    std::vector<index_t> position_;
};

/// One random school choice problem of size n.
struct MarketInstance {
    PreferenceTable student_prefs;     // student -> schools, most preferred first
    PreferenceTable school_priorities; // school -> students, highest priority first

    index_t size() const noexcept { return student_prefs.size(); }

    static MarketInstance from_rows(const std::vector<std::vector<index_t>>& students,
                                    const std::vector<std::vector<index_t>>& schools);

    friend bool operator==(const MarketInstance&, const MarketInstance&) = default;
};

/// Perfect one-to-one assignment, student -> school.
struct Matching {
    std::vector<index_t> assignment;

    index_t size() const noexcept { return static_cast<index_t>(assignment.size()); }
    index_t school_of(index_t student) const noexcept { return assignment[student]; }

    bool is_perfect() const;
    /// school -> student. Requires is_perfect().
    std::vector<index_t> holders() const;

    friend bool operator==(const Matching&, const Matching&) = default;
};

template <class Rng>
index_t uniform_index(Rng& rng, index_t n) {
    return std::uniform_int_distribution<index_t>(0, n - 1)(rng);
}

template <class Rng>
std::vector<index_t> random_permutation(index_t n, Rng& rng) {
    std::vector<index_t> perm(n);
    for (index_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    return perm;
}

/// n independent uniform rankings drawn from one generator.
template <class Rng>
PreferenceTable random_preferences(index_t n, Rng& rng) {
    std::vector<index_t> flat;
    flat.reserve(std::size_t(n) * n);
    for (index_t a = 0; a < n; ++a) {
        auto p = random_permutation(n, rng);
        flat.insert(flat.end(), p.begin(), p.end());
    }
    return PreferenceTable::from_flat(n, std::move(flat));
}

/// Uniform student preferences alone, from the same stream generate_market
/// uses for them.
PreferenceTable generate_student_preferences(index_t n, const Seed& seed);
PreferenceTable generate_school_priorities(index_t n, const Seed& seed);

/// Draws all 2n rankings independently and uniformly. Throws
/// std::invalid_argument for n == 0.
MarketInstance generate_market(index_t n, const Seed& seed);

/// A consumed raw draw: `student` read `school` from her sequence.
struct RawDraw {
    index_t student;
    index_t school;
    friend bool operator==(const RawDraw&, const RawDraw&) = default;
};
using DrawLog = std::vector<RawDraw>;

class PreferencesExhausted : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Preferences revealed on demand from i.i.d. uniform raw draws, keeping
/// only the first occurrence of each school. `Source` yields raw draws in
/// [0, n).
template <class Source>
class BasicPreferenceStream {
public:
    BasicPreferenceStream(index_t student, index_t n, Source source)
        : student_(student), n_(n), source_(std::move(source)) {}

    index_t student() const noexcept { return student_; }
    index_t size() const noexcept { return n_; }
    bool exhausted() const noexcept { return emitted_.size() == n_; }
    std::span<const index_t> emitted() const noexcept { return emitted_; }
    std::uint64_t raw_draws() const noexcept { return raw_draws_; }

    /// Next untried school. Every raw draw read, including discarded repeats,
    /// is appended to `log`.
    index_t next_proposal(DrawLog& log) {
        if (exhausted()) throw PreferencesExhausted("preference stream exhausted");
        if (seen_.empty()) seen_.assign(n_, false);
        for (;;) {
            const index_t school = source_();
            ++raw_draws_;
            log.push_back({student_, school});
            if (!seen_[school]) {
                seen_[school] = true;
                emitted_.push_back(school);
                return school;
            }
        }
    }

private:
    index_t student_;
    index_t n_;
    Source source_;
    std::vector<bool> seen_;
    std::vector<index_t> emitted_;
    std::uint64_t raw_draws_ = 0;
};

/// Raw draws from a counter-based generator.
class UniformDrawSource {
public:
    UniformDrawSource(index_t n, CounterRng rng) : n_(n), rng_(rng) {}
    index_t operator()() { return uniform_index(rng_, n_); }

private:
    index_t n_;
    CounterRng rng_;
};

using LazyPreferenceStream = BasicPreferenceStream<UniformDrawSource>;

/// All n students' lazy streams for one replication plus the shared draw log.
/// Student i's sequence depends only on (seed, i), never on the order in
/// which students are asked to propose.
class LazyStudentPreferences {
public:
    LazyStudentPreferences(index_t n, const Seed& seed);

    index_t size() const noexcept { return static_cast<index_t>(streams_.size()); }
    index_t next_proposal(index_t student) { return streams_[student].next_proposal(log_); }
    const DrawLog& draw_log() const noexcept { return log_; }
    const LazyPreferenceStream& stream(index_t student) const { return streams_[student]; }

    /// Revealed prefixes, one per student.
    std::vector<std::vector<index_t>> realized_profile() const;

    /// Full rankings obtained by reading every stream to exhaustion. Works on
    /// copies; this object's streams and log are unchanged.
    PreferenceTable completed() const;

private:
    std::vector<LazyPreferenceStream> streams_;
    DrawLog log_;
};

template <class Source>
std::vector<std::vector<index_t>> realized_profile(std::span<const BasicPreferenceStream<Source>> streams) {
    std::vector<std::vector<index_t>> out;
    out.reserve(streams.size());
    for (const auto& s : streams) out.emplace_back(s.emitted().begin(), s.emitted().end());
    return out;
}

}  // namespace envylab
