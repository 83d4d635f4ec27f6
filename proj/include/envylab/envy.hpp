#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "envylab/market.hpp"
#include "envylab/mechanisms.hpp"

namespace envylab {

/// Directed envy graph on students: i -> j iff i strictly prefers j's school
/// to her own.
class EnvyGraph {
public:
    EnvyGraph() = default;
    explicit EnvyGraph(index_t n) : out_(n), in_degree_(n, 0) {}

    index_t size() const noexcept { return static_cast<index_t>(out_.size()); }
    void add_edge(index_t from, index_t to);

    std::span<const index_t> envied_by(index_t i) const noexcept { return out_[i]; }
    std::size_t out_degree(index_t i) const noexcept { return out_[i].size(); }
    std::size_t in_degree(index_t i) const noexcept { return in_degree_[i]; }
    std::size_t edge_count() const noexcept { return edges_; }
    bool has_edge(index_t from, index_t to) const;

private:
    std::vector<std::vector<index_t>> out_;
    std::vector<std::size_t> in_degree_;
    std::size_t edges_ = 0;
};

/// In- and out-degrees of the envy graph without the edges.
struct EnvyDegrees {
    std::vector<std::size_t> in;
    std::vector<std::size_t> out;

    std::size_t edge_count() const noexcept;
};

EnvyGraph build_envy_graph(const PreferenceTable& student_prefs, const Matching& matching);
inline EnvyGraph build_envy_graph(const MarketInstance& market, const Matching& matching) {
    return build_envy_graph(market.student_prefs, matching);
}

EnvyDegrees envy_degrees(const PreferenceTable& student_prefs, const Matching& matching);

/// Degrees from revealed preference prefixes. Each prefix must contain the
/// student's matched school; everything before it is what she envies.
EnvyDegrees envy_degrees(const std::vector<std::vector<index_t>>& prefixes, const Matching& matching);

/// Students nobody envies (in-degree 0).
std::size_t unenvied_count(const EnvyGraph& graph);
std::size_t unenvied_count(const EnvyDegrees& degrees);

/// Students who envy nobody (out-degree 0).
std::size_t envy_nobody_count(const EnvyGraph& graph);
std::size_t envy_nobody_count(const EnvyDegrees& degrees);

/// counts[k-1] = number of students matched to their k-th choice.
struct RankHistogram {
    std::vector<std::uint64_t> counts;

    std::uint64_t total() const noexcept;
    std::uint64_t at_rank(std::size_t k) const { return counts.at(k - 1); }
    double pmf(std::size_t k) const;
    RankHistogram& operator+=(const RankHistogram& other);
};

RankHistogram rank_histogram(const PreferenceTable& student_prefs, const Matching& matching);
inline RankHistogram rank_histogram(const MarketInstance& market, const Matching& matching) {
    return rank_histogram(market.student_prefs, matching);
}
/// From 1-based ranks; the histogram has n = ranks.size() bins.
RankHistogram rank_histogram(std::span<const index_t> ranks);

/// 1-based rank of each student's match within her revealed prefix.
std::vector<index_t> ranks_from_prefixes(const std::vector<std::vector<index_t>>& prefixes,
                                         const Matching& matching);

/// Number of distinct students proposing to each school over the run.
std::vector<std::size_t> distinct_proposers(const ProposalLog& log, index_t n);

/// In-degrees computed from the run alone: distinct proposers to the
/// student's matched school, minus one.
std::vector<std::size_t> in_degrees_from_proposals(const ProposalLog& log, const Matching& matching);

/// Schools that received proposals from exactly one distinct student, sorted.
std::vector<index_t> under_demanded_schools(const ProposalLog& log);

/// Schools appearing exactly once among the raw draws, sorted.
std::vector<index_t> schools_drawn_once(const DrawLog& draws);

}  // namespace envylab
