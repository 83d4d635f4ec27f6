#include "envylab/envy.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace envylab {

namespace {

void require_perfect(const Matching& matching, index_t n) {
    if (matching.size() != n || !matching.is_perfect()) {
        throw std::invalid_argument("envy analysis requires a perfect matching of the market's size");
    }
}

// Calls visit(j, h) for every edge j -> h: j ranks h's school above her own.
template <class RowOf, class Visit>
void for_each_envy_edge(index_t n, RowOf&& row_of, const Matching& matching, Visit&& visit) {
    const auto holders = matching.holders();
    for (index_t j = 0; j < n; ++j) {
        const index_t own = matching.school_of(j);
        for (index_t s : row_of(j)) {
            if (s == own) break;
            visit(j, holders[s]);
        }
    }
}

template <class RowOf>
EnvyDegrees degrees_impl(index_t n, RowOf&& row_of, const Matching& matching) {
    EnvyDegrees d{std::vector<std::size_t>(n, 0), std::vector<std::size_t>(n, 0)};
    for_each_envy_edge(n, row_of, matching, [&](index_t from, index_t to) {
        ++d.out[from];
        ++d.in[to];
    });
    return d;
}

}  // namespace

void EnvyGraph::add_edge(index_t from, index_t to) {
    if (from == to) throw std::invalid_argument("envy graph has no self-loops");
    out_[from].push_back(to);
    ++in_degree_[to];
    ++edges_;
}

bool EnvyGraph::has_edge(index_t from, index_t to) const {
    const auto& v = out_[from];
    return std::find(v.begin(), v.end(), to) != v.end();
}

std::size_t EnvyDegrees::edge_count() const noexcept {
    return std::accumulate(out.begin(), out.end(), std::size_t{0});
}

EnvyGraph build_envy_graph(const PreferenceTable& prefs, const Matching& matching) {
    const index_t n = prefs.size();
    require_perfect(matching, n);
    EnvyGraph g(n);
    for_each_envy_edge(n, [&](index_t j) { return prefs.row(j); }, matching,
                       [&](index_t from, index_t to) { g.add_edge(from, to); });
    return g;
}

EnvyDegrees envy_degrees(const PreferenceTable& prefs, const Matching& matching) {
    require_perfect(matching, prefs.size());
    return degrees_impl(prefs.size(), [&](index_t j) { return prefs.row(j); }, matching);
}

EnvyDegrees envy_degrees(const std::vector<std::vector<index_t>>& prefixes, const Matching& matching) {
    const auto n = static_cast<index_t>(prefixes.size());
    require_perfect(matching, n);
    for (index_t j = 0; j < n; ++j) {
        const auto& p = prefixes[j];
        if (std::find(p.begin(), p.end(), matching.school_of(j)) == p.end()) {
            throw std::invalid_argument("revealed prefix does not reach the matched school");
        }
    }
    return degrees_impl(n, [&](index_t j) { return std::span<const index_t>(prefixes[j]); }, matching);
}

std::size_t unenvied_count(const EnvyGraph& graph) {
    std::size_t c = 0;
    for (index_t i = 0; i < graph.size(); ++i) c += graph.in_degree(i) == 0;
    return c;
}

std::size_t unenvied_count(const EnvyDegrees& degrees) {
    return static_cast<std::size_t>(std::count(degrees.in.begin(), degrees.in.end(), std::size_t{0}));
}

std::size_t envy_nobody_count(const EnvyGraph& graph) {
    std::size_t c = 0;
    for (index_t i = 0; i < graph.size(); ++i) c += graph.out_degree(i) == 0;
    return c;
}

std::size_t envy_nobody_count(const EnvyDegrees& degrees) {
    return static_cast<std::size_t>(std::count(degrees.out.begin(), degrees.out.end(), std::size_t{0}));
}

std::uint64_t RankHistogram::total() const noexcept {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

double RankHistogram::pmf(std::size_t k) const {
    const auto t = total();
    return t == 0 ? 0.0 : static_cast<double>(at_rank(k)) / static_cast<double>(t);
}

RankHistogram& RankHistogram::operator+=(const RankHistogram& other) {
    if (counts.size() < other.counts.size()) counts.resize(other.counts.size(), 0);
    for (std::size_t k = 0; k < other.counts.size(); ++k) counts[k] += other.counts[k];
    return *this;
}

RankHistogram rank_histogram(const PreferenceTable& prefs, const Matching& matching) {
    const index_t n = prefs.size();
    require_perfect(matching, n);
    RankHistogram h{std::vector<std::uint64_t>(n, 0)};
    for (index_t i = 0; i < n; ++i) ++h.counts[prefs.position_of(i, matching.school_of(i))];
    return h;
}

RankHistogram rank_histogram(std::span<const index_t> ranks) {
    RankHistogram h{std::vector<std::uint64_t>(ranks.size(), 0)};
    for (index_t r : ranks) {
        if (r == 0 || r > ranks.size()) throw std::out_of_range("rank outside 1..n");
        ++h.counts[r - 1];
    }
    return h;
}

std::vector<index_t> ranks_from_prefixes(const std::vector<std::vector<index_t>>& prefixes,
                                         const Matching& matching) {
    std::vector<index_t> ranks(prefixes.size());
    for (index_t i = 0; i < prefixes.size(); ++i) {
        const auto& p = prefixes[i];
        const auto it = std::find(p.begin(), p.end(), matching.school_of(i));
        if (it == p.end()) throw std::invalid_argument("revealed prefix does not reach the matched school");
        ranks[i] = static_cast<index_t>(it - p.begin()) + 1;
    }
    return ranks;
}

std::vector<std::size_t> distinct_proposers(const ProposalLog& log, index_t n) {
    std::vector<std::pair<index_t, index_t>> pairs;
    pairs.reserve(log.entries.size());
    for (const auto& e : log.entries) pairs.emplace_back(e.school, e.student);
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    std::vector<std::size_t> count(n, 0);
    for (const auto& [school, student] : pairs) {
        if (school >= n) throw std::out_of_range("proposal to a school outside the market");
        ++count[school];
    }
    return count;
}

std::vector<std::size_t> in_degrees_from_proposals(const ProposalLog& log, const Matching& matching) {
    const index_t n = matching.size();
    const auto proposers = distinct_proposers(log, n);
    std::vector<std::size_t> in(n);
    for (index_t i = 0; i < n; ++i) {
        const auto p = proposers[matching.school_of(i)];
        if (p == 0) throw std::invalid_argument("matched school never received a proposal");
        in[i] = p - 1;
    }
    return in;
}

std::vector<index_t> under_demanded_schools(const ProposalLog& log) {
    index_t n = 0;
    for (const auto& e : log.entries) n = std::max<index_t>(n, e.school + 1);
    const auto proposers = distinct_proposers(log, n);
    std::vector<index_t> out;
    for (index_t s = 0; s < n; ++s) {
        if (proposers[s] == 1) out.push_back(s);
    }
    return out;
}

std::vector<index_t> schools_drawn_once(const DrawLog& draws) {
    index_t n = 0;
    for (const auto& d : draws) n = std::max<index_t>(n, d.school + 1);
    std::vector<std::size_t> seen(n, 0);
    for (const auto& d : draws) ++seen[d.school];
    std::vector<index_t> out;
    for (index_t s = 0; s < n; ++s) {
        if (seen[s] == 1) out.push_back(s);
    }
    return out;
}

}  // namespace envylab
