#include "envylab/mechanisms.hpp"

#include <deque>
#include <stdexcept>
#include <string>

namespace envylab {

namespace {

constexpr index_t kNone = static_cast<index_t>(-1);

/// Pool of unmatched students served according to a queue discipline.
class UnmatchedPool {
public:
    UnmatchedPool(index_t n, QueueDiscipline discipline)
        : discipline_(discipline), rng_(derive_seed({discipline.sub_seed, stream_tag::queue})) {
        for (index_t i = 0; i < n; ++i) items_.push_back(i);
    }

    bool empty() const noexcept { return items_.empty(); }
    void push(index_t student) { items_.push_back(student); }

    index_t pop() {
        index_t out;
        switch (discipline_.kind) {
            case QueueDiscipline::Kind::fifo:
                out = items_.front();
                items_.pop_front();
                break;
            case QueueDiscipline::Kind::lifo:
                out = items_.back();
                items_.pop_back();
                break;
            case QueueDiscipline::Kind::random: {
                const auto k = uniform_index(rng_, static_cast<index_t>(items_.size()));
                std::swap(items_[k], items_.back());
                out = items_.back();
                items_.pop_back();
                break;
            }
            default:
                throw std::logic_error("unknown queue discipline");
        }
        return out;
    }

private:
    QueueDiscipline discipline_;
    CounterRng rng_;
    std::deque<index_t> items_;
};

template <class NextSchool>
Matching run_mcvitie_wilson(index_t n, const PreferenceTable& priorities, QueueDiscipline discipline,
                            NextSchool&& next_school, std::vector<ProposalEntry>& entries) {
    std::vector<index_t> holder(n, kNone);
    UnmatchedPool pool(n, discipline);
    while (!pool.empty()) {
        const index_t i = pool.pop();
        const index_t s = next_school(i);
        const index_t h = holder[s];
        if (h == kNone) {
            holder[s] = i;
            entries.push_back({i, s, true, std::nullopt});
        } else if (priorities.prefers(s, i, h)) {
            holder[s] = i;
            pool.push(h);
            entries.push_back({i, s, true, h});
        } else {
            pool.push(i);
            entries.push_back({i, s, false, std::nullopt});
        }
    }
    Matching m;
    m.assignment.assign(n, kNone);
    for (index_t s = 0; s < n; ++s) m.assignment[holder[s]] = s;
    return m;
}

}  // namespace

std::string_view to_string(Mechanism m) {
    switch (m) {
        case Mechanism::da: return "da";
        case Mechanism::rsd: return "rsd";
        case Mechanism::ttc: return "ttc";
    }
    return "?";
}

Mechanism parse_mechanism(std::string_view name) {
    if (name == "da") return Mechanism::da;
    if (name == "rsd") return Mechanism::rsd;
    if (name == "ttc") return Mechanism::ttc;
    throw std::invalid_argument("unknown mechanism '" + std::string(name) + "'");
}

QueueDiscipline QueueDiscipline::parse(std::string_view name, std::uint64_t sub_seed) {
    if (name == "fifo") return fifo();
    if (name == "lifo") return lifo();
    if (name == "random") return random(sub_seed);
    throw std::invalid_argument("unknown queue discipline '" + std::string(name) + "'");
}

std::string_view to_string(QueueDiscipline::Kind kind) {
    switch (kind) {
        case QueueDiscipline::Kind::fifo: return "fifo";
        case QueueDiscipline::Kind::lifo: return "lifo";
        case QueueDiscipline::Kind::random: return "random";
    }
    return "?";
}

Matching deferred_acceptance(const MarketInstance& market) {
    const index_t n = market.size();
    const auto& prefs = market.student_prefs;
    const auto& prio = market.school_priorities;

    std::vector<index_t> next_rank(n, 0);
    std::vector<index_t> holder(n, kNone);
    std::vector<index_t> free(n), still_free;
    for (index_t i = 0; i < n; ++i) free[i] = i;

    while (!free.empty()) {
        still_free.clear();
        for (index_t i : free) {
            const index_t s = prefs.at(i, next_rank[i]++);
            const index_t h = holder[s];
            if (h == kNone) {
                holder[s] = i;
            } else if (prio.prefers(s, i, h)) {
                holder[s] = i;
                still_free.push_back(h);
            } else {
                still_free.push_back(i);
            }
        }
        free.swap(still_free);
    }

    Matching m;
    m.assignment.assign(n, kNone);
    for (index_t s = 0; s < n; ++s) m.assignment[holder[s]] = s;
    return m;
}

SequentialDaRun sequential_da(index_t n, const Seed& seed, QueueDiscipline discipline) {
    SequentialDaRun run{{}, {}, LazyStudentPreferences(n, seed), generate_school_priorities(n, seed)};
    run.matching = run_mcvitie_wilson(
        n, run.school_priorities, discipline,
        [&](index_t i) { return run.preferences.next_proposal(i); }, run.log.entries);
    run.log.raw_draw_log = run.preferences.draw_log();
    return run;
}

std::pair<Matching, ProposalLog> sequential_da(const MarketInstance& market, QueueDiscipline discipline) {
    const index_t n = market.size();
    std::vector<index_t> next_rank(n, 0);
    ProposalLog log;
    auto m = run_mcvitie_wilson(
        n, market.school_priorities, discipline,
        [&](index_t i) {
            const index_t s = market.student_prefs.at(i, next_rank[i]++);
            log.raw_draw_log.push_back({i, s});
            return s;
        },
        log.entries);
    return {std::move(m), std::move(log)};
}

SerialOrder random_serial_order(index_t n, const Seed& seed) {
    auto rng = seed.stream(stream_tag::serial_order);
    return {random_permutation(n, rng)};
}

Endowment random_endowment(index_t n, const Seed& seed) {
    auto rng = seed.stream(stream_tag::endowment);
    return {random_permutation(n, rng)};
}

Matching rsd(const PreferenceTable& student_prefs, const SerialOrder& order) {
    const index_t n = student_prefs.size();
    if (order.order.size() != n) throw std::invalid_argument("serial order size mismatch");
    std::vector<bool> taken(n, false);
    Matching m;
    m.assignment.assign(n, kNone);
    for (index_t i : order.order) {
        for (index_t s : student_prefs.row(i)) {
            if (!taken[s]) {
                taken[s] = true;
                m.assignment[i] = s;
                break;
            }
        }
    }
    return m;
}

Matching ttc(const PreferenceTable& student_prefs, const Endowment& endowment) {
    const index_t n = student_prefs.size();
    if (endowment.owns.size() != n) throw std::invalid_argument("endowment size mismatch");
    std::vector<index_t> owner(n, kNone);
    for (index_t i = 0; i < n; ++i) {
        const index_t s = endowment.owns[i];
        if (s >= n || owner[s] != kNone) throw std::invalid_argument("endowment is not a bijection");
        owner[s] = i;
    }

    std::vector<bool> school_gone(n, false), on_path(n, false), done(n, false);
    std::vector<index_t> ptr(n, 0);
    Matching m;
    m.assignment.assign(n, kNone);

    auto favourite = [&](index_t i) {
        while (school_gone[student_prefs.at(i, ptr[i])]) ++ptr[i];
        return student_prefs.at(i, ptr[i]);
    };

    // Walk pointers along a path; a revisit closes a cycle which trades and
    // leaves, after which the walk resumes from what remains of the path.
    std::vector<index_t> path;
    for (index_t start = 0; start < n; ++start) {
        if (done[start]) continue;
        path.push_back(start);
        on_path[start] = true;
        while (!path.empty()) {
            const index_t i = path.back();
            const index_t j = owner[favourite(i)];
            if (!on_path[j]) {
                path.push_back(j);
                on_path[j] = true;
                continue;
            }
            std::size_t first = path.size();
            while (path[--first] != j) {}
            for (std::size_t k = first; k < path.size(); ++k) {
                m.assignment[path[k]] = favourite(path[k]);
            }
            for (std::size_t k = first; k < path.size(); ++k) {
                const index_t member = path[k];
                school_gone[endowment.owns[member]] = true;
                on_path[member] = false;
                done[member] = true;
            }
            path.resize(first);
        }
    }
    return m;
}

std::vector<std::pair<index_t, index_t>> blocking_pairs(const MarketInstance& market, const Matching& matching) {
    const index_t n = market.size();
    if (matching.size() != n || !matching.is_perfect()) {
        throw std::invalid_argument("blocking_pairs requires a perfect matching of the market's size");
    }
    const auto holders = matching.holders();
    std::vector<std::pair<index_t, index_t>> out;
    for (index_t i = 0; i < n; ++i) {
        const index_t own = market.student_prefs.position_of(i, matching.school_of(i));
        for (index_t k = 0; k < own; ++k) {
            const index_t s = market.student_prefs.at(i, k);
            if (market.school_priorities.prefers(s, i, holders[s])) out.emplace_back(i, s);
        }
    }
    return out;
}

}  // namespace envylab
