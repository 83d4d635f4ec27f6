#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "envylab/market.hpp"

namespace envylab {

enum class Mechanism { da, rsd, ttc };

std::string_view to_string(Mechanism m);
/// Accepts "da", "rsd", "ttc"; throws std::invalid_argument otherwise.
Mechanism parse_mechanism(std::string_view name);

struct ProposalEntry {
    index_t student;
    index_t school;
    bool accepted;
    std::optional<index_t> displaced;  // student bumped by an accepted proposal

    friend bool operator==(const ProposalEntry&, const ProposalEntry&) = default;
};

/// Everything that happened during one sequential DA run, in order.
struct ProposalLog {
    std::vector<ProposalEntry> entries;
    DrawLog raw_draw_log;

    std::size_t total_proposals() const noexcept { return entries.size(); }
};

/// Order in which unmatched students are served by sequential DA.
struct QueueDiscipline {
    enum class Kind { fifo, lifo, random };
    Kind kind = Kind::lifo;
    std::uint64_t sub_seed = 0;  // only used by Kind::random

    static QueueDiscipline fifo() { return {Kind::fifo, 0}; }
    static QueueDiscipline lifo() { return {Kind::lifo, 0}; }
    static QueueDiscipline random(std::uint64_t sub_seed) { return {Kind::random, sub_seed}; }

    /// Accepts "fifo", "lifo", "random"; throws std::invalid_argument otherwise.
    static QueueDiscipline parse(std::string_view name, std::uint64_t sub_seed = 0);
};

std::string_view to_string(QueueDiscipline::Kind kind);

/// Student-proposing deferred acceptance, round based. Returns the
/// student-optimal stable matching.
Matching deferred_acceptance(const MarketInstance& market);

/// Result of a McVitie-Wilson run on lazily generated student preferences.
struct SequentialDaRun {
    Matching matching;
    ProposalLog log;
    LazyStudentPreferences preferences;  // streams as left at termination
    PreferenceTable school_priorities;

    /// The market obtained by completing every student's stream; standard DA
    /// on it reproduces `matching`.
    MarketInstance completed_market() const { return {preferences.completed(), school_priorities}; }
};

/// McVitie-Wilson sequential DA: one unmatched student at a time proposes to
/// her next untried school. Student preferences come from lazy streams keyed
/// by (seed, student); school priorities are drawn eagerly from `seed`.
SequentialDaRun sequential_da(index_t n, const Seed& seed,
                              QueueDiscipline discipline = QueueDiscipline::lifo());

/// McVitie-Wilson on fully specified preferences. The raw draw log mirrors
/// the proposals (explicit lists have no repeats).
std::pair<Matching, ProposalLog> sequential_da(const MarketInstance& market,
                                               QueueDiscipline discipline = QueueDiscipline::lifo());

/// Students in choosing order, position 0 first.
struct SerialOrder {
    std::vector<index_t> order;
};

/// Initial ownership for TTC, student -> school.
struct Endowment {
    std::vector<index_t> owns;
};

SerialOrder random_serial_order(index_t n, const Seed& seed);
Endowment random_endowment(index_t n, const Seed& seed);

/// Random serial dictatorship: each student in `order` takes her favourite
/// school still available.
Matching rsd(const PreferenceTable& student_prefs, const SerialOrder& order);
inline Matching rsd(const MarketInstance& market, const SerialOrder& order) {
    return rsd(market.student_prefs, order);
}

/// Top trading cycles from an endowment.
Matching ttc(const PreferenceTable& student_prefs, const Endowment& endowment);
inline Matching ttc(const MarketInstance& market, const Endowment& endowment) {
    return ttc(market.student_prefs, endowment);
}

/// Pairs (student, school) where the student prefers the school to her match
/// and the school ranks her above its assigned student.
std::vector<std::pair<index_t, index_t>> blocking_pairs(const MarketInstance& market,
                                                        const Matching& matching);

}  // namespace envylab
