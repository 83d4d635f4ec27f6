#include "envylab/oracle.hpp"

#include <algorithm>
#include <future>
#include <numeric>

#include "envylab/envy.hpp"
#include "envylab/theory.hpp"

namespace envylab {

namespace {

std::uint64_t checked_pow(std::uint64_t base, unsigned exp) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < exp; ++i) {
        if (__builtin_mul_overflow(r, base, &r)) throw std::overflow_error("profile count overflows 64 bits");
    }
    return r;
}

void check_profile_size(index_t n, const EnumerationLimits& limits) {
    if (n == 0) throw std::invalid_argument("market size must be at least 1");
    if (n > limits.max_profile_n) {
        throw EnumerationTooLarge("exhaustive enumeration is capped at n = " + std::to_string(limits.max_profile_n) +
                                  " (requested n = " + std::to_string(n) + ")");
    }
}

struct Tally {
    std::uint64_t profiles = 0;
    std::uint64_t unenvied = 0;
    std::uint64_t envy_nobody = 0;
    std::uint64_t unstable = 0;
    std::uint64_t sequential_mismatch = 0;
    std::uint64_t not_student_optimal = 0;
    std::uint64_t under_demanded_mismatch = 0;

    Tally& operator+=(const Tally& o) {
        profiles += o.profiles;
        unenvied += o.unenvied;
        envy_nobody += o.envy_nobody;
        unstable += o.unstable;
        sequential_mismatch += o.sequential_mismatch;
        not_student_optimal += o.not_student_optimal;
        under_demanded_mismatch += o.under_demanded_mismatch;
        return *this;
    }
};

template <class PerProfile>
Tally tally_profiles(index_t n, const EnumerationLimits& limits, PerProfile&& per_profile) {
    const auto parts = all_permutations(n).size();
    std::vector<Tally> tallies(parts);
    for_each_profile(n, limits, [&](std::size_t part, const MarketInstance& m) { per_profile(m, tallies[part]); });
    Tally total;
    for (const auto& t : tallies) total += t;
    return total;
}

std::vector<index_t> unenvied_schools(const EnvyGraph& g, const Matching& m) {
    std::vector<index_t> out;
    for (index_t i = 0; i < g.size(); ++i) {
        if (g.in_degree(i) == 0) out.push_back(m.school_of(i));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

Rational harmonic_exact(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("harmonic number needs n >= 1");
    Rational h;
    for (std::uint64_t k = 1; k <= n; ++k) h += Rational(1, static_cast<std::int64_t>(k));
    return h;
}

std::vector<std::vector<index_t>> all_permutations(index_t n) {
    std::vector<index_t> p(n);
    std::iota(p.begin(), p.end(), index_t{0});
    std::vector<std::vector<index_t>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

void for_each_profile(index_t n, const EnumerationLimits& limits,
                      const std::function<void(std::size_t, const MarketInstance&)>& visit) {
    check_profile_size(n, limits);
    const auto perms = all_permutations(n);
    const std::size_t rows = 2 * std::size_t(n);

    auto run_part = [&](std::size_t part) {
        // digits[0] is fixed to `part`; the rest count through all choices.
        std::vector<std::size_t> digits(rows, 0);
        digits[0] = part;
        std::vector<std::vector<index_t>> students(n), schools(n);
        for (;;) {
            for (index_t a = 0; a < n; ++a) {
                students[a] = perms[digits[a]];
                schools[a] = perms[digits[n + a]];
            }
            visit(part, MarketInstance::from_rows(students, schools));
            std::size_t d = rows;
            while (--d > 0) {
                if (++digits[d] < perms.size()) break;
                digits[d] = 0;
            }
            if (d == 0) return;
        }
    };

    std::vector<std::future<void>> jobs;
    for (std::size_t part = 0; part < perms.size(); ++part) {
        jobs.push_back(std::async(std::launch::async, run_part, part));
    }
    for (auto& j : jobs) j.get();
}

ExactExpectation enumerate_expected_unenvied_da(index_t n, const EnumerationLimits& limits, const DaFunction& da) {
    const DaFunction mechanism = da ? da : DaFunction(deferred_acceptance);
    const Tally t = tally_profiles(n, limits, [&](const MarketInstance& m, Tally& acc) {
        const auto g = build_envy_graph(m, mechanism(m));
        ++acc.profiles;
        acc.unenvied += unenvied_count(g);
        acc.envy_nobody += envy_nobody_count(g);
    });
    const auto expected_count = checked_pow(all_permutations(n).size(), 2 * n);
    if (t.profiles != expected_count) throw std::logic_error("profile enumeration is incomplete");
    const auto count = static_cast<std::int64_t>(t.profiles);
    return {n, Mechanism::da, Rational(static_cast<std::int64_t>(t.unenvied), count),
            Rational(static_cast<std::int64_t>(t.envy_nobody), count), t.profiles};
}

ExactExpectation enumerate_expected_rsd(index_t n, const EnumerationLimits& limits) {
    const auto orders = all_permutations(n);
    const Tally t = tally_profiles(n, limits, [&](const MarketInstance& m, Tally& acc) {
        for (const auto& order : orders) {
            const auto g = build_envy_graph(m, rsd(m, SerialOrder{order}));
            ++acc.profiles;
            acc.unenvied += unenvied_count(g);
            acc.envy_nobody += envy_nobody_count(g);
        }
    });
    const auto count = static_cast<std::int64_t>(t.profiles);
    return {n, Mechanism::rsd, Rational(static_cast<std::int64_t>(t.unenvied), count),
            Rational(static_cast<std::int64_t>(t.envy_nobody), count), t.profiles};
}

std::vector<Matching> all_stable_matchings(const MarketInstance& market, const EnumerationLimits& limits) {
    const index_t n = market.size();
    if (n > limits.max_stable_n) {
        throw EnumerationTooLarge("stable matching enumeration is capped at n = " +
                                  std::to_string(limits.max_stable_n));
    }
    std::vector<Matching> out;
    for (auto& p : all_permutations(n)) {
        Matching m{std::move(p)};
        if (blocking_pairs(market, m).empty()) out.push_back(std::move(m));
    }
    return out;
}

bool weakly_dominates(const PreferenceTable& prefs, const Matching& a, const Matching& b) {
    for (index_t i = 0; i < prefs.size(); ++i) {
        if (prefs.prefers(i, b.school_of(i), a.school_of(i))) return false;
    }
    return true;
}

bool VerifyReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.passed; });
}

VerifyReport run_verification(index_t max_n, const EnumerationLimits& limits, const DaFunction& da) {
    check_profile_size(max_n, limits);
    const DaFunction mechanism = da ? da : DaFunction(deferred_acceptance);
    VerifyReport report;
    auto add = [&](std::string name, bool ok, std::string detail) {
        report.checks.push_back({std::move(name), ok, std::move(detail)});
    };

    for (index_t n = 1; n <= max_n; ++n) {
        const std::string tag = " n=" + std::to_string(n);
        const Rational h = harmonic_exact(n);

        const auto exact = enumerate_expected_unenvied_da(n, limits, mechanism);
        add("da unenvied mean = H_n" + tag, exact.unenvied_mean == h,
            exact.unenvied_mean.str() + " vs " + h.str() + " over " + std::to_string(exact.profile_count) +
                " profiles");

        const auto r = enumerate_expected_rsd(n, limits);
        add("rsd unenvied mean = H_n" + tag, r.unenvied_mean == h, r.unenvied_mean.str() + " vs " + h.str());
        const Rational top(static_cast<std::int64_t>(n) + 1, 2);
        add("rsd envy-nobody mean = (n+1)/2" + tag, r.envy_nobody_mean == top,
            r.envy_nobody_mean.str() + " vs " + top.str());

        const Tally t = tally_profiles(n, limits, [&](const MarketInstance& m, Tally& acc) {
            ++acc.profiles;
            const Matching da_match = mechanism(m);
            if (!da_match.is_perfect() || da_match.size() != n) {
                ++acc.unstable;
                return;
            }
            if (!blocking_pairs(m, da_match).empty()) ++acc.unstable;

            for (auto q : {QueueDiscipline::fifo(), QueueDiscipline::lifo()}) {
                if (sequential_da(m, q).first != da_match) ++acc.sequential_mismatch;
            }

            const auto stable = all_stable_matchings(m, limits);
            const bool listed = std::find(stable.begin(), stable.end(), da_match) != stable.end();
            const bool optimal = std::all_of(stable.begin(), stable.end(), [&](const Matching& other) {
                return weakly_dominates(m.student_prefs, da_match, other);
            });
            if (!listed || !optimal) ++acc.not_student_optimal;

            const auto [seq_match, log] = sequential_da(m, QueueDiscipline::lifo());
            const auto g = build_envy_graph(m, seq_match);
            const auto a = under_demanded_schools(log);
            if (a != schools_drawn_once(log.raw_draw_log) || a != unenvied_schools(g, seq_match) ||
                in_degrees_from_proposals(log, seq_match) != envy_degrees(m.student_prefs, seq_match).in) {
                ++acc.under_demanded_mismatch;
            }
        });
        const std::string over = " of " + std::to_string(t.profiles) + " profiles";
        add("da stable" + tag, t.unstable == 0, std::to_string(t.unstable) + " unstable" + over);
        add("sequential da = da (fifo, lifo)" + tag, t.sequential_mismatch == 0,
            std::to_string(t.sequential_mismatch) + " mismatches" + over);
        add("da student-optimal among stable matchings" + tag, t.not_student_optimal == 0,
            std::to_string(t.not_student_optimal) + " failures" + over);
        add("under-demanded schools = singleton draws = unenvied holders" + tag, t.under_demanded_mismatch == 0,
            std::to_string(t.under_demanded_mismatch) + " mismatches" + over);
    }
    return report;
}

}  // namespace envylab
