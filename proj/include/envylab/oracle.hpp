#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "envylab/market.hpp"
#include "envylab/mechanisms.hpp"
#include "envylab/rational.hpp"

namespace envylab {

/// Enumeration caps. Full profile spaces grow as (n!)^(2n): 46,656 at n = 3
/// and about 1.1e11 at n = 4.
struct EnumerationLimits {
    index_t max_profile_n = 3;
    index_t max_stable_n = 6;
};

class EnumerationTooLarge : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Exact means over every equally likely profile.
struct ExactExpectation {
    index_t n = 0;
    Mechanism mechanism = Mechanism::da;
    Rational unenvied_mean;
    Rational envy_nobody_mean;
    std::uint64_t profile_count = 0;
};

using DaFunction = std::function<Matching(const MarketInstance&)>;

/// H_n as an exact fraction. Fits 64 bits up to n = 42 or so.
Rational harmonic_exact(std::uint64_t n);

/// All n! permutations of {0..n-1} in lexicographic order.
std::vector<std::vector<index_t>> all_permutations(index_t n);

/// Mean unenvied and envy-nobody counts under DA over all (n!)^(2n)
/// profiles. `da` defaults to deferred_acceptance.
ExactExpectation enumerate_expected_unenvied_da(index_t n, const EnumerationLimits& limits = {},
                                                const DaFunction& da = {});

/// Same over all profiles times all n! serial orders under RSD.
ExactExpectation enumerate_expected_rsd(index_t n, const EnumerationLimits& limits = {});

/// Every perfect matching with no blocking pair.
std::vector<Matching> all_stable_matchings(const MarketInstance& market, const EnumerationLimits& limits = {});

/// True if every student weakly prefers `a` to `b`.
bool weakly_dominates(const PreferenceTable& student_prefs, const Matching& a, const Matching& b);

/// Visits every profile of size n. Work is split by student 0's ranking and
/// the parts run concurrently, so `visit` must be safe to call from several
/// threads; `part` identifies the calling part (0..n!-1).
void for_each_profile(index_t n, const EnumerationLimits& limits,
                      const std::function<void(std::size_t part, const MarketInstance&)>& visit);

struct VerifyCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    bool all_passed() const;
};

/// Exhaustive checks for every n in 1..max_n: exact means against H_n and
/// (n+1)/2, DA stability, student optimality, agreement with sequential DA
/// under fifo and lifo, and the under-demanded school equivalences.
VerifyReport run_verification(index_t max_n, const EnumerationLimits& limits = {}, const DaFunction& da = {});

}  // namespace envylab
