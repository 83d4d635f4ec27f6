#pragma once

#include <cstdint>

#include "envylab/mechanisms.hpp"

namespace envylab {

inline constexpr double kEulerGamma = 0.57721566490153286061;

/// H_n = 1 + 1/2 + ... + 1/n by direct summation. Throws for n == 0.
double harmonic(std::uint64_t n);

/// log n + gamma.
double harmonic_asymptotic(std::uint64_t n);

/// Expected counts of unenvied and envy-free students, each flagged exact
/// (closed form for every n) or approximate (large-n law).
struct Prediction {
    std::uint64_t n = 0;
    Mechanism mechanism = Mechanism::da;
    double unenvied_mean = 0;
    bool unenvied_exact = false;
    double envy_nobody_mean = 0;
    bool envy_nobody_exact = false;
    double mean_rank = 0;
    bool mean_rank_exact = false;
};

/// DA: H_n (exact) and n/H_n (approximate). RSD and TTC: H_n and (n+1)/2,
/// both exact. Mean rank is H_n (approximate) for DA and
/// (n+1)(H_{n+1}-1)/n (exact) for RSD/TTC.
Prediction predict(std::uint64_t n, Mechanism mechanism);

/// (1/H_n)(1-1/H_n)^(k-1), not renormalised over 1..n. Throws for k outside
/// 1..n.
double geometric_rank_pmf(std::uint64_t k, std::uint64_t n);

/// Probability that the k-th chooser under RSD is envied by nobody:
/// 1/(n-k+1).
double rsd_position_unenvied_prob(std::uint64_t k, std::uint64_t n);

}  // namespace envylab
