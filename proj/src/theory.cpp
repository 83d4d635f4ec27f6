#include "envylab/theory.hpp"

#include <cmath>
#include <stdexcept>

namespace envylab {

double harmonic(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("harmonic number needs n >= 1");
    double h = 0;
    for (std::uint64_t k = 1; k <= n; ++k) h += 1.0 / static_cast<double>(k);
    return h;
}

double harmonic_asymptotic(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("harmonic number needs n >= 1");
    return std::log(static_cast<double>(n)) + kEulerGamma;
}

Prediction predict(std::uint64_t n, Mechanism mechanism) {
    const double h = harmonic(n);
    const double dn = static_cast<double>(n);
    Prediction p;
    p.n = n;
    p.mechanism = mechanism;
    p.unenvied_mean = h;
    p.unenvied_exact = true;
    if (mechanism == Mechanism::da) {
        p.envy_nobody_mean = dn / h;
        p.envy_nobody_exact = false;
        p.mean_rank = h;
        p.mean_rank_exact = false;
    } else {
        p.envy_nobody_mean = (dn + 1) / 2;
        p.envy_nobody_exact = true;
        // The chooser facing m open schools takes the best of m uniformly
        // placed items, expected position (n+1)/(m+1).
        p.mean_rank = (dn + 1) * (harmonic(n + 1) - 1) / dn;
        p.mean_rank_exact = true;
    }
    return p;
}

double geometric_rank_pmf(std::uint64_t k, std::uint64_t n) {
    if (k < 1 || k > n) throw std::out_of_range("rank must lie in 1..n");
    const double p = 1.0 / harmonic(n);
    return p * std::pow(1.0 - p, static_cast<double>(k - 1));
}

double rsd_position_unenvied_prob(std::uint64_t k, std::uint64_t n) {
    if (k < 1 || k > n) throw std::out_of_range("position must lie in 1..n");
    return 1.0 / static_cast<double>(n - k + 1);
}

}  // namespace envylab
