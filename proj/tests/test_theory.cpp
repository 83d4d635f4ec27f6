#include <doctest.h>

#include <cmath>

#include "envylab/oracle.hpp"
#include "envylab/theory.hpp"

using namespace envylab;

TEST_CASE("harmonic") {
    CHECK(harmonic(1) == 1.0);
    CHECK(harmonic(2) == 1.5);
    CHECK(harmonic(100) == doctest::Approx(5.187377517639621).epsilon(1e-14));
    CHECK(harmonic(1000) == doctest::Approx(7.485470860550345).epsilon(1e-14));
    CHECK(std::round(harmonic(100) * 10) / 10 == 5.2);
    CHECK(std::round(harmonic(1000) * 10) / 10 == 7.5);
    CHECK_THROWS_AS(harmonic(0), std::invalid_argument);
}

TEST_CASE("harmonic: exact rational agreement up to n = 30") {
    for (std::uint64_t n = 1; n <= 30; ++n) {
        CHECK(harmonic(n) == doctest::Approx(harmonic_exact(n).to_double()).epsilon(1e-15));
    }
}

TEST_CASE("harmonic: increasing, and H_n / n decreasing from n = 2") {
    double prev = harmonic(1), prev_ratio = harmonic(2) / 2;
    for (std::uint64_t n = 2; n <= 2000; ++n) {
        const double h = harmonic(n);
        CHECK(h > prev);
        if (n > 2) CHECK(h / double(n) < prev_ratio);
        prev = h;
        prev_ratio = h / double(n);
    }
}

TEST_CASE("harmonic_asymptotic") {
    CHECK(harmonic_asymptotic(1) == doctest::Approx(0.5772156649).epsilon(1e-10));
    CHECK(std::abs(harmonic(10'000) - harmonic_asymptotic(10'000)) < 1e-4);
    CHECK(harmonic_asymptotic(10'000) == doctest::Approx(9.788).epsilon(1e-4));

    // H_n - log n - gamma lies in (0, 1/(2n)); running sum keeps this O(n).
    double h = 0;
    bool ok = true;
    for (std::uint64_t n = 1; n <= 100'000; ++n) {
        h += 1.0 / double(n);
        if (n >= 10) {
            const double gap = h - harmonic_asymptotic(n);
            ok = ok && gap > 0 && gap < 1.0 / (2.0 * double(n));
        }
    }
    CHECK(ok);
}

TEST_CASE("predict") {
    const auto da = predict(10'000, Mechanism::da);
    CHECK(da.unenvied_mean < 10);
    CHECK(da.unenvied_exact);
    CHECK(da.envy_nobody_mean == doctest::Approx(1021.7003).epsilon(1e-7));
    CHECK_FALSE(da.envy_nobody_exact);

    const auto r3 = predict(3, Mechanism::rsd);
    CHECK(r3.envy_nobody_mean == 2.0);
    CHECK(r3.envy_nobody_exact);
    CHECK(predict(100, Mechanism::rsd).unenvied_mean == doctest::Approx(5.187377517639621));
    CHECK(predict(2, Mechanism::rsd).mean_rank == doctest::Approx(1.25));

    const auto t = predict(100, Mechanism::ttc);
    const auto r = predict(100, Mechanism::rsd);
    CHECK(t.unenvied_mean == r.unenvied_mean);
    CHECK(t.envy_nobody_mean == r.envy_nobody_mean);
    CHECK(t.envy_nobody_exact);

    for (std::uint64_t n : {1u, 2u, 7u, 100u, 5000u}) {
        CHECK(predict(n, Mechanism::da).unenvied_mean == harmonic(n));
        CHECK(predict(n, Mechanism::rsd).unenvied_mean == harmonic(n));
    }
    const auto one = predict(1, Mechanism::da);
    CHECK(one.unenvied_mean == 1.0);
    CHECK(one.envy_nobody_mean == 1.0);
    CHECK(predict(1, Mechanism::rsd).envy_nobody_mean == 1.0);
}

TEST_CASE("geometric_rank_pmf") {
    CHECK(geometric_rank_pmf(1, 1) == 1.0);
    CHECK(geometric_rank_pmf(1, 1000) == doctest::Approx(1 / 7.485470860550345));
    CHECK_THROWS_AS(geometric_rank_pmf(0, 5), std::out_of_range);
    CHECK_THROWS_AS(geometric_rank_pmf(6, 5), std::out_of_range);

    for (std::uint64_t n : {2u, 3u, 10u, 100u, 1000u}) {
        double sum = 0;
        for (std::uint64_t k = 1; k <= n; ++k) {
            sum += geometric_rank_pmf(k, n);
            if (k > 1) CHECK(geometric_rank_pmf(k, n) < geometric_rank_pmf(k - 1, n));
        }
        const double q = 1 - 1 / harmonic(n);
        CHECK(sum == doctest::Approx(1 - std::pow(q, double(n))).epsilon(1e-12));
        CHECK(sum <= 1.0);
    }
}

TEST_CASE("rsd_position_unenvied_prob: telescoping product") {
    CHECK(rsd_position_unenvied_prob(3, 3) == 1.0);
    CHECK(rsd_position_unenvied_prob(1, 3) == doctest::Approx(1.0 / 3));
    CHECK_THROWS_AS(rsd_position_unenvied_prob(0, 3), std::out_of_range);
    CHECK_THROWS_AS(rsd_position_unenvied_prob(4, 3), std::out_of_range);

    for (std::int64_t n = 1; n <= 30; ++n) {
        Rational sum;
        for (std::int64_t k = 1; k <= n; ++k) {
            // Product over later choosers of P(l does not envy k).
            Rational product(1);
            for (std::int64_t l = k + 1; l <= n; ++l) product = product * Rational(n - l + 1, n - l + 2);
            CHECK(product == Rational(1, n - k + 1));
            CHECK(rsd_position_unenvied_prob(k, n) == doctest::Approx(product.to_double()).epsilon(1e-15));
            sum += product;
        }
        CHECK(sum == harmonic_exact(n));
    }
}
