#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "afib/features.hpp"
#include "afib/hvg.hpp"
#include "afib/rng.hpp"
#include "oracles.hpp"

using namespace afib;

namespace {

IbiSequence random_ibis(Rng& rng, std::size_t n, double lo = 400.0, double hi = 1400.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(lo, hi);
    return ibi_from_intervals(std::move(v));
}

}  // namespace

TEST_CASE("f1 vanishes on constant and linear series") {
    CHECK(f1_sd_derivative(ibi_from_intervals(std::vector<double>(10, 800.0)), 5) == 0.0);

    std::vector<double> ramp;
    for (int i = 0; i < 10; ++i) ramp.push_back(700.0 + 10.0 * i);
    CHECK(f1_sd_derivative(ibi_from_intervals(ramp), 5) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("f1 of the alternating series is 160") {
    const std::vector<double> alt{800.0, 810.0, 800.0, 810.0, 800.0, 810.0, 800.0};
    // Oracle: repeated explicit differencing, then the textbook deviation.
    const auto d5 = oracle::repeated_difference(alt, 5);
    REQUIRE(d5.size() == 2);
    CHECK(d5[0] == doctest::Approx(160.0));
    CHECK(d5[1] == doctest::Approx(-160.0));
    const double expected = oracle::population_std(d5);
    CHECK(expected == doctest::Approx(160.0).epsilon(1e-12));
    CHECK(f1_sd_derivative(ibi_from_intervals(alt), 5) ==
          doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("f1 equals the differencing oracle on random series") {
    Rng rng(101);
    for (int trial = 0; trial < 100; ++trial) {
        const int order = 1 + static_cast<int>(rng.below(6));
        const auto n = static_cast<std::size_t>(order + 2 + static_cast<int>(rng.below(60)));
        const auto ibi = random_ibis(rng, n);
        const double expected =
            oracle::population_std(oracle::repeated_difference(ibi.intervals_ms, order));
        CHECK(f1_sd_derivative(ibi, order) ==
              doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("f1 is translation invariant and absolutely homogeneous") {
    Rng rng(2020);
    for (int trial = 0; trial < 200; ++trial) {
        const auto ibi = random_ibis(rng, 20);
        const double base = f1_sd_derivative(ibi, 5);

        const double c = rng.uniform(10.0, 500.0);
        std::vector<double> shifted, scaled;
        for (double v : ibi.intervals_ms) {
            shifted.push_back(v + c);
            scaled.push_back(v * c);
        }
        CHECK(f1_sd_derivative(ibi_from_intervals(shifted), 5) ==
              doctest::Approx(base).epsilon(1e-9));
        CHECK(f1_sd_derivative(ibi_from_intervals(scaled), 5) ==
              doctest::Approx(c * base).epsilon(1e-9));
    }
}

TEST_CASE("f1 needs order + 2 intervals") {
    CHECK_THROWS_AS(f1_sd_derivative(ibi_from_intervals(std::vector<double>(6, 800.0)), 5),
                    Error);
    CHECK_NOTHROW(f1_sd_derivative(ibi_from_intervals(std::vector<double>(7, 800.0)), 5));
}

TEST_CASE("f2 worked examples") {
    CHECK(f2_histogram_entropy(ibi_from_intervals({800.0, 800.0, 800.0})) == 0.0);

    // [600,600,600,1000], B=2: w = 200, h = [0.75, 0.25].
    const double expect_a = -(0.75 * std::log(0.75 / 200.0) + 0.25 * std::log(0.25 / 200.0));
    const double got_a = f2_histogram_entropy(ibi_from_intervals({600.0, 600.0, 600.0, 1000.0}), 2);
    CHECK(got_a == doctest::Approx(expect_a).epsilon(1e-12));
    CHECK(got_a == doctest::Approx(5.8607).epsilon(1e-4));

    // [600,600,1000,1000], B=2: h = [0.5, 0.5].
    const double got_b = f2_histogram_entropy(ibi_from_intervals({600.0, 600.0, 1000.0, 1000.0}), 2);
    CHECK(got_b == doctest::Approx(-std::log(0.5 / 200.0)).epsilon(1e-12));
    CHECK(got_b == doctest::Approx(5.9915).epsilon(1e-4));
}

TEST_CASE("f2 shift and scale laws") {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const auto ibi = random_ibis(rng, 30);
        const double base = f2_histogram_entropy(ibi, 2);

        const double shift = rng.uniform(1.0, 400.0);
        const double scale = rng.uniform(0.2, 5.0);
        std::vector<double> shifted, scaled;
        for (double v : ibi.intervals_ms) {
            shifted.push_back(v + shift);
            scaled.push_back(v * scale);
        }
        CHECK(f2_histogram_entropy(ibi_from_intervals(shifted), 2) ==
              doctest::Approx(base).epsilon(1e-9));
        CHECK(f2_histogram_entropy(ibi_from_intervals(scaled), 2) ==
              doctest::Approx(base + std::log(scale)).epsilon(1e-9));
    }
}

TEST_CASE("rayleigh scale: closed form against numeric likelihood maximization") {
    SUBCASE("unit intervals") {
        const auto fit = rayleigh_sigma_ml(ibi_from_intervals({1.0, 1.0, 1.0, 1.0}));
        CHECK(fit.sigma_ml_ms == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
        const double numeric = oracle::rayleigh_sigma_numeric({1.0, 1.0, 1.0, 1.0});
        CHECK(fit.sigma_ml_ms == doctest::Approx(numeric).epsilon(1e-6));
    }
    SUBCASE("repeated constant c gives c / sqrt(2)") {
        for (double c : {250.0, 800.0, 2000.0}) {
            const auto fit = rayleigh_sigma_ml(ibi_from_intervals(std::vector<double>(5, c)));
            CHECK(fit.sigma_ml_ms == doctest::Approx(c / std::sqrt(2.0)).epsilon(1e-12));
            CHECK(fit.sigma_ml_ms ==
                  doctest::Approx(oracle::rayleigh_sigma_numeric(std::vector<double>(5, c)))
                      .epsilon(1e-6));
        }
    }
    SUBCASE("random series") {
        Rng rng(404);
        for (int trial = 0; trial < 100; ++trial) {
            const auto ibi = random_ibis(rng, 3 + rng.below(40));
            const auto fit = rayleigh_sigma_ml(ibi);
            CHECK(fit.sigma_ml_ms ==
                  doctest::Approx(oracle::rayleigh_sigma_numeric(ibi.intervals_ms)).epsilon(1e-6));
        }
    }
    SUBCASE("scale equivariance") {
        Rng rng(405);
        const auto ibi = random_ibis(rng, 25);
        const double base = rayleigh_sigma_ml(ibi).sigma_ml_ms;
        for (double c : {0.5, 2.0, 3.5}) {
            std::vector<double> scaled;
            for (double v : ibi.intervals_ms) scaled.push_back(c * v);
            CHECK(rayleigh_sigma_ml(ibi_from_intervals(scaled)).sigma_ml_ms ==
                  doctest::Approx(c * base).epsilon(1e-9));
        }
    }
}

TEST_CASE("the resemblance grid reaches the 1% tail point and past the data") {
    Rng rng(406);
    for (int trial = 0; trial < 50; ++trial) {
        const auto ibi = random_ibis(rng, 10 + rng.below(40));
        const auto fit = rayleigh_sigma_ml(ibi);
        const double peak = rayleigh_pdf(fit.sigma_ml_ms, fit.sigma_ml_ms);
        const double end = fit.grid_len * fit.grid_step_ms;
        CHECK(end > fit.sigma_ml_ms);
        CHECK(rayleigh_pdf(end, fit.sigma_ml_ms) < 0.01 * peak);
        const double max_iv = *std::max_element(ibi.intervals_ms.begin(), ibi.intervals_ms.end());
        CHECK(end + 1.0 >= max_iv + 3.0 * silverman_bandwidth(ibi));
    }
}

TEST_CASE("kde single-kernel peak and symmetry") {
    const auto one = ibi_from_intervals({800.0});
    const double bw = silverman_bandwidth(one);  // floored at 1 ms for a flat series
    CHECK(bw == 1.0);
    CHECK(kde_density(one, 800.0) ==
          doctest::Approx(1.0 / (bw * std::sqrt(2.0 * 3.14159265358979324))).epsilon(1e-12));

    const auto pair = ibi_from_intervals({600.0, 1000.0});
    for (double delta : {0.0, 5.0, 50.0, 123.456, 300.0}) {
        CHECK(kde_density(pair, 600.0 + delta) ==
              doctest::Approx(kde_density(pair, 1000.0 - delta)).epsilon(1e-12));
    }
}

TEST_CASE("kde integrates to one") {
    Rng rng(888);
    for (int trial = 0; trial < 100; ++trial) {
        const auto ibi = random_ibis(rng, 5 + rng.below(25), 500.0, 1100.0);
        const double bw = silverman_bandwidth(ibi);
        const auto [lo_it, hi_it] =
            std::minmax_element(ibi.intervals_ms.begin(), ibi.intervals_ms.end());
        const double integral = oracle::trapezoid(
            [&](double x) { return kde_density(ibi, x, bw); }, *lo_it - 6.0 * bw,
            *hi_it + 6.0 * bw, 0.1);
        CHECK(integral == doctest::Approx(1.0).epsilon(1e-3));
    }
}

TEST_CASE("f3 is non-negative and recomputes identically after scaling") {
    Rng rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        const auto ibi = random_ibis(rng, 10 + rng.below(30));
        CHECK(f3_rayleigh_resemblance(ibi) >= 0.0);
    }

    const auto ibi = random_ibis(rng, 20);
    std::vector<double> doubled;
    for (double v : ibi.intervals_ms) doubled.push_back(2.0 * v);
    const auto doubled_ibi = ibi_from_intervals(doubled);
    const double once = f3_rayleigh_resemblance(doubled_ibi);
    const double again = f3_rayleigh_resemblance(ibi_from_intervals(doubled));
    CHECK(once == doctest::Approx(again).epsilon(1e-9));
}

TEST_CASE("f3 ranks Rayleigh-like data below a two-point mixture") {
    // Monte-Carlo comparison harness: per trial, 2000 draws from a shifted
    // Rayleigh(120 ms) against 2000 draws from the {600, 1000} ms mixture.
    Rng rng(314159);
    int rayleigh_lower = 0;
    const int trials = 100;
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<double> rayleigh_like, mixture;
        rayleigh_like.reserve(2000);
        mixture.reserve(2000);
        for (int i = 0; i < 2000; ++i) {
            const double u = 1.0 - rng.uniform();  // (0, 1]
            rayleigh_like.push_back(250.0 + 120.0 * std::sqrt(-2.0 * std::log(u)));
            mixture.push_back(rng.uniform() < 0.5 ? 600.0 : 1000.0);
        }
        const double f3_r = f3_rayleigh_resemblance(ibi_from_intervals(rayleigh_like));
        const double f3_m = f3_rayleigh_resemblance(ibi_from_intervals(mixture));
        if (f3_r < f3_m) ++rayleigh_lower;
    }
    CHECK(rayleigh_lower >= 95);
}

TEST_CASE("extract_features on a constant series") {
    const auto ibi = ibi_from_intervals(std::vector<double>(40, 800.0));
    const auto f = extract_features(ibi);
    CHECK(f.f1 == 0.0);
    CHECK(f.f2 == 0.0);
    CHECK(f.f3 >= 0.0);

    // The flat series produces the 40-vertex path graph; freeze the graph
    // features from the definitional oracles.
    const auto edges = oracle::hvg_edges_definitional(ibi.intervals_ms);
    CHECK(edges.size() == 39);
    const auto ecc = oracle::bfs_eccentricities(40, edges);
    CHECK(f.f4 == static_cast<double>(*std::min_element(ecc.begin(), ecc.end())));
    CHECK(f.f4 == 20.0);
    const double f5_oracle = oracle::entropy_sum(oracle::mixing_by_half_edges(40, edges));
    CHECK(f.f5 == doctest::Approx(f5_oracle).epsilon(1e-12));
}

TEST_CASE("extract_features respects the feature-vector invariants") {
    Rng rng(640);
    for (int trial = 0; trial < 50; ++trial) {
        const auto ibi = random_ibis(rng, 10 + rng.below(50));
        const auto f = extract_features(ibi);
        CHECK(f.f1 >= 0.0);
        CHECK(f.f3 >= 0.0);
        CHECK(f.f4 >= 0.0);
        CHECK(f.f4 == std::floor(f.f4));
        CHECK(f.f5 <= 0.0);
    }
}

TEST_CASE("extract_features needs ten intervals") {
    CHECK_THROWS_AS(extract_features(ibi_from_intervals(std::vector<double>(9, 800.0))), Error);
    CHECK_NOTHROW(extract_features(ibi_from_intervals(std::vector<double>(10, 800.0))));
}
