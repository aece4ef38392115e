#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "afib/hvg.hpp"
#include "afib/rng.hpp"
#include "oracles.hpp"

using namespace afib;

namespace {

std::set<std::pair<int, int>> edge_set(const HvGraph& g) {
    return {g.edges.begin(), g.edges.end()};
}

// Series with deliberate tie pressure: small integer levels half the time.
std::vector<double> random_series(Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    const bool coarse = rng.uniform() < 0.5;
    for (auto& x : v) {
        x = coarse ? std::floor(rng.uniform(0.0, 6.0)) : rng.uniform(250.0, 3000.0);
    }
    return v;
}

}  // namespace

TEST_CASE("flat series gives the path graph (ties block visibility)") {
    const auto g = build_hvg({5.0, 5.0, 5.0, 5.0});
    CHECK(edge_set(g) == std::set<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}});
    CHECK(edge_set(g) == oracle::hvg_edges_definitional({5.0, 5.0, 5.0, 5.0}));
}

TEST_CASE("a valley below both endpoints does not block") {
    const std::vector<double> v{3.0, 1.0, 2.0};
    const auto g = build_hvg(v);
    CHECK(edge_set(g) == std::set<std::pair<int, int>>{{0, 1}, {1, 2}, {0, 2}});
    CHECK(edge_set(g) == oracle::hvg_edges_definitional(v));
}

TEST_CASE("monotone series gives the path graph") {
    const std::vector<double> v{1.0, 2.0, 3.0};
    CHECK(edge_set(build_hvg(v)) == std::set<std::pair<int, int>>{{0, 1}, {1, 2}});
    CHECK(edge_set(build_hvg(v)) == oracle::hvg_edges_definitional(v));
}

TEST_CASE("stack construction matches the definitional oracle") {
    Rng rng(20240105);
    for (int trial = 0; trial < 400; ++trial) {
        const auto n = static_cast<std::size_t>(1 + rng.below(128));
        const auto v = random_series(rng, n);
        CAPTURE(trial);
        REQUIRE(edge_set(build_hvg(v)) == oracle::hvg_edges_definitional(v));
    }
}

TEST_CASE("radius examples") {
    CHECK(radius(build_hvg({800.0})) == 0);

    const auto g = build_hvg({1.0, 2.0, 3.0});
    const auto ecc = eccentricities(g);
    CHECK(ecc == std::vector<int>{2, 1, 2});
    CHECK(radius(g) == 1);

    CHECK(radius(build_hvg({5.0, 5.0, 5.0, 5.0})) == 2);
}

TEST_CASE("radius equals the BFS oracle and paths have radius N/2") {
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = static_cast<std::size_t>(1 + rng.below(80));
        const auto v = random_series(rng, n);
        const auto g = build_hvg(v);
        const auto ecc = oracle::bfs_eccentricities(static_cast<int>(n), edge_set(g));
        CHECK(radius(g) == *std::min_element(ecc.begin(), ecc.end()));
    }
    // Monotone series of length N produce the path graph.
    for (std::size_t n = 2; n <= 40; ++n) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = 500.0 + static_cast<double>(i);
        const auto g = build_hvg(v);
        CHECK(g.edges.size() == n - 1);
        CHECK(radius(g) == static_cast<int>(n / 2));
    }
}

TEST_CASE("mixing matrix worked examples") {
    SUBCASE("single edge collapses to e_{1,1} = 1") {
        const auto m = mixing_matrix(build_hvg({700.0, 900.0}));
        REQUIRE(m.entries.size() == 1);
        CHECK(m.entries.at({1, 1}) == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("path P3 splits between (1,2) and (2,1)") {
        const auto m = mixing_matrix(build_hvg({1.0, 2.0, 3.0}));
        REQUIRE(m.entries.size() == 2);
        CHECK(m.entries.at({1, 2}) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(m.entries.at({2, 1}) == doctest::Approx(0.5).epsilon(1e-15));
    }
}

TEST_CASE("mixing matrix is symmetric, normalized, and matches half-edge enumeration") {
    Rng rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = static_cast<std::size_t>(2 + rng.below(60));
        const auto v = random_series(rng, n);
        const auto g = build_hvg(v);
        const auto m = mixing_matrix(g);
        const auto ref = oracle::mixing_by_half_edges(static_cast<int>(n), edge_set(g));

        double total = 0.0;
        for (const auto& [key, e] : m.entries) {
            total += e;
            CHECK(m.entries.at({key.second, key.first}) == doctest::Approx(e).epsilon(1e-12));
            REQUIRE(ref.count(key) == 1);
            CHECK(e == doctest::Approx(ref.at(key)).epsilon(1e-12));
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(m.entries.size() == ref.size());
    }
}

TEST_CASE("disassortative entropy examples") {
    // Two vertices, one edge: a single unit entry.
    CHECK(hvg_disassortative_entropy(ibi_from_intervals({700.0, 900.0})) == 0.0);

    // P3: 2 * (0.5 ln 0.5) = -ln 2.
    const double p3 = hvg_disassortative_entropy(ibi_from_intervals({1.0, 2.0, 3.0}));
    CHECK(p3 == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
    CHECK(p3 == doctest::Approx(-0.6931).epsilon(1e-4));
}

TEST_CASE("entropy is never positive and matches the oracle") {
    Rng rng(9001);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = static_cast<std::size_t>(2 + rng.below(100));
        const auto v = random_series(rng, n);
        const auto g = build_hvg(v);
        const double ent = mixing_entropy(mixing_matrix(g));
        CHECK(ent <= 0.0);
        const auto ref = oracle::mixing_by_half_edges(static_cast<int>(n), edge_set(g));
        CHECK(ent == doctest::Approx(oracle::entropy_sum(ref)).epsilon(1e-12));
    }
}

TEST_CASE("positive affine transforms leave the graph unchanged") {
    Rng rng(333);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = static_cast<std::size_t>(1 + rng.below(64));
        const auto v = random_series(rng, n);
        const double a = rng.uniform(0.1, 10.0);
        const double b = rng.uniform(-500.0, 500.0);
        std::vector<double> w(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) w[i] = a * v[i] + b;
        CHECK(edge_set(build_hvg(v)) == edge_set(build_hvg(w)));
    }
}

TEST_CASE("structural invariants over random series") {
    Rng rng(5150);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = static_cast<std::size_t>(2 + rng.below(100));
        const auto g = build_hvg(random_series(rng, n));

        // Consecutive vertices always joined, so the graph is connected.
        for (std::size_t j = 0; j + 1 < n; ++j) {
            CHECK(std::binary_search(g.adjacency[j].begin(), g.adjacency[j].end(),
                                     static_cast<int>(j) + 1));
        }
        CHECK(g.edges.size() <= 2 * n - 3);

        const auto ecc = eccentricities(g);
        const int r = *std::min_element(ecc.begin(), ecc.end());
        const int diameter = *std::max_element(ecc.begin(), ecc.end());
        CHECK(r <= diameter);
        CHECK(diameter <= 2 * r);
    }
}

TEST_CASE("no self loops or duplicate edges") {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = build_hvg(random_series(rng, 64));
        std::set<std::pair<int, int>> seen;
        for (const auto& [a, b] : g.edges) {
            CHECK(a < b);
            CHECK(seen.insert({a, b}).second);
        }
    }
}
