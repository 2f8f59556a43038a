// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>
#include <vector>

#include <stdexcept>

#include <doctest.h>

#include "moeabus/metrics.hpp"
#include "moeabus/rand.hpp"

using namespace moeabus;

TEST_SUITE("metrics") {

TEST_CASE("entropy of identical points is zero") {
    std::vector<Point2> points(100, Point2{0.3, 0.7});
    CHECK(distribution_entropy(points, 10) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("entropy of four occupied cells is two bits") {
    const std::vector<Point2> points{{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}};
    CHECK(distribution_entropy(points, 2) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("entropy hand value for a skewed histogram") {
    // 8 points: one cell twice, six cells once -> 0.25*2 + 0.75*3 = 2.75 bits.
    std::vector<Point2> points;
    for (int i = 0; i < 7; ++i)
        points.push_back({static_cast<double>(i % 3), static_cast<double>(i / 3)});
    points.push_back(points.front());
    CHECK(distribution_entropy(points, 3) == doctest::Approx(2.75).epsilon(1e-12));
}

TEST_CASE("entropy input validation and bounds") {
    CHECK_THROWS_AS(distribution_entropy({}, 10), std::invalid_argument);
    std::vector<Point2> points{{0.5, 0.5}};
    CHECK_THROWS_AS(distribution_entropy(points, 0), std::invalid_argument);

    auto rng = make_engine(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Point2> cloud;
        const int n = 1 + static_cast<int>(rng() % 64);
        for (int i = 0; i < n; ++i) cloud.push_back({unit(rng), unit(rng)});
        const double h = distribution_entropy(cloud, 10);
        CHECK(h >= 0.0);
        CHECK(h <= std::log2(std::min<double>(n, 100.0)) + 1e-12);
    }
}

TEST_CASE("entropy is permutation invariant") {
    auto rng = make_engine(6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Point2> cloud;
    for (int i = 0; i < 40; ++i) cloud.push_back({unit(rng), unit(rng)});
    const double h = distribution_entropy(cloud, 10);
    std::shuffle(cloud.begin(), cloud.end(), rng);
    CHECK(distribution_entropy(cloud, 10) == doctest::Approx(h).epsilon(1e-12));
}

TEST_CASE("explicit-bounds entropy shares cells across point sets") {
    // Two sets on a common frame: the concentrated one keeps less entropy
    // even though its own min-max stretch would hide that.
    std::vector<Point2> spread, packed;
    for (int i = 0; i < 10; ++i) {
        spread.push_back({0.0, static_cast<double>(i)});
        packed.push_back({0.0, 4.0 + 0.1 * i});
    }
    const Point2 lo{0.0, 0.0};
    const Point2 hi{0.0, 9.0};
    CHECK(distribution_entropy(spread, 10, lo, hi) >
          distribution_entropy(packed, 10, lo, hi));
    // Set-relative normalization erases exactly that difference.
    CHECK(distribution_entropy(spread, 10) ==
          doctest::Approx(distribution_entropy(packed, 10)));
    // Out-of-bounds values clamp into the edge cells.
    const std::vector<Point2> outside{{-5.0, -5.0}, {20.0, 20.0}};
    CHECK(distribution_entropy(outside, 10, lo, {1.0, 9.0}) == doctest::Approx(1.0));
}

TEST_CASE("hypervolume of a single origin point") {
    const std::vector<Point2> points{{0.0, 0.0}};
    CHECK(hypervolume_2d(points, {1.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hypervolume two-rectangle hand value") {
    const std::vector<Point2> points{{0.2, 0.6}, {0.6, 0.2}};
    CHECK(hypervolume_2d(points, {1.0, 1.0}) == doctest::Approx(0.48).epsilon(1e-12));
}

TEST_CASE("dominated points contribute nothing") {
    std::vector<Point2> points{{0.2, 0.6}, {0.6, 0.2}};
    const double base = hypervolume_2d(points, {1.0, 1.0});
    points.push_back({0.7, 0.7});  // dominated by both
    CHECK(hypervolume_2d(points, {1.0, 1.0}) == doctest::Approx(base).epsilon(1e-15));
    points.push_back({1.2, 0.1});  // beyond the reference on x
    CHECK(hypervolume_2d(points, {1.0, 1.0}) == doctest::Approx(base).epsilon(1e-15));
}

TEST_CASE("adding a point never decreases the hypervolume") {
    auto rng = make_engine(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<Point2> points;
        const int n = 1 + static_cast<int>(rng() % 20);
        for (int i = 0; i < n; ++i) points.push_back({unit(rng), unit(rng)});
        const double before = hypervolume_2d(points, {1.05, 1.05});
        points.push_back({unit(rng), unit(rng)});
        const double after = hypervolume_2d(points, {1.05, 1.05});
        CHECK(after >= before - 1e-12);
    }
}

TEST_CASE("hypervolume scales with both axes") {
    auto rng = make_engine(8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Point2> points;
    for (int i = 0; i < 12; ++i) points.push_back({unit(rng), unit(rng)});
    const double base = hypervolume_2d(points, {1.1, 1.1});
    std::vector<Point2> scaled;
    for (const auto& p : points) scaled.push_back({2.0 * p.x, 3.0 * p.y});
    CHECK(hypervolume_2d(scaled, {2.2, 3.3}) == doctest::Approx(6.0 * base).epsilon(1e-9));
}

TEST_CASE("empty contribution yields zero") {
    const std::vector<Point2> points{{2.0, 2.0}};
    CHECK(hypervolume_2d(points, {1.0, 1.0}) == 0.0);
    CHECK(hypervolume_2d({}, {1.0, 1.0}) == 0.0);
}

}  // TEST_SUITE
