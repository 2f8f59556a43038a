// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <stdexcept>

#include <doctest.h>

#include "moeabus/metrics.hpp"
#include "moeabus/rand.hpp"
#include "moeabus/sampling.hpp"

using namespace moeabus;

namespace {

// Pool over the tiny space's distinct genomes with synthetic MAdds values so
// region geometry is fully controlled.
SamplePool synthetic_pool(const std::vector<double>& madds) {
    const auto genomes = enumerate_genomes(tiny_space());
    REQUIRE(madds.size() <= genomes.size());
    SamplePool pool;
    for (std::size_t i = 0; i < madds.size(); ++i)
        pool.members.push_back({genomes[i], madds[i]});
    return pool;
}

std::vector<double> even_madds(std::size_t n, double lo, double hi) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

}  // namespace

TEST_SUITE("sampling") {

TEST_CASE("partition boundaries and assignment") {
    SamplePool pool = synthetic_pool({100, 250, 300, 400, 500, 600});
    const auto part = partition_regions(pool, 5);
    REQUIRE(part.boundaries.size() == 6);
    for (int i = 0; i < 6; ++i)
        CHECK(part.boundaries[i] == doctest::Approx(100.0 + 100.0 * i).epsilon(1e-12));
    CHECK(part.assignment[0] == 0);    // 100
    CHECK(part.assignment[1] == 1);    // 250
    CHECK(part.assignment[4] == 4);    // 500 (half-open boundaries)
    CHECK(part.assignment[5] == 4);    // 600: last interval closed
}

TEST_CASE("partition of two values into two regions") {
    SamplePool pool = synthetic_pool({1, 3});
    const auto part = partition_regions(pool, 2);
    CHECK(part.assignment[0] == 0);
    CHECK(part.assignment[1] == 1);
}

TEST_CASE("degenerate pools are rejected") {
    SamplePool pool = synthetic_pool({5, 5, 5});
    CHECK_THROWS_WITH_AS(partition_regions(pool, 4),
                         doctest::Contains("larger pool"), std::invalid_argument);
    CHECK_THROWS_AS(partition_regions(SamplePool{}, 4), std::invalid_argument);
}

TEST_CASE("uniform split quotas stay within one of each other") {
    // 400 members spread evenly over [0, 800): 8 regions of ~50 members.
    SamplePool pool = synthetic_pool(even_madds(400, 0.0, 800.0));
    const auto part = partition_regions(pool, 8);
    const auto [p1, p2] = uniform_split_populations(pool, part, 25, 75, 2, 42);
    CHECK(p1.size() == 25);
    CHECK(p2.size() == 75);

    // Recover each pick's region through its unique genome.
    std::map<Genome, std::size_t> region_of;
    for (std::size_t i = 0; i < pool.size(); ++i)
        region_of[pool.members[i].genome] = part.assignment[i];
    std::map<std::size_t, int> p1_counts, p2_counts;
    for (const auto& g : p1) ++p1_counts[region_of.at(g)];
    for (const auto& g : p2) ++p2_counts[region_of.at(g)];

    for (const auto& [region, count] : p1_counts) {
        CHECK((region <= 1 || region >= 6));
        CHECK(count >= 6);  // ceil/floor of 25 over 4 extreme regions
        CHECK(count <= 7);
    }
    for (const auto& [region, count] : p2_counts) {
        CHECK(region >= 2);
        CHECK(region <= 5);
        CHECK(count >= 18);  // 75 over 4 middle regions
        CHECK(count <= 19);
    }
}

TEST_CASE("a deficient extreme region hands its quota to the adjacent one") {
    // Region 1 of 8 is almost empty: everything sits in regions 0 and 2..7.
    std::vector<double> madds = even_madds(300, 200.0, 799.0);  // regions 2..7
    for (int i = 0; i < 60; ++i) madds.push_back(0.0 + i * 99.0 / 59.0);  // region 0
    madds.push_back(150.0);  // single member of region 1
    SamplePool pool = synthetic_pool(madds);
    const auto part = partition_regions(pool, 8);
    const auto [p1, p2] = uniform_split_populations(pool, part, 25, 75, 2, 7);
    CHECK(p1.size() == 25);
    CHECK(p2.size() == 75);

    std::map<Genome, std::size_t> region_of;
    for (std::size_t i = 0; i < pool.size(); ++i)
        region_of[pool.members[i].genome] = part.assignment[i];
    std::map<std::size_t, int> p1_counts;
    for (const auto& g : p1) ++p1_counts[region_of.at(g)];
    CHECK(p1_counts[1] == 1);       // all region 1 has to give
    CHECK(p1_counts[0] >= 6 + 5);   // absorbed the deficit
}

TEST_CASE("split results are deterministic and duplicate-free") {
    SamplePool pool = synthetic_pool(even_madds(400, 10.0, 700.0));
    const auto part = partition_regions(pool, 8);
    const auto [a1, a2] = uniform_split_populations(pool, part, 25, 75, 2, 99);
    const auto [b1, b2] = uniform_split_populations(pool, part, 25, 75, 2, 99);
    CHECK(a1 == b1);
    CHECK(a2 == b2);

    std::set<Genome> all(a1.begin(), a1.end());
    for (const auto& g : a2) all.insert(g);
    CHECK(all.size() == a1.size() + a2.size());
}

TEST_CASE("a pool too small for the populations is rejected") {
    SamplePool pool = synthetic_pool(even_madds(30, 0.0, 800.0));
    const auto part = partition_regions(pool, 8);
    CHECK_THROWS_AS(uniform_split_populations(pool, part, 25, 75, 2, 1),
                    std::invalid_argument);
}

TEST_CASE("random baseline with n equal to the pool returns a permutation") {
    SamplePool pool = synthetic_pool(even_madds(50, 0.0, 100.0));
    const auto sample = baseline_sample(pool, tiny_space(), SampleMethod::random, 50, 3);
    CHECK(sample.size() == 50);
    std::multiset<Genome> got(sample.begin(), sample.end());
    std::multiset<Genome> expected;
    for (const auto& m : pool.members) expected.insert(m.genome);
    CHECK(got == expected);
    CHECK_THROWS_AS(baseline_sample(pool, tiny_space(), SampleMethod::random, 51, 3),
                    std::invalid_argument);
}

TEST_CASE("stratified sampling with one stratum equals random") {
    SamplePool pool = synthetic_pool(even_madds(120, 0.0, 100.0));
    const auto a = baseline_sample(pool, tiny_space(), SampleMethod::random, 30, 11);
    const auto b = baseline_sample(pool, tiny_space(), SampleMethod::stratified, 30, 11, 1);
    CHECK(a == b);
}

TEST_CASE("stratified sampling draws from every stratum") {
    SamplePool pool = synthetic_pool(even_madds(100, 0.0, 100.0));
    const auto sample = baseline_sample(pool, tiny_space(), SampleMethod::stratified, 10, 5, 10);
    CHECK(sample.size() == 10);
    // 10 strata of 10 members, quota 1 each: consecutive encoding-sorted
    // blocks contribute exactly one genome apiece.
    std::vector<Genome> sorted_genomes;
    for (const auto& m : pool.members) sorted_genomes.push_back(m.genome);
    std::sort(sorted_genomes.begin(), sorted_genomes.end());
    std::set<std::size_t> hit;
    for (const auto& g : sample) {
        const auto it = std::lower_bound(sorted_genomes.begin(), sorted_genomes.end(), g);
        hit.insert(static_cast<std::size_t>(it - sorted_genomes.begin()) / 10);
    }
    CHECK(hit.size() == 10);
}

TEST_CASE("latin hypercube strata cover each axis exactly once") {
    auto rng = make_engine(13);
    const std::vector<std::pair<double, double>> axes{{0.5, 4.5}, {0.5, 2.5}, {0.0, 1.0}};
    const auto matrix = latin_hypercube_matrix(axes, 8, rng);
    REQUIRE(matrix.size() == 8);
    for (std::size_t a = 0; a < axes.size(); ++a) {
        std::set<int> strata;
        for (const auto& row : matrix) {
            const double t = (row[a] - axes[a].first) / (axes[a].second - axes[a].first);
            CHECK(t >= 0.0);
            CHECK(t < 1.0);
            strata.insert(static_cast<int>(t * 8));
        }
        CHECK(strata.size() == 8);  // one sample per stratum
    }
}

TEST_CASE("latin hypercube genomes are valid and deterministic") {
    SamplePool pool;  // ignored by the LHS path
    const auto cfg = default_space();
    const auto a = baseline_sample(pool, cfg, SampleMethod::latin_hypercube, 40, 17);
    const auto b = baseline_sample(pool, cfg, SampleMethod::latin_hypercube, 40, 17);
    CHECK(a == b);
    CHECK(a.size() == 40);
    for (const auto& g : a) CHECK(validate_genome(g, cfg));
}

TEST_CASE("uniform split flattens the MAdds marginal of real pools") {
    // Distribution contrast: over 20 seeds on 5000-genome pools, the MAdds
    // histogram of P1 u P2 carries more entropy than an equal-size random
    // sample, measured on the shared pool range.
    const auto cfg = default_space();
    int wins = 0;
    for (int s = 0; s < 20; ++s) {
        const auto pool = build_pool(cfg, 5000, derive_seed(99, 1, s));
        const auto part = partition_regions(pool, 8);
        const Point2 lo{0.0, part.boundaries.front()};
        const Point2 hi{0.0, part.boundaries.back()};
        const auto marginal_entropy = [&](const std::vector<Genome>& genomes) {
            std::map<Genome, double> madds_of;
            for (const auto& m : pool.members) madds_of.emplace(m.genome, m.madds);
            std::vector<Point2> points;
            for (const auto& g : genomes) points.push_back({0.0, madds_of.at(g)});
            return distribution_entropy(points, 10, lo, hi);
        };
        auto [p1, p2] = uniform_split_populations(pool, part, 25, 75, 2, derive_seed(99, 2, s));
        std::vector<Genome> uniform = std::move(p1);
        uniform.insert(uniform.end(), p2.begin(), p2.end());
        const auto random = baseline_sample(pool, cfg, SampleMethod::random, 100,
                                            derive_seed(99, 3, s));
        wins += marginal_entropy(uniform) > marginal_entropy(random);
    }
    CHECK(wins >= 19);  // >= 95% of seeds
}

TEST_CASE("pool save/load round-trip") {
    const auto cfg = tiny_space();
    SamplePool pool = build_pool(cfg, 64, 5);
    std::stringstream buffer;
    save_pool(pool, buffer);
    const auto loaded = load_pool(buffer);
    REQUIRE(loaded.size() == pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        CHECK(loaded.members[i].genome == pool.members[i].genome);
        CHECK(loaded.members[i].madds == pool.members[i].madds);
    }
}

TEST_CASE("method names round-trip") {
    for (auto m : {SampleMethod::random, SampleMethod::stratified, SampleMethod::latin_hypercube})
        CHECK(sample_method_from_string(to_string(m)) == m);
    CHECK_THROWS_AS(sample_method_from_string("sobol"), std::invalid_argument);
}

}  // TEST_SUITE
