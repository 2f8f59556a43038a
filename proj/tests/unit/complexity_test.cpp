// SPDX-License-Identifier: Apache-2.0
#include <stdexcept>

#include <doctest.h>

#include "moeabus/complexity.hpp"
#include "moeabus/rand.hpp"
#include "moeabus/search_space.hpp"

using namespace moeabus;

namespace {

// Single block, single layer, geometry chosen so the layer sees H = W = 16,
// C = C_out = 16, e = 3, k = 3, stride 1.
SearchSpaceConfig one_layer_space() {
    SearchSpaceConfig cfg;
    cfg.resolution_options = {32};
    cfg.blocks = {{16, 16, 1, 2}};
    cfg.max_layers_per_block = 1;
    cfg.depth_options = {1};
    cfg.expand_options = {3.0};
    cfg.kernel_options = {3};
    return cfg;
}

}  // namespace

TEST_SUITE("complexity") {

TEST_CASE("hand-computed single layer cost") {
    // 256*16*48 + 256*48*9 + 256*48*16 = 503,808 MAdds = 0.503808 M.
    CHECK(inverted_bottleneck_madds(16, 16, 16, 3, 3, 16, 1) == doctest::Approx(503808.0));
    const auto cfg = one_layer_space();
    const Genome g({1, 1, 1, 1});
    const auto report = compute_madds(g, cfg);
    REQUIRE(report.per_block.size() == 1);
    CHECK(report.per_block[0] == doctest::Approx(0.503808).epsilon(1e-12));
}

TEST_CASE("report components add up") {
    const auto cfg = default_space();
    auto rng = make_engine(3);
    for (int i = 0; i < 200; ++i) {
        const auto g = random_genome(cfg, rng);
        const auto report = compute_madds(g, cfg);
        double sum = report.stem_madds + report.head_madds;
        for (double m : report.per_block) sum += m;
        CHECK(report.total_madds == doctest::Approx(sum).epsilon(1e-9));
        CHECK(report.stem_madds > 0.0);
        CHECK(report.head_madds > 0.0);
        for (double m : report.per_block) CHECK(m > 0.0);
    }
}

TEST_CASE("evaluation is deterministic") {
    const auto cfg = default_space();
    const auto g = random_genome(cfg, std::uint64_t{5});
    const auto a = compute_madds(g, cfg);
    const auto b = compute_madds(g, cfg);
    CHECK(a.total_madds == b.total_madds);
    CHECK(a.per_block == b.per_block);
}

TEST_CASE("growing a kernel strictly raises the total") {
    const auto cfg = default_space();
    auto rng = make_engine(7);
    const auto g = random_genome(cfg, rng);
    auto bigger = g;
    // First block's first kernel gene: bump one option index if possible.
    const int kernel_pos = cfg.block_offset(0) + 2;
    REQUIRE(g.genes[kernel_pos] >= 1);
    bigger.genes[kernel_pos] = g.genes[kernel_pos] < 3 ? g.genes[kernel_pos] + 1 : 3;
    auto smaller = g;
    smaller.genes[kernel_pos] = 1;
    if (bigger.genes[kernel_pos] > smaller.genes[kernel_pos])
        CHECK(total_madds(smaller, cfg) < total_madds(bigger, cfg));
}

TEST_CASE("monotone in every searched gene") {
    const auto cfg = default_space();
    auto rng = make_engine(11);
    int compared = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const auto g = random_genome(cfg, rng);
        // Pick one active gene position and raise its index by one.
        std::uniform_int_distribution<int> pick(0, cfg.genome_length() - 1);
        const int pos = pick(rng);
        if (g.genes[pos] == 0) continue;  // padded slot
        auto raised = g;
        raised.genes[pos] += 1;
        const bool still_valid = [&] {
            try {
                return validate_genome(raised, cfg);
            } catch (const std::invalid_argument&) {
                return false;
            }
        }();
        if (!still_valid) continue;
        ++compared;
        CHECK(total_madds(g, cfg) <= total_madds(raised, cfg));
    }
    CHECK(compared > 200);
}

TEST_CASE("deeper blocks never get cheaper") {
    const auto cfg = tiny_space();
    // Depth 1 -> depth 2 with the extra slot filled by the smallest options.
    const Genome shallow({1, 1, 2, 2, 0, 0, 1, 1, 1, 0, 0});
    const Genome deep({1, 2, 2, 2, 1, 1, 1, 1, 1, 0, 0});
    CHECK(total_madds(shallow, cfg) < total_madds(deep, cfg));
}

TEST_CASE("invalid genomes are rejected") {
    const auto cfg = tiny_space();
    Genome g({1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0});  // non-zero beyond depth
    CHECK_THROWS_AS(compute_madds(g, cfg), std::invalid_argument);
}

}  // TEST_SUITE
