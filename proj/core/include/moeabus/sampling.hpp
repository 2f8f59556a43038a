// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "moeabus/search_space.hpp"

namespace moeabus {

/// Candidate pool: randomly drawn genomes with their analytic MAdds (M).
struct SamplePool {
    struct Member {
        Genome genome;
        double madds = 0.0;
    };
    std::vector<Member> members;

    [[nodiscard]] std::size_t size() const noexcept { return members.size(); }
};

SamplePool build_pool(const SearchSpaceConfig& cfg, std::size_t size, std::uint64_t seed);

/// One member per line: "genome-csv;madds".
void save_pool(const SamplePool& pool, std::ostream& out);
SamplePool load_pool(std::istream& in);

/// Equal-width partition of the pool's MAdds range into R regions. Intervals
/// are half-open except the last, which is closed so the maximum belongs to
/// region R-1.
struct RegionPartition {
    std::vector<double> boundaries;        // R+1 strictly increasing values
    std::vector<std::size_t> assignment;   // pool member index -> region index

    [[nodiscard]] std::size_t region_count() const noexcept {
        return boundaries.empty() ? 0 : boundaries.size() - 1;
    }
};

/// Throws std::invalid_argument on an empty pool, R < 2, or a degenerate pool
/// whose members all share one MAdds value (the message asks for a larger pool).
RegionPartition partition_regions(const SamplePool& pool, int region_count);

/// Draws `n` genomes with quotas spread as equally as possible (difference
/// <= 1) over `regions`, processed in the given order. Members are picked
/// uniformly without replacement inside each region; genomes present in
/// `taken` are skipped and picked genomes are inserted into it. Deficits from
/// under-populated regions move to the nearest regions in the list. Throws
/// when the regions cannot supply n distinct genomes.
std::vector<std::size_t> region_quota_sample(const SamplePool& pool,
                                             const RegionPartition& partition,
                                             const std::vector<std::size_t>& regions,
                                             std::size_t n, std::mt19937_64& rng,
                                             GenomeSet& taken);

/// Splits the pool into population 1 (the E lowest plus E highest regions)
/// and population 2 (the middle R-2E regions), duplicate-free within and
/// across the two populations. Requires R > 2E.
std::pair<std::vector<Genome>, std::vector<Genome>> uniform_split_populations(
    const SamplePool& pool, const RegionPartition& partition, std::size_t n1, std::size_t n2,
    int extreme_per_side, std::uint64_t seed);

enum class SampleMethod { random, stratified, latin_hypercube };

SampleMethod sample_method_from_string(const std::string& name);
const char* to_string(SampleMethod method);

/// Baseline samplers:
///  - random: uniform without replacement from the pool.
///  - stratified: pool sorted by encoding, cut into `strata` contiguous
///    strata, per-stratum quotas; one stratum degenerates to random.
///  - latin_hypercube: one sample per axis-stratum on each gene's relaxed
///    index range [0.5, k+0.5), rounded and repaired (ignores the pool).
std::vector<Genome> baseline_sample(const SamplePool& pool, const SearchSpaceConfig& cfg,
                                    SampleMethod method, std::size_t n, std::uint64_t seed,
                                    int strata = 10);

/// Raw Latin hypercube draw: one point per stratum on every axis, uniform
/// within the stratum, axis strata assigned by independent permutations.
std::vector<std::vector<double>> latin_hypercube_matrix(
    const std::vector<std::pair<double, double>>& axes, std::size_t n, std::mt19937_64& rng);

}  // namespace moeabus
