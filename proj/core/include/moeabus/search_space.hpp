// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace moeabus {

/// One stage of the backbone. Channels and spatial geometry are fixed per
/// block; only depth and the per-layer (expand, kernel) choices are searched.
struct BlockSpec {
    int in_channels = 0;
    int out_channels = 0;
    int stride = 1;                    // applied by the first layer of the block
    int input_resolution_divisor = 1;  // spatial downscale at block entry, relative to the input image
};

struct SearchSpaceConfig {
    std::vector<int> resolution_options;
    std::vector<BlockSpec> blocks;
    int max_layers_per_block = 0;
    std::vector<int> depth_options;
    std::vector<double> expand_options;
    std::vector<int> kernel_options;

    /// 1 resolution gene + per block: 1 depth gene + max_layers (expand, kernel) pairs.
    [[nodiscard]] int genome_length() const noexcept {
        return 1 + static_cast<int>(blocks.size()) * (1 + 2 * max_layers_per_block);
    }
    [[nodiscard]] int genes_per_block() const noexcept { return 1 + 2 * max_layers_per_block; }
    [[nodiscard]] int block_offset(int block) const noexcept { return 1 + block * genes_per_block(); }

    /// Throws std::invalid_argument when an option list is empty, not strictly
    /// increasing, or max(depth_options) != max_layers_per_block.
    void validate() const;
};

/// MobileNetV3-style five-stage space: resolutions {192..256}, depths {2,3,4},
/// kernels {3,5,7}, expands {3,4,6}.
SearchSpaceConfig default_space();

/// Enumerable two-block space with exactly 400 valid genomes; used by the
/// exhaustive tests and the end-to-end optimality check.
SearchSpaceConfig tiny_space();

/// Fixed-length integer encoding. Gene 0 is a 1-based index into
/// resolution_options; each block contributes a 1-based depth gene followed by
/// max_layers_per_block slots of (expand index, kernel index). Slots beyond
/// the decoded depth hold (0, 0); zero never appears elsewhere.
struct Genome {
    std::vector<int> genes;

    Genome() = default;
    explicit Genome(std::vector<int> g) : genes(std::move(g)) {}

    friend bool operator==(const Genome&, const Genome&) = default;
    friend auto operator<=>(const Genome&, const Genome&) = default;
};

struct GenomeHash {
    std::size_t operator()(const Genome& g) const noexcept;
};

using GenomeSet = std::unordered_set<Genome, GenomeHash>;

/// Number of option values selectable at a gene position (resolution, depth,
/// expand or kernel depending on the position).
int option_count_at(const SearchSpaceConfig& cfg, int position);

int decoded_depth(const Genome& g, const SearchSpaceConfig& cfg, int block);
int decoded_resolution(const Genome& g, const SearchSpaceConfig& cfg);

/// True iff every Genome invariant holds. Throws std::invalid_argument on a
/// length mismatch (a structural defect, not mere invalidity).
bool validate_genome(const Genome& g, const SearchSpaceConfig& cfg);

Genome random_genome(const SearchSpaceConfig& cfg, std::mt19937_64& rng);
Genome random_genome(const SearchSpaceConfig& cfg, std::uint64_t seed);

/// Clamps always-active genes (resolution, depth) into their index range,
/// zeroes slots beyond the decoded depth, and fills invalid slots within the
/// depth with uniform random valid indices.
Genome repair_genome(std::vector<int> raw, const SearchSpaceConfig& cfg, std::mt19937_64& rng);
Genome repair_genome(std::vector<int> raw, const SearchSpaceConfig& cfg, std::uint64_t seed);

/// Raw two-point segment swap on [cut1, cut2), before any repair.
std::pair<std::vector<int>, std::vector<int>> swap_segment(const std::vector<int>& a,
                                                           const std::vector<int>& b,
                                                           int cut1, int cut2);

/// Two-point crossover with explicit cuts; children are repaired with seeds
/// derived from the operator seed. Throws on an invalid cut order.
std::pair<Genome, Genome> two_point_crossover(const Genome& p1, const Genome& p2,
                                              int cut1, int cut2,
                                              const SearchSpaceConfig& cfg, std::uint64_t seed);

/// Cut points drawn uniformly over 0 <= cut1 < cut2 <= length.
std::pair<Genome, Genome> two_point_crossover(const Genome& p1, const Genome& p2,
                                              const SearchSpaceConfig& cfg, std::mt19937_64& rng);

/// Deb's polynomial mutation perturbation for u in [0,1):
/// delta = (2u)^(1/(eta+1)) - 1 for u < 0.5, 1 - (2(1-u))^(1/(eta+1)) otherwise.
double polynomial_mutation_delta(double u, double eta);

/// Mutates each gene independently with probability per_gene_prob, treating
/// the gene as a real on its index range and rounding to the nearest integer;
/// the result is repaired.
Genome polynomial_mutation(const Genome& g, double eta_m, double per_gene_prob,
                           const SearchSpaceConfig& cfg, std::uint64_t seed);
Genome polynomial_mutation(const Genome& g, double eta_m, double per_gene_prob,
                           const SearchSpaceConfig& cfg, std::mt19937_64& rng);

/// Textual form: comma-separated non-negative integers, one genome per line.
std::string genome_to_csv(const Genome& g);
Genome genome_from_csv(std::string_view line);

/// Count of valid genomes in the space (no enumeration).
std::uint64_t count_genomes(const SearchSpaceConfig& cfg);

/// All valid genomes, resolution-major then block by block. Throws when the
/// space holds more than `limit` genomes.
std::vector<Genome> enumerate_genomes(const SearchSpaceConfig& cfg, std::uint64_t limit = 1u << 22);

}  // namespace moeabus
