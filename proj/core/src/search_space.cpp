// SPDX-License-Identifier: Apache-2.0
#include "moeabus/search_space.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "moeabus/rand.hpp"

namespace moeabus {

namespace {

template <typename T>
void check_options(const std::vector<T>& opts, const char* name) {
    if (opts.empty()) throw std::invalid_argument(std::string(name) + " must not be empty");
    for (std::size_t i = 1; i < opts.size(); ++i) {
        if (!(opts[i - 1] < opts[i]))
            throw std::invalid_argument(std::string(name) + " must be strictly increasing");
    }
}

// Position kinds within a block chunk: offset 0 is the depth gene, then
// alternating expand / kernel genes.
enum class GeneKind { resolution, depth, expand, kernel };

GeneKind gene_kind(const SearchSpaceConfig& cfg, int position) {
    if (position == 0) return GeneKind::resolution;
    const int per_block = cfg.genes_per_block();
    const int within = (position - 1) % per_block;
    if (within == 0) return GeneKind::depth;
    return (within - 1) % 2 == 0 ? GeneKind::expand : GeneKind::kernel;
}

int clamp_index(int value, int count) { return std::clamp(value, 1, count); }

}  // namespace

void SearchSpaceConfig::validate() const {
    check_options(resolution_options, "resolution_options");
    check_options(depth_options, "depth_options");
    check_options(expand_options, "expand_options");
    check_options(kernel_options, "kernel_options");
    for (int r : resolution_options)
        if (r <= 0) throw std::invalid_argument("resolution_options must be positive");
    for (double e : expand_options)
        if (e <= 0) throw std::invalid_argument("expand_options must be positive");
    for (int k : kernel_options)
        if (k <= 0 || k % 2 == 0) throw std::invalid_argument("kernel_options must be odd positive");
    if (max_layers_per_block <= 0)
        throw std::invalid_argument("max_layers_per_block must be positive");
    for (int d : depth_options)
        if (d <= 0 || d > max_layers_per_block)
            throw std::invalid_argument("depth_options must lie in [1, max_layers_per_block]");
    if (depth_options.back() != max_layers_per_block)
        throw std::invalid_argument("max(depth_options) must equal max_layers_per_block");
    if (blocks.empty()) throw std::invalid_argument("blocks must not be empty");
    for (const BlockSpec& b : blocks) {
        if (b.in_channels <= 0 || b.out_channels <= 0)
            throw std::invalid_argument("block channels must be positive");
        if (b.stride != 1 && b.stride != 2)
            throw std::invalid_argument("block stride must be 1 or 2");
        if (b.input_resolution_divisor <= 0)
            throw std::invalid_argument("block input_resolution_divisor must be positive");
    }
}

SearchSpaceConfig default_space() {
    SearchSpaceConfig cfg;
    cfg.resolution_options = {192, 208, 224, 240, 256};
    cfg.blocks = {
        {16, 24, 2, 2},
        {24, 40, 2, 4},
        {40, 80, 2, 8},
        {80, 112, 1, 16},
        {112, 160, 2, 16},
    };
    cfg.max_layers_per_block = 4;
    cfg.depth_options = {2, 3, 4};
    cfg.expand_options = {3.0, 4.0, 6.0};
    cfg.kernel_options = {3, 5, 7};
    return cfg;
}

SearchSpaceConfig tiny_space() {
    SearchSpaceConfig cfg;
    cfg.resolution_options = {32};
    cfg.blocks = {
        {8, 16, 2, 2},
        {16, 32, 2, 4},
    };
    cfg.max_layers_per_block = 2;
    cfg.depth_options = {1, 2};
    cfg.expand_options = {3.0, 6.0};
    cfg.kernel_options = {3, 5};
    return cfg;
}

std::size_t GenomeHash::operator()(const Genome& g) const noexcept {
    std::uint64_t h = 0x243F6A8885A308D3ULL;
    for (int v : g.genes) h = splitmix64(h ^ static_cast<std::uint64_t>(v));
    return static_cast<std::size_t>(h);
}

int option_count_at(const SearchSpaceConfig& cfg, int position) {
    switch (gene_kind(cfg, position)) {
        case GeneKind::resolution: return static_cast<int>(cfg.resolution_options.size());
        case GeneKind::depth: return static_cast<int>(cfg.depth_options.size());
        case GeneKind::expand: return static_cast<int>(cfg.expand_options.size());
        case GeneKind::kernel: return static_cast<int>(cfg.kernel_options.size());
    }
    return 0;
}

int decoded_depth(const Genome& g, const SearchSpaceConfig& cfg, int block) {
    const int idx = g.genes[cfg.block_offset(block)];
    return cfg.depth_options[idx - 1];
}

int decoded_resolution(const Genome& g, const SearchSpaceConfig& cfg) {
    return cfg.resolution_options[g.genes[0] - 1];
}

bool validate_genome(const Genome& g, const SearchSpaceConfig& cfg) {
    if (static_cast<int>(g.genes.size()) != cfg.genome_length())
        throw std::invalid_argument("genome length " + std::to_string(g.genes.size()) +
                                    " does not match layout length " +
                                    std::to_string(cfg.genome_length()));
    const auto in_range = [](int v, std::size_t n) { return v >= 1 && v <= static_cast<int>(n); };
    if (!in_range(g.genes[0], cfg.resolution_options.size())) return false;
    for (std::size_t b = 0; b < cfg.blocks.size(); ++b) {
        const int base = cfg.block_offset(static_cast<int>(b));
        if (!in_range(g.genes[base], cfg.depth_options.size())) return false;
        const int depth = cfg.depth_options[g.genes[base] - 1];
        for (int l = 0; l < cfg.max_layers_per_block; ++l) {
            const int expand = g.genes[base + 1 + 2 * l];
            const int kernel = g.genes[base + 2 + 2 * l];
            if (l < depth) {
                if (!in_range(expand, cfg.expand_options.size())) return false;
                if (!in_range(kernel, cfg.kernel_options.size())) return false;
            } else {
                if (expand != 0 || kernel != 0) return false;
            }
        }
    }
    return true;
}

Genome random_genome(const SearchSpaceConfig& cfg, std::mt19937_64& rng) {
    const auto draw = [&rng](std::size_t n) {
        return std::uniform_int_distribution<int>(1, static_cast<int>(n))(rng);
    };
    std::vector<int> genes(static_cast<std::size_t>(cfg.genome_length()), 0);
    genes[0] = draw(cfg.resolution_options.size());
    for (std::size_t b = 0; b < cfg.blocks.size(); ++b) {
        const int base = cfg.block_offset(static_cast<int>(b));
        genes[base] = draw(cfg.depth_options.size());
        const int depth = cfg.depth_options[genes[base] - 1];
        for (int l = 0; l < depth; ++l) {
            genes[base + 1 + 2 * l] = draw(cfg.expand_options.size());
            genes[base + 2 + 2 * l] = draw(cfg.kernel_options.size());
        }
    }
    return Genome(std::move(genes));
}

Genome random_genome(const SearchSpaceConfig& cfg, std::uint64_t seed) {
    auto rng = make_engine(seed);
    return random_genome(cfg, rng);
}

Genome repair_genome(std::vector<int> raw, const SearchSpaceConfig& cfg, std::mt19937_64& rng) {
    if (static_cast<int>(raw.size()) != cfg.genome_length())
        throw std::invalid_argument("repair_genome: wrong vector length");
    const auto draw = [&rng](std::size_t n) {
        return std::uniform_int_distribution<int>(1, static_cast<int>(n))(rng);
    };
    raw[0] = clamp_index(raw[0], static_cast<int>(cfg.resolution_options.size()));
    for (std::size_t b = 0; b < cfg.blocks.size(); ++b) {
        const int base = cfg.block_offset(static_cast<int>(b));
        raw[base] = clamp_index(raw[base], static_cast<int>(cfg.depth_options.size()));
        const int depth = cfg.depth_options[raw[base] - 1];
        for (int l = 0; l < cfg.max_layers_per_block; ++l) {
            int& expand = raw[base + 1 + 2 * l];
            int& kernel = raw[base + 2 + 2 * l];
            if (l < depth) {
                if (expand < 1 || expand > static_cast<int>(cfg.expand_options.size()))
                    expand = draw(cfg.expand_options.size());
                if (kernel < 1 || kernel > static_cast<int>(cfg.kernel_options.size()))
                    kernel = draw(cfg.kernel_options.size());
            } else {
                expand = 0;
                kernel = 0;
            }
        }
    }
    return Genome(std::move(raw));
}

Genome repair_genome(std::vector<int> raw, const SearchSpaceConfig& cfg, std::uint64_t seed) {
    auto rng = make_engine(seed);
    return repair_genome(std::move(raw), cfg, rng);
}

std::pair<std::vector<int>, std::vector<int>> swap_segment(const std::vector<int>& a,
                                                           const std::vector<int>& b,
                                                           int cut1, int cut2) {
    if (a.size() != b.size()) throw std::invalid_argument("swap_segment: length mismatch");
    if (cut1 < 0 || cut2 > static_cast<int>(a.size()) || cut1 >= cut2)
        throw std::invalid_argument("swap_segment: require 0 <= cut1 < cut2 <= length");
    std::vector<int> c1 = a;
    std::vector<int> c2 = b;
    for (int i = cut1; i < cut2; ++i) std::swap(c1[i], c2[i]);
    return {std::move(c1), std::move(c2)};
}

std::pair<Genome, Genome> two_point_crossover(const Genome& p1, const Genome& p2,
                                              int cut1, int cut2,
                                              const SearchSpaceConfig& cfg, std::uint64_t seed) {
    auto [raw1, raw2] = swap_segment(p1.genes, p2.genes, cut1, cut2);
    return {repair_genome(std::move(raw1), cfg, derive_seed(seed, 1)),
            repair_genome(std::move(raw2), cfg, derive_seed(seed, 2))};
}

std::pair<Genome, Genome> two_point_crossover(const Genome& p1, const Genome& p2,
                                              const SearchSpaceConfig& cfg, std::mt19937_64& rng) {
    const int length = static_cast<int>(p1.genes.size());
    std::uniform_int_distribution<int> pos(0, length);
    int cut1 = pos(rng);
    int cut2 = pos(rng);
    while (cut1 == cut2) cut2 = pos(rng);
    if (cut1 > cut2) std::swap(cut1, cut2);
    return two_point_crossover(p1, p2, cut1, cut2, cfg, rng());
}

double polynomial_mutation_delta(double u, double eta) {
    if (u < 0.5) return std::pow(2.0 * u, 1.0 / (eta + 1.0)) - 1.0;
    return 1.0 - std::pow(2.0 * (1.0 - u), 1.0 / (eta + 1.0));
}

namespace {

std::vector<int> mutate_raw(const Genome& g, double eta_m, double per_gene_prob,
                            const SearchSpaceConfig& cfg, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<int> raw = g.genes;
    for (int pos = 0; pos < static_cast<int>(raw.size()); ++pos) {
        if (unit(rng) >= per_gene_prob) continue;
        const double low = 1.0;
        const double high = static_cast<double>(option_count_at(cfg, pos));
        const double delta = polynomial_mutation_delta(unit(rng), eta_m);
        const double mutated = static_cast<double>(raw[pos]) + delta * (high - low);
        raw[pos] = static_cast<int>(std::llround(mutated));
    }
    return raw;
}

}  // namespace

Genome polynomial_mutation(const Genome& g, double eta_m, double per_gene_prob,
                           const SearchSpaceConfig& cfg, std::mt19937_64& rng) {
    return repair_genome(mutate_raw(g, eta_m, per_gene_prob, cfg, rng), cfg, rng);
}

Genome polynomial_mutation(const Genome& g, double eta_m, double per_gene_prob,
                           const SearchSpaceConfig& cfg, std::uint64_t seed) {
    auto rng = make_engine(seed);
    return repair_genome(mutate_raw(g, eta_m, per_gene_prob, cfg, rng), cfg, derive_seed(seed, 1));
}

std::string genome_to_csv(const Genome& g) {
    std::string out;
    out.reserve(g.genes.size() * 3);
    for (std::size_t i = 0; i < g.genes.size(); ++i) {
        if (i) out.push_back(',');
        out += std::to_string(g.genes[i]);
    }
    return out;
}

Genome genome_from_csv(std::string_view line) {
    std::vector<int> genes;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p < end) {
        int value = 0;
        auto [next, ec] = std::from_chars(p, end, value);
        if (ec != std::errc() || value < 0)
            throw std::invalid_argument("genome_from_csv: expected non-negative integer near '" +
                                        std::string(p, std::min<std::size_t>(8, end - p)) + "'");
        genes.push_back(value);
        p = next;
        if (p < end) {
            if (*p != ',') throw std::invalid_argument("genome_from_csv: expected ','");
            ++p;
            if (p == end) throw std::invalid_argument("genome_from_csv: trailing comma");
        }
    }
    if (genes.empty()) throw std::invalid_argument("genome_from_csv: empty line");
    return Genome(std::move(genes));
}

std::uint64_t count_genomes(const SearchSpaceConfig& cfg) {
    const std::uint64_t per_layer =
        cfg.expand_options.size() * static_cast<std::uint64_t>(cfg.kernel_options.size());
    std::uint64_t per_block = 0;
    for (int d : cfg.depth_options) {
        std::uint64_t combos = 1;
        for (int l = 0; l < d; ++l) combos *= per_layer;
        per_block += combos;
    }
    std::uint64_t total = cfg.resolution_options.size();
    for (std::size_t b = 0; b < cfg.blocks.size(); ++b) total *= per_block;
    return total;
}

namespace {

void enumerate_blocks(const SearchSpaceConfig& cfg, std::size_t block, std::vector<int>& genes,
                      std::vector<Genome>& out) {
    if (block == cfg.blocks.size()) {
        out.emplace_back(genes);
        return;
    }
    const int base = cfg.block_offset(static_cast<int>(block));
    for (std::size_t di = 0; di < cfg.depth_options.size(); ++di) {
        genes[base] = static_cast<int>(di) + 1;
        const int depth = cfg.depth_options[di];
        // Iterate all (expand, kernel) combinations of the active slots.
        std::vector<int> slot(static_cast<std::size_t>(2 * depth), 1);
        while (true) {
            for (int l = 0; l < depth; ++l) {
                genes[base + 1 + 2 * l] = slot[2 * l];
                genes[base + 2 + 2 * l] = slot[2 * l + 1];
            }
            for (int l = depth; l < cfg.max_layers_per_block; ++l) {
                genes[base + 1 + 2 * l] = 0;
                genes[base + 2 + 2 * l] = 0;
            }
            enumerate_blocks(cfg, block + 1, genes, out);
            int i = static_cast<int>(slot.size()) - 1;
            for (; i >= 0; --i) {
                const int limit = (i % 2 == 0) ? static_cast<int>(cfg.expand_options.size())
                                               : static_cast<int>(cfg.kernel_options.size());
                if (slot[i] < limit) {
                    ++slot[i];
                    break;
                }
                slot[i] = 1;
            }
            if (i < 0) break;
        }
    }
}

}  // namespace

std::vector<Genome> enumerate_genomes(const SearchSpaceConfig& cfg, std::uint64_t limit) {
    const std::uint64_t total = count_genomes(cfg);
    if (total > limit)
        throw std::invalid_argument("enumerate_genomes: space holds " + std::to_string(total) +
                                    " genomes, above the limit of " + std::to_string(limit));
    std::vector<Genome> out;
    out.reserve(static_cast<std::size_t>(total));
    std::vector<int> genes(static_cast<std::size_t>(cfg.genome_length()), 0);
    for (std::size_t ri = 0; ri < cfg.resolution_options.size(); ++ri) {
        genes[0] = static_cast<int>(ri) + 1;
        enumerate_blocks(cfg, 0, genes, out);
    }
    return out;
}

}  // namespace moeabus
