// SPDX-License-Identifier: Apache-2.0
#include "moeabus/complexity.hpp"

#include <stdexcept>

namespace moeabus {

namespace {

constexpr double kMega = 1e6;
constexpr int kImageChannels = 3;
constexpr int kHeadExpandRatio = 6;
constexpr int kHeadFeatureRatio = 8;
constexpr int kHeadClasses = 1000;

}  // namespace

double inverted_bottleneck_madds(double h, double w, double in_channels, double expand,
                                 double kernel, double out_channels, double stride) {
    const double expanded = expand * in_channels;
    const double ho = h / stride;
    const double wo = w / stride;
    return h * w * in_channels * expanded           // expand 1x1
           + ho * wo * expanded * kernel * kernel   // depthwise k x k
           + ho * wo * expanded * out_channels;     // project 1x1
}

ComplexityReport compute_madds(const Genome& g, const SearchSpaceConfig& cfg) {
    if (!validate_genome(g, cfg))
        throw std::invalid_argument("compute_madds: genome violates space invariants");

    const double resolution = static_cast<double>(decoded_resolution(g, cfg));
    ComplexityReport report;
    report.per_block.reserve(cfg.blocks.size());

    const double stem_out = resolution / 2.0;
    report.stem_madds =
        stem_out * stem_out * kImageChannels * cfg.blocks.front().in_channels * 9.0 / kMega;

    for (std::size_t b = 0; b < cfg.blocks.size(); ++b) {
        const BlockSpec& block = cfg.blocks[b];
        const int base = cfg.block_offset(static_cast<int>(b));
        const int depth = cfg.depth_options[g.genes[base] - 1];
        double h = resolution / block.input_resolution_divisor;
        double block_madds = 0.0;
        for (int l = 0; l < depth; ++l) {
            const double expand = cfg.expand_options[g.genes[base + 1 + 2 * l] - 1];
            const double kernel = cfg.kernel_options[g.genes[base + 2 + 2 * l] - 1];
            const double in_ch = l == 0 ? block.in_channels : block.out_channels;
            const double stride = l == 0 ? block.stride : 1;
            block_madds += inverted_bottleneck_madds(h, h, in_ch, expand, kernel,
                                                     block.out_channels, stride);
            h /= stride;
        }
        report.per_block.push_back(block_madds / kMega);
    }

    const BlockSpec& last = cfg.blocks.back();
    const double final_spatial = resolution / (last.input_resolution_divisor * last.stride);
    const double c = last.out_channels;
    report.head_madds = (final_spatial * final_spatial * c * (kHeadExpandRatio * c) +
                         (kHeadExpandRatio * c) * (kHeadFeatureRatio * c) +
                         (kHeadFeatureRatio * c) * kHeadClasses) /
                        kMega;

    report.total_madds = report.stem_madds + report.head_madds;
    for (double m : report.per_block) report.total_madds += m;
    return report;
}

double total_madds(const Genome& g, const SearchSpaceConfig& cfg) {
    return compute_madds(g, cfg).total_madds;
}

}  // namespace moeabus
