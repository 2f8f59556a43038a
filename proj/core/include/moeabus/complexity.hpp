// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "moeabus/search_space.hpp"

namespace moeabus {

/// Multiply-accumulate cost of one forward pass, in millions (M).
struct ComplexityReport {
    double total_madds = 0.0;
    std::vector<double> per_block;
    double stem_madds = 0.0;
    double head_madds = 0.0;
};

/// Analytic MAdds of an inverted-bottleneck layer with input spatial size
/// H x W, input channels C, expansion e, kernel k, output channels C_out and
/// stride s:
///
///   H*W*C*(e*C) + (H/s)*(W/s)*(e*C)*k^2 + (H/s)*(W/s)*(e*C)*C_out
///
/// (expand 1x1 conv, depthwise k x k conv, project 1x1 conv). This formula is
/// the single source of truth for the F2 objective; squeeze-excitation and
/// activation costs are excluded.
double inverted_bottleneck_madds(double h, double w, double in_channels, double expand,
                                 double kernel, double out_channels, double stride);

/// Per-genome MAdds. The first layer of each block applies the block stride;
/// later layers run at stride 1 on out_channels. The fixed stem is a 3x3
/// stride-2 convolution from 3 image channels into the first block's input
/// channels. The fixed head is a 1x1 convolution from the last block's output
/// channels C to 6C at the final spatial size, a pooled linear layer 6C -> 8C
/// and a 1000-way classifier.
/// Throws std::invalid_argument when the genome is invalid for the space.
ComplexityReport compute_madds(const Genome& g, const SearchSpaceConfig& cfg);

/// Shorthand for compute_madds(...).total_madds.
double total_madds(const Genome& g, const SearchSpaceConfig& cfg);

}  // namespace moeabus
