// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

namespace moeabus {

/// One point of a 2-D analysis set. Axis semantics are caller-defined
/// (accuracy/MAdds for entropy, two minimized objectives for hypervolume).
struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Shannon entropy (base 2) of the B x B histogram of the points after
/// per-axis min-max normalization over the input set itself. An axis with
/// zero range maps every point to cell 0 on that axis; 0*log(0) counts as 0.
/// Throws std::invalid_argument on an empty set or bins < 1.
double distribution_entropy(std::span<const Point2> points, int bins);

/// Same histogram entropy with explicit normalization bounds, for comparing
/// different point sets on identical cells (values outside the bounds clamp
/// into the edge cells). A degenerate axis maps to cell 0.
double distribution_entropy(std::span<const Point2> points, int bins, Point2 lo, Point2 hi);

/// Exact dominated area of a minimization point set relative to `reference`,
/// via the sorted sweep over the non-dominated subset. Points with any
/// coordinate at or beyond the reference contribute nothing.
double hypervolume_2d(std::span<const Point2> points, Point2 reference);

/// Per-axis min-max rescaling onto [0,1]; a zero-range axis maps to 0.
std::vector<Point2> minmax_normalize(std::span<const Point2> points);

}  // namespace moeabus
