// SPDX-License-Identifier: Apache-2.0
#include "moeabus/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace moeabus {

namespace {

struct AxisRange {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double normalize(double v) const { return hi > lo ? (v - lo) / (hi - lo) : 0.0; }
};

}  // namespace

std::vector<Point2> minmax_normalize(std::span<const Point2> points) {
    AxisRange rx, ry;
    for (const Point2& p : points) {
        rx.include(p.x);
        ry.include(p.y);
    }
    std::vector<Point2> out;
    out.reserve(points.size());
    for (const Point2& p : points) out.push_back({rx.normalize(p.x), ry.normalize(p.y)});
    return out;
}

namespace {

double histogram_entropy(std::span<const Point2> normalized, int bins) {
    const auto cell = [bins](double v) {
        v = std::clamp(v, 0.0, 1.0);
        return std::min(static_cast<int>(v * bins), bins - 1);
    };
    std::vector<std::size_t> counts(static_cast<std::size_t>(bins) * bins, 0);
    for (const Point2& p : normalized)
        ++counts[cell(p.x) * static_cast<std::size_t>(bins) + cell(p.y)];

    const double total = static_cast<double>(normalized.size());
    double entropy = 0.0;
    for (std::size_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / total;
        entropy -= p * std::log2(p);
    }
    return entropy;
}

}  // namespace

double distribution_entropy(std::span<const Point2> points, int bins) {
    if (points.empty()) throw std::invalid_argument("distribution_entropy: empty point set");
    if (bins < 1) throw std::invalid_argument("distribution_entropy: bins must be >= 1");
    return histogram_entropy(minmax_normalize(points), bins);
}

double distribution_entropy(std::span<const Point2> points, int bins, Point2 lo, Point2 hi) {
    if (points.empty()) throw std::invalid_argument("distribution_entropy: empty point set");
    if (bins < 1) throw std::invalid_argument("distribution_entropy: bins must be >= 1");
    std::vector<Point2> normalized;
    normalized.reserve(points.size());
    for (const Point2& p : points)
        normalized.push_back({hi.x > lo.x ? (p.x - lo.x) / (hi.x - lo.x) : 0.0,
                              hi.y > lo.y ? (p.y - lo.y) / (hi.y - lo.y) : 0.0});
    return histogram_entropy(normalized, bins);
}

double hypervolume_2d(std::span<const Point2> points, Point2 reference) {
    std::vector<Point2> inside;
    inside.reserve(points.size());
    for (const Point2& p : points)
        if (p.x < reference.x && p.y < reference.y) inside.push_back(p);
    if (inside.empty()) return 0.0;

    // Ascending x; for equal x only the smallest y can contribute.
    std::sort(inside.begin(), inside.end(), [](const Point2& a, const Point2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    std::vector<Point2> front;
    for (const Point2& p : inside) {
        if (!front.empty() && p.y >= front.back().y) continue;  // dominated
        front.push_back(p);
    }

    double area = 0.0;
    for (std::size_t i = 0; i < front.size(); ++i) {
        const double next_x = i + 1 < front.size() ? front[i + 1].x : reference.x;
        area += (next_x - front[i].x) * (reference.y - front[i].y);
    }
    return area;
}

}  // namespace moeabus
