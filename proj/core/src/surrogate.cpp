// SPDX-License-Identifier: Apache-2.0
#include "moeabus/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "moeabus/rand.hpp"

namespace moeabus {

namespace {

constexpr double kPredQuantum = 0x1.0p-30;

double quantize_pred(double p) {
    // Multiples of 2^-30 keep p and 1-p exactly representable, so strength
    // accumulation conserves one unit per pair with no rounding.
    return std::round(p * (1.0 / kPredQuantum)) * kPredQuantum;
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

GeneNormalizer GeneNormalizer::fit(std::span<const Genome> genomes) {
    if (genomes.empty()) throw std::invalid_argument("GeneNormalizer: empty genome set");
    const std::size_t dim = genomes.front().genes.size();
    GeneNormalizer norm;
    norm.lo.assign(dim, std::numeric_limits<double>::infinity());
    norm.hi.assign(dim, -std::numeric_limits<double>::infinity());
    for (const Genome& g : genomes) {
        if (g.genes.size() != dim) throw std::invalid_argument("GeneNormalizer: ragged genomes");
        for (std::size_t i = 0; i < dim; ++i) {
            const double v = static_cast<double>(g.genes[i]);
            norm.lo[i] = std::min(norm.lo[i], v);
            norm.hi[i] = std::max(norm.hi[i], v);
        }
    }
    return norm;
}

GeneNormalizer GeneNormalizer::fit(std::span<const EvaluatedGenome> records) {
    std::vector<Genome> genomes;
    genomes.reserve(records.size());
    for (const auto& r : records) genomes.push_back(r.genome);
    return fit(genomes);
}

void GeneNormalizer::apply(const Genome& g, double* out) const {
    if (g.genes.size() != dim()) throw std::invalid_argument("GeneNormalizer: dimension mismatch");
    for (std::size_t i = 0; i < dim(); ++i) {
        const double v = static_cast<double>(g.genes[i]);
        out[i] = hi[i] > lo[i] ? (v - lo[i]) / (hi[i] - lo[i]) : 0.0;
    }
}

std::vector<double> GeneNormalizer::operator()(const Genome& g) const {
    std::vector<double> out(dim());
    apply(g, out.data());
    return out;
}

PairwiseDataset build_pairwise_dataset(std::span<const EvaluatedGenome> archive,
                                       const GeneNormalizer& normalizer, bool augment_swapped) {
    if (archive.size() < 2)
        throw std::invalid_argument("build_pairwise_dataset: need at least 2 archive records");

    const std::size_t gdim = normalizer.dim();
    std::vector<double> norm(archive.size() * gdim);
    for (std::size_t i = 0; i < archive.size(); ++i)
        normalizer.apply(archive[i].genome, norm.data() + i * gdim);

    PairwiseDataset ds;
    ds.feature_dim = 2 * gdim;
    const auto push = [&](std::size_t i, std::size_t j, std::uint8_t label) {
        const double* a = norm.data() + i * gdim;
        const double* b = norm.data() + j * gdim;
        ds.features.insert(ds.features.end(), a, a + gdim);
        ds.features.insert(ds.features.end(), b, b + gdim);
        ds.labels.push_back(label);
    };
    for (std::size_t i = 0; i + 1 < archive.size(); ++i) {
        for (std::size_t j = i + 1; j < archive.size(); ++j) {
            if (archive[i].error_rate == archive[j].error_rate) continue;  // tie: skip
            const std::uint8_t label = archive[i].error_rate < archive[j].error_rate ? 0 : 1;
            push(i, j, label);
            if (augment_swapped) push(j, i, static_cast<std::uint8_t>(1 - label));
        }
    }
    return ds;
}

double Comparator::margin(std::span<const double> feature) const {
    return dot(weights.data(), feature.data(), weights.size()) + bias;
}

double Comparator::margin_pair(std::span<const double> first,
                               std::span<const double> second) const {
    const std::size_t half = weights.size() / 2;
    return dot(weights.data(), first.data(), half) +
           dot(weights.data() + half, second.data(), half) + bias;
}

double Comparator::predict(std::span<const double> feature) const {
    return quantize_pred(logistic(margin(feature)));
}

double Comparator::predict_pair(std::span<const double> first,
                                std::span<const double> second) const {
    return quantize_pred(logistic(margin_pair(first, second)));
}

Comparator train_comparator(const PairwiseDataset& dataset, const ComparatorHyperparams& params,
                            std::uint64_t seed) {
    if (dataset.size() == 0) throw std::invalid_argument("train_comparator: empty dataset");
    const bool has0 = std::find(dataset.labels.begin(), dataset.labels.end(), 0) != dataset.labels.end();
    const bool has1 = std::find(dataset.labels.begin(), dataset.labels.end(), 1) != dataset.labels.end();
    if (!has0 || !has1)
        throw std::invalid_argument("train_comparator: dataset holds a single class");

    Comparator model;
    model.seed = seed;
    model.weights.assign(dataset.feature_dim, 0.0);
    model.loss_trace.reserve(static_cast<std::size_t>(params.epochs));

    auto rng = make_engine(seed);
    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    double* w = model.weights.data();
    const std::size_t dim = dataset.feature_dim;

    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        // Harmonic decay of the base rate; hinge subgradients do not shrink
        // near the optimum, so a fixed rate would stall at a noise floor.
        const double lr = params.learning_rate / (1.0 + static_cast<double>(epoch));
        const double decay = 1.0 - 2.0 * lr * params.l2;
        std::shuffle(order.begin(), order.end(), rng);
        double loss_sum = 0.0;
        for (const std::size_t s : order) {
            const double* x = dataset.features.data() + s * dim;
            const double y = dataset.labels[s] ? 1.0 : -1.0;
            const double m = y * (dot(w, x, dim) + model.bias);
            if (m < 1.0) loss_sum += 1.0 - m;
            for (std::size_t i = 0; i < dim; ++i) w[i] *= decay;
            if (m < 1.0) {
                const double step = lr * y;
                for (std::size_t i = 0; i < dim; ++i) w[i] += step * x[i];
                model.bias += step;
            }
        }
        model.loss_trace.push_back(loss_sum / static_cast<double>(dataset.size()));
    }

    std::size_t correct = 0;
    for (std::size_t s = 0; s < dataset.size(); ++s) {
        const double m = dot(w, dataset.features.data() + s * dim, dim) + model.bias;
        if ((m > 0.0) == (dataset.labels[s] != 0)) ++correct;
    }
    model.train_accuracy = static_cast<double>(correct) / static_cast<double>(dataset.size());
    return model;
}

std::vector<double> predict_strengths(const Comparator& model, std::span<const Genome> candidates,
                                      const GeneNormalizer& normalizer) {
    if (candidates.size() < 2)
        throw std::invalid_argument("predict_strengths: need at least 2 candidates");

    const std::size_t gdim = normalizer.dim();
    std::vector<double> norm(candidates.size() * gdim);
    for (std::size_t i = 0; i < candidates.size(); ++i)
        normalizer.apply(candidates[i], norm.data() + i * gdim);

    std::vector<double> strengths(candidates.size(), 0.0);
    for (std::size_t i = 0; i + 1 < candidates.size(); ++i) {
        const std::span<const double> xi{norm.data() + i * gdim, gdim};
        for (std::size_t j = i + 1; j < candidates.size(); ++j) {
            const std::span<const double> xj{norm.data() + j * gdim, gdim};
            const double pred = model.predict_pair(xi, xj);
            strengths[i] += pred;
            strengths[j] += 1.0 - pred;
        }
    }
    return strengths;
}

double kendall_tau(std::span<const double> predicted, std::span<const double> truth) {
    if (predicted.size() != truth.size())
        throw std::invalid_argument("kendall_tau: length mismatch");
    const std::size_t n = predicted.size();
    if (n < 2) throw std::invalid_argument("kendall_tau: need at least 2 entries");

    std::int64_t concordant = 0;
    std::int64_t discordant = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dp = predicted[i] - predicted[j];
            const double dt = truth[i] - truth[j];
            if (dp == 0.0 || dt == 0.0) continue;  // ties count as neither
            if ((dp > 0.0) == (dt > 0.0))
                ++concordant;
            else
                ++discordant;
        }
    }
    const double total = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    return static_cast<double>(concordant - discordant) / total;
}

double RegressionModel::predict(std::span<const double> feature) const {
    return dot(weights.data(), feature.data(), weights.size()) + bias;
}

RegressionModel train_regressor(std::span<const EvaluatedGenome> archive,
                                const GeneNormalizer& normalizer,
                                const ComparatorHyperparams& params, std::uint64_t seed) {
    if (archive.empty()) throw std::invalid_argument("train_regressor: empty archive");

    const std::size_t dim = normalizer.dim();
    std::vector<double> features(archive.size() * dim);
    for (std::size_t i = 0; i < archive.size(); ++i)
        normalizer.apply(archive[i].genome, features.data() + i * dim);

    RegressionModel model;
    model.seed = seed;
    model.weights.assign(dim, 0.0);
    model.loss_trace.reserve(static_cast<std::size_t>(params.epochs));

    auto rng = make_engine(seed);
    std::vector<std::size_t> order(archive.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    double* w = model.weights.data();

    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        // Same schedule as the comparator so the two backends share a budget.
        const double lr = params.learning_rate / (1.0 + static_cast<double>(epoch));
        const double decay = 1.0 - 2.0 * lr * params.l2;
        std::shuffle(order.begin(), order.end(), rng);
        double loss_sum = 0.0;
        for (const std::size_t s : order) {
            const double* x = features.data() + s * dim;
            const double residual = dot(w, x, dim) + model.bias - archive[s].error_rate;
            loss_sum += residual * residual;
            for (std::size_t i = 0; i < dim; ++i) w[i] = w[i] * decay - lr * residual * x[i];
            model.bias -= lr * residual;
        }
        model.loss_trace.push_back(loss_sum / static_cast<double>(archive.size()));
    }
    return model;
}

std::vector<double> predict_scores(const RegressionModel& model,
                                   std::span<const Genome> candidates,
                                   const GeneNormalizer& normalizer) {
    std::vector<double> scores;
    scores.reserve(candidates.size());
    std::vector<double> feature(normalizer.dim());
    for (const Genome& g : candidates) {
        normalizer.apply(g, feature.data());
        scores.push_back(model.predict(feature));
    }
    return scores;
}

}  // namespace moeabus
