// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "moeabus/evaluation.hpp"
#include "moeabus/search_space.hpp"

namespace moeabus {

/// Per-position min-max scaling of gene values onto [0,1], fitted over the
/// archive; a constant position maps to 0.
struct GeneNormalizer {
    std::vector<double> lo;
    std::vector<double> hi;

    static GeneNormalizer fit(std::span<const Genome> genomes);
    static GeneNormalizer fit(std::span<const EvaluatedGenome> records);

    [[nodiscard]] std::size_t dim() const noexcept { return lo.size(); }
    void apply(const Genome& g, double* out) const;
    [[nodiscard]] std::vector<double> operator()(const Genome& g) const;
};

/// Pair samples for the comparator: each feature is the concatenation of two
/// normalized genomes; label 0 means the first half has the lower error rate.
struct PairwiseDataset {
    std::size_t feature_dim = 0;
    std::vector<double> features;       // row-major, size() * feature_dim
    std::vector<std::uint8_t> labels;

    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
    [[nodiscard]] std::span<const double> feature(std::size_t i) const {
        return {features.data() + i * feature_dim, feature_dim};
    }
};

/// One sample per canonical pair (i, j), j > i, over the archive order; pairs
/// with exactly equal error rates are skipped. With augment_swapped each
/// sample is additionally emitted with its halves swapped and label flipped.
PairwiseDataset build_pairwise_dataset(std::span<const EvaluatedGenome> archive,
                                       const GeneNormalizer& normalizer, bool augment_swapped);

/// Shared by the comparator and the regression counterpart. The base rate
/// decays harmonically per epoch; 0.1 converges both losses within the
/// 200-epoch budget (squared loss takes far more step mass than hinge).
struct ComparatorHyperparams {
    double l2 = 1e-3;
    double learning_rate = 0.1;
    int epochs = 200;
};

/// Maximum-margin linear pair classifier fit by SGD on hinge loss with L2
/// regularization; the raw margin maps onto [0,1] through a logistic link.
/// Predictions are quantized to multiples of 2^-30 so that each pair's two
/// scores sum to exactly 1 in floating point.
struct Comparator {
    std::vector<double> weights;
    double bias = 0.0;
    std::vector<double> loss_trace;  // mean hinge loss per epoch
    double train_accuracy = 0.0;
    std::uint64_t seed = 0;

    [[nodiscard]] double margin(std::span<const double> feature) const;
    [[nodiscard]] double margin_pair(std::span<const double> first,
                                     std::span<const double> second) const;
    /// Pred in [0,1].
    [[nodiscard]] double predict(std::span<const double> feature) const;
    [[nodiscard]] double predict_pair(std::span<const double> first,
                                      std::span<const double> second) const;
};

/// Throws std::invalid_argument on an empty or single-class dataset.
/// Deterministic given the seed (per-epoch shuffles come from it).
Comparator train_comparator(const PairwiseDataset& dataset, const ComparatorHyperparams& params,
                            std::uint64_t seed);

/// Accumulated pairwise scores: for every canonical pair (i, j), j > i,
/// strength[i] += Pred and strength[j] += 1 - Pred. Higher strength predicts
/// a higher error rate; the sum over candidates equals the number of pairs
/// exactly. Throws with fewer than 2 candidates.
std::vector<double> predict_strengths(const Comparator& model, std::span<const Genome> candidates,
                                      const GeneNormalizer& normalizer);

/// Kendall tau-a: (concordant - discordant) / C(n,2); pairs tied in either
/// vector count as neither. Throws on mismatched lengths or n < 2.
double kendall_tau(std::span<const double> predicted, std::span<const double> truth);

/// Regression counterpart over single-genome features, trained with the same
/// SGD budget on squared loss; scores are predicted error rates (minimized).
struct RegressionModel {
    std::vector<double> weights;
    double bias = 0.0;
    std::vector<double> loss_trace;
    std::uint64_t seed = 0;

    [[nodiscard]] double predict(std::span<const double> feature) const;
};

RegressionModel train_regressor(std::span<const EvaluatedGenome> archive,
                                const GeneNormalizer& normalizer,
                                const ComparatorHyperparams& params, std::uint64_t seed);

std::vector<double> predict_scores(const RegressionModel& model,
                                   std::span<const Genome> candidates,
                                   const GeneNormalizer& normalizer);

}  // namespace moeabus
