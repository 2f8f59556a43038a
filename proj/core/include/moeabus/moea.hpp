// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "moeabus/evaluation.hpp"
#include "moeabus/search_space.hpp"
#include "moeabus/surrogate.hpp"

namespace moeabus {

/// Both objectives are minimized. f1 is a strength score inside a sub-search
/// and a real error rate in archive analysis; f2 is always MAdds (M).
struct ObjectiveVector {
    double f1 = 0.0;
    double f2 = 0.0;
};

/// Pareto dominance under minimization: a <= b component-wise and a != b.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

struct FrontAssignment {
    std::vector<int> rank;                          // 1-based
    std::vector<double> crowding;
    std::vector<std::vector<std::size_t>> fronts;   // indices grouped by rank
};

/// Deb's fast non-dominated sort plus per-front crowding distances.
FrontAssignment non_dominated_sort(std::span<const ObjectiveVector> points);

/// NSGA-II density estimate over one front: per objective, sorted neighbors
/// contribute (next - prev) / (max - min); extremes are infinite; an
/// objective with zero range contributes nothing.
std::vector<double> crowding_distance(std::span<const ObjectiveVector> front);

/// Indices of the survivors: whole fronts by ascending rank, the boundary
/// front by descending crowding distance with ties broken by input order.
std::vector<std::size_t> survivor_selection(std::span<const ObjectiveVector> objectives,
                                            std::size_t target_size);

struct Individual {
    Genome genome;
    ObjectiveVector objectives;
};

struct VariationParams {
    double crossover_prob = 0.9;
    double mutation_eta = 20.0;
    double mutation_prob = -1.0;  // < 0 selects 1 / genome_length
};

struct SubSearchParams {
    int generations = 40;              // G
    std::size_t population_size = 60;  // evolving population size
    std::size_t elite_count = 4;       // k returned by diversity selection
    VariationParams variation;
    std::uint64_t seed = 0;
};

struct GenerationTraceRow {
    int generation = 0;
    std::size_t rank1_size = 0;
    double min_f2 = 0.0;
    double median_f2 = 0.0;
    std::size_t pair_predictions = 0;
};

struct SubSearchResult {
    std::vector<Individual> elites;  // f1 = predicted strength, f2 = MAdds
    bool elite_shortfall = false;    // fewer than elite_count novel candidates
    std::size_t pair_predictions = 0;
    std::vector<GenerationTraceRow> trace;
};

struct DiversitySelectionResult {
    std::vector<std::size_t> selected;
    bool shortfall = false;
};

/// Front-by-front max-min selection on the MAdds axis: within the current
/// front, repeatedly picks the candidate farthest (by minimum |MAdds delta|)
/// from the archive and the already picked elites. Candidates whose genome is
/// already archived (or already picked) are skipped. When fewer than k novel
/// candidates exist, returns them all with the shortfall flag set.
DiversitySelectionResult diversity_selection(std::span<const Individual> candidates,
                                             const FrontAssignment& fronts,
                                             std::span<const EvaluatedGenome> archive,
                                             std::size_t k);

/// Surrogate-only evolution (never touches an evaluator): seeds the working
/// population with the rank-1 subset of `population` under its real
/// objectives, then for G generations breeds offspring by binary-tournament
/// two-point crossover and polynomial mutation, re-predicts strengths jointly
/// over parents and offspring, computes offspring MAdds analytically, and
/// keeps the best population_size by rank and crowding. Ends with diversity
/// selection of elite_count individuals against the archive.
SubSearchResult sub_search(std::span<const EvaluatedGenome> population,
                           const Comparator& comparator, const GeneNormalizer& normalizer,
                           std::span<const EvaluatedGenome> archive,
                           const SearchSpaceConfig& space, const SubSearchParams& params);

}  // namespace moeabus
