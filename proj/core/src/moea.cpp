// SPDX-License-Identifier: Apache-2.0
#include "moeabus/moea.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "moeabus/complexity.hpp"
#include "moeabus/rand.hpp"

namespace moeabus {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    return a.f1 <= b.f1 && a.f2 <= b.f2 && (a.f1 < b.f1 || a.f2 < b.f2);
}

std::vector<double> crowding_distance(std::span<const ObjectiveVector> front) {
    const std::size_t n = front.size();
    std::vector<double> distance(n, 0.0);
    if (n <= 2) {
        std::fill(distance.begin(), distance.end(), kInf);
        return distance;
    }
    std::vector<std::size_t> order(n);
    for (int objective = 0; objective < 2; ++objective) {
        const auto value = [&](std::size_t i) {
            return objective == 0 ? front[i].f1 : front[i].f2;
        };
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return value(a) < value(b) || (value(a) == value(b) && a < b);
        });
        distance[order.front()] = kInf;
        distance[order.back()] = kInf;
        const double range = value(order.back()) - value(order.front());
        if (range <= 0.0) continue;  // zero-range objective contributes nothing
        for (std::size_t k = 1; k + 1 < n; ++k) {
            if (distance[order[k]] == kInf) continue;
            distance[order[k]] += (value(order[k + 1]) - value(order[k - 1])) / range;
        }
    }
    return distance;
}

FrontAssignment non_dominated_sort(std::span<const ObjectiveVector> points) {
    const std::size_t n = points.size();
    if (n == 0) throw std::invalid_argument("non_dominated_sort: empty point set");

    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<int> domination_count(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dominates(points[i], points[j])) {
                dominated[i].push_back(j);
                ++domination_count[j];
            } else if (dominates(points[j], points[i])) {
                dominated[j].push_back(i);
                ++domination_count[i];
            }
        }
    }

    FrontAssignment fa;
    fa.rank.assign(n, 0);
    fa.crowding.assign(n, 0.0);
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i)
        if (domination_count[i] == 0) current.push_back(i);

    int rank = 1;
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t i : current) {
            fa.rank[i] = rank;
            for (std::size_t j : dominated[i])
                if (--domination_count[j] == 0) next.push_back(j);
        }
        std::sort(next.begin(), next.end());
        fa.fronts.push_back(std::move(current));
        current = std::move(next);
        ++rank;
    }

    for (const auto& front : fa.fronts) {
        std::vector<ObjectiveVector> values;
        values.reserve(front.size());
        for (std::size_t i : front) values.push_back(points[i]);
        const auto cd = crowding_distance(values);
        for (std::size_t k = 0; k < front.size(); ++k) fa.crowding[front[k]] = cd[k];
    }
    return fa;
}

std::vector<std::size_t> survivor_selection(std::span<const ObjectiveVector> objectives,
                                            std::size_t target_size) {
    if (target_size > objectives.size())
        throw std::invalid_argument("survivor_selection: target exceeds the union size");

    const auto fa = non_dominated_sort(objectives);
    std::vector<std::size_t> selected;
    selected.reserve(target_size);
    for (const auto& front : fa.fronts) {
        if (selected.size() + front.size() <= target_size) {
            selected.insert(selected.end(), front.begin(), front.end());
            if (selected.size() == target_size) break;
            continue;
        }
        std::vector<std::size_t> boundary = front;
        std::stable_sort(boundary.begin(), boundary.end(), [&fa](std::size_t a, std::size_t b) {
            return fa.crowding[a] > fa.crowding[b];
        });
        boundary.resize(target_size - selected.size());
        selected.insert(selected.end(), boundary.begin(), boundary.end());
        break;
    }
    return selected;
}

DiversitySelectionResult diversity_selection(std::span<const Individual> candidates,
                                             const FrontAssignment& fronts,
                                             std::span<const EvaluatedGenome> archive,
                                             std::size_t k) {
    GenomeSet known;
    std::vector<double> reference_madds;
    reference_madds.reserve(archive.size() + k);
    for (const auto& a : archive) {
        known.insert(a.genome);
        reference_madds.push_back(a.madds);
    }

    const auto min_distance = [&reference_madds](double madds) {
        double best = kInf;
        for (double m : reference_madds) best = std::min(best, std::abs(madds - m));
        return best;
    };

    DiversitySelectionResult result;
    for (const auto& front : fronts.fronts) {
        if (result.selected.size() == k) break;
        std::vector<std::size_t> novel;
        for (std::size_t i : front)
            if (!known.contains(candidates[i].genome)) novel.push_back(i);
        while (result.selected.size() < k && !novel.empty()) {
            std::size_t best_pos = 0;
            double best_dist = -1.0;
            for (std::size_t p = 0; p < novel.size(); ++p) {
                const double d = min_distance(candidates[novel[p]].objectives.f2);
                if (d > best_dist) {  // ties keep the earliest candidate
                    best_dist = d;
                    best_pos = p;
                }
            }
            const std::size_t chosen = novel[best_pos];
            result.selected.push_back(chosen);
            known.insert(candidates[chosen].genome);
            reference_madds.push_back(candidates[chosen].objectives.f2);
            novel.erase(novel.begin() + static_cast<std::ptrdiff_t>(best_pos));
            // A duplicate of the chosen genome elsewhere in the front is no
            // longer novel.
            std::erase_if(novel, [&](std::size_t i) {
                return candidates[i].genome == candidates[chosen].genome;
            });
        }
    }
    result.shortfall = result.selected.size() < k;
    return result;
}

namespace {

std::size_t tournament(const FrontAssignment& fa, std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    const std::size_t a = pick(rng);
    const std::size_t b = pick(rng);
    if (fa.rank[a] != fa.rank[b]) return fa.rank[a] < fa.rank[b] ? a : b;
    if (fa.crowding[a] != fa.crowding[b]) return fa.crowding[a] > fa.crowding[b] ? a : b;
    return std::min(a, b);
}

std::vector<double> joint_strengths(const Comparator& comparator,
                                    const GeneNormalizer& normalizer,
                                    const std::vector<Individual>& pop,
                                    std::size_t& pair_counter) {
    std::vector<Genome> genomes;
    genomes.reserve(pop.size());
    for (const auto& ind : pop) genomes.push_back(ind.genome);
    pair_counter += pop.size() * (pop.size() - 1) / 2;
    return predict_strengths(comparator, genomes, normalizer);
}

}  // namespace

SubSearchResult sub_search(std::span<const EvaluatedGenome> population,
                           const Comparator& comparator, const GeneNormalizer& normalizer,
                           std::span<const EvaluatedGenome> archive,
                           const SearchSpaceConfig& space, const SubSearchParams& params) {
    if (population.empty()) throw std::invalid_argument("sub_search: empty population");

    // Initial working set: rank-1 of the real objectives (error_rate, MAdds).
    std::vector<ObjectiveVector> real_objectives;
    real_objectives.reserve(population.size());
    for (const auto& r : population) real_objectives.push_back({r.error_rate, r.madds});
    const auto initial_fronts = non_dominated_sort(real_objectives);

    std::vector<Individual> pop;
    pop.reserve(params.population_size * 2);
    for (std::size_t i : initial_fronts.fronts.front())
        pop.push_back({population[i].genome, {0.0, population[i].madds}});

    SubSearchResult result;
    const double mutation_prob = params.variation.mutation_prob >= 0.0
                                     ? params.variation.mutation_prob
                                     : 1.0 / static_cast<double>(space.genome_length());
    auto rng = make_engine(params.seed);

    if (pop.size() >= 2) {
        const auto strengths = joint_strengths(comparator, normalizer, pop, result.pair_predictions);
        for (std::size_t i = 0; i < pop.size(); ++i) pop[i].objectives.f1 = strengths[i];
    }

    for (int generation = 0; generation < params.generations; ++generation) {
        std::vector<ObjectiveVector> objectives;
        objectives.reserve(pop.size());
        for (const auto& ind : pop) objectives.push_back(ind.objectives);
        const auto fa = non_dominated_sort(objectives);

        // Offspring to exactly population_size via tournament + variation.
        std::vector<Individual> offspring;
        offspring.reserve(params.population_size);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        while (offspring.size() < params.population_size) {
            const Genome& parent1 = pop[tournament(fa, rng, pop.size())].genome;
            const Genome& parent2 = pop[tournament(fa, rng, pop.size())].genome;
            Genome child1 = parent1;
            Genome child2 = parent2;
            if (unit(rng) < params.variation.crossover_prob)
                std::tie(child1, child2) = two_point_crossover(parent1, parent2, space, rng);
            for (Genome* child : {&child1, &child2}) {
                if (offspring.size() == params.population_size) break;
                Genome mutated = polynomial_mutation(*child, params.variation.mutation_eta,
                                                     mutation_prob, space, rng);
                const double madds = total_madds(mutated, space);
                offspring.push_back({std::move(mutated), {0.0, madds}});
            }
        }

        pop.insert(pop.end(), std::make_move_iterator(offspring.begin()),
                   std::make_move_iterator(offspring.end()));

        // Strengths are re-predicted jointly over parents and offspring, so
        // parent F1 values shift as the candidate set grows.
        const auto strengths = joint_strengths(comparator, normalizer, pop, result.pair_predictions);
        for (std::size_t i = 0; i < pop.size(); ++i) pop[i].objectives.f1 = strengths[i];

        std::vector<ObjectiveVector> union_objectives;
        union_objectives.reserve(pop.size());
        for (const auto& ind : pop) union_objectives.push_back(ind.objectives);
        const auto survivors = survivor_selection(union_objectives, params.population_size);

        std::vector<Individual> next;
        next.reserve(survivors.size());
        for (std::size_t i : survivors) next.push_back(std::move(pop[i]));
        pop = std::move(next);

        std::vector<double> f2;
        f2.reserve(pop.size());
        for (const auto& ind : pop) f2.push_back(ind.objectives.f2);
        std::sort(f2.begin(), f2.end());
        std::vector<ObjectiveVector> selected_objectives;
        selected_objectives.reserve(pop.size());
        for (const auto& ind : pop) selected_objectives.push_back(ind.objectives);
        result.trace.push_back({generation, non_dominated_sort(selected_objectives).fronts.front().size(),
                                f2.front(), f2[f2.size() / 2], result.pair_predictions});
    }

    std::vector<ObjectiveVector> final_objectives;
    final_objectives.reserve(pop.size());
    for (const auto& ind : pop) final_objectives.push_back(ind.objectives);
    const auto final_fronts = non_dominated_sort(final_objectives);
    const auto chosen = diversity_selection(pop, final_fronts, archive, params.elite_count);

    result.elites.reserve(chosen.selected.size());
    for (std::size_t i : chosen.selected) result.elites.push_back(pop[i]);
    result.elite_shortfall = chosen.shortfall;
    return result;
}

}  // namespace moeabus
