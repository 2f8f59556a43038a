// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "moeabus/complexity.hpp"
#include "moeabus/metrics.hpp"
#include "moeabus/moea.hpp"
#include "moeabus/rand.hpp"
#include "moeabus/search_space.hpp"
#include "moeabus/surrogate.hpp"

using namespace moeabus;

namespace {

std::vector<ObjectiveVector> random_points(std::size_t n, std::uint64_t seed) {
    auto rng = make_engine(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<ObjectiveVector> points(n);
    for (auto& p : points) p = {unit(rng), unit(rng)};
    return points;
}

void BM_ComputeMadds(benchmark::State& state) {
    const auto cfg = default_space();
    auto rng = make_engine(1);
    const auto g = random_genome(cfg, rng);
    for (auto _ : state) benchmark::DoNotOptimize(compute_madds(g, cfg));
}
BENCHMARK(BM_ComputeMadds);

void BM_RandomGenome(benchmark::State& state) {
    const auto cfg = default_space();
    auto rng = make_engine(2);
    for (auto _ : state) benchmark::DoNotOptimize(random_genome(cfg, rng));
}
BENCHMARK(BM_RandomGenome);

void BM_NonDominatedSort(benchmark::State& state) {
    const auto points = random_points(static_cast<std::size_t>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(non_dominated_sort(points));
}
BENCHMARK(BM_NonDominatedSort)->Arg(60)->Arg(120)->Arg(200);

void BM_Hypervolume2D(benchmark::State& state) {
    std::vector<Point2> points;
    for (const auto& p : random_points(static_cast<std::size_t>(state.range(0)), 4))
        points.push_back({p.f1, p.f2});
    for (auto _ : state) benchmark::DoNotOptimize(hypervolume_2d(points, {1.05, 1.05}));
}
BENCHMARK(BM_Hypervolume2D)->Arg(100)->Arg(1000);

void BM_PredictStrengths(benchmark::State& state) {
    const auto cfg = default_space();
    auto rng = make_engine(5);
    std::vector<Genome> candidates;
    for (int i = 0; i < state.range(0); ++i) candidates.push_back(random_genome(cfg, rng));
    const auto normalizer = GeneNormalizer::fit(candidates);
    Comparator model;
    model.weights.assign(2 * normalizer.dim(), 0.01);
    for (auto _ : state)
        benchmark::DoNotOptimize(predict_strengths(model, candidates, normalizer));
}
BENCHMARK(BM_PredictStrengths)->Arg(60)->Arg(120);

void BM_TrainComparator(benchmark::State& state) {
    const auto cfg = default_space();
    const SyntheticEvaluator evaluator(cfg, SyntheticOracleConfig{});
    auto rng = make_engine(6);
    std::vector<EvaluatedGenome> archive;
    for (int i = 0; i < state.range(0); ++i) {
        const auto g = random_genome(cfg, rng);
        const auto r = evaluator.evaluate(g);
        archive.push_back({g, r.error_rate, r.madds});
    }
    const auto normalizer = GeneNormalizer::fit(std::span<const EvaluatedGenome>(archive));
    const auto dataset = build_pairwise_dataset(archive, normalizer, true);
    ComparatorHyperparams params;
    params.epochs = 10;
    for (auto _ : state) benchmark::DoNotOptimize(train_comparator(dataset, params, 1));
}
BENCHMARK(BM_TrainComparator)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
