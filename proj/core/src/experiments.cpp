// SPDX-License-Identifier: Apache-2.0
#include "moeabus/experiments.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "moeabus/metrics.hpp"
#include "moeabus/rand.hpp"

namespace moeabus {

namespace {

// Derivation streams for the two experiments.
constexpr std::uint64_t kSampleCompareStream = 101;
constexpr std::uint64_t kSurrogateEvalStream = 102;

struct PoolBounds {
    double error_lo = 0.0, error_hi = 0.0;
    double madds_lo = 0.0, madds_hi = 0.0;
};

PoolBounds evaluated_bounds(const SamplePool& pool, const Evaluator& evaluator) {
    PoolBounds b{1e300, -1e300, 1e300, -1e300};
    for (const auto& m : pool.members) {
        const auto r = evaluator.evaluate(m.genome);
        b.error_lo = std::min(b.error_lo, r.error_rate);
        b.error_hi = std::max(b.error_hi, r.error_rate);
        b.madds_lo = std::min(b.madds_lo, m.madds);
        b.madds_hi = std::max(b.madds_hi, m.madds);
    }
    return b;
}

std::vector<EvaluatedGenome> evaluate_all(const std::vector<Genome>& genomes,
                                          const Evaluator& evaluator, int max_parallel) {
    std::vector<EvaluatedGenome> out;
    out.reserve(genomes.size());
    const auto items = evaluate_batch(genomes, evaluator, max_parallel);
    for (std::size_t i = 0; i < genomes.size(); ++i) {
        if (!items[i].ok)
            throw std::runtime_error("evaluation failed for genome " + genome_to_csv(genomes[i]) +
                                     ": " + items[i].error);
        out.push_back({genomes[i], items[i].result.error_rate, items[i].result.madds});
    }
    return out;
}

}  // namespace

std::vector<SampleCompareRow> run_sample_compare(const ExperimentConfig& cfg,
                                                 const std::vector<std::string>& methods,
                                                 int seeds) {
    const RunConfig& run = cfg.run;
    for (const auto& m : methods)
        if (m != "uniform") sample_method_from_string(m);  // validates the name

    const auto evaluator = make_evaluator(run.evaluator, run.space, run.seed);
    const std::size_t n = run.population1_size + run.population2_size;

    std::vector<SampleCompareRow> rows;
    rows.reserve(methods.size() * static_cast<std::size_t>(seeds));
    for (int s = 0; s < seeds; ++s) {
        const std::uint64_t seed_s = derive_seed(run.seed, kSampleCompareStream, s);
        const auto pool = build_pool(run.space, run.pool_size, derive_seed(seed_s, 1));
        const auto partition = partition_regions(pool, run.regions);
        const auto bounds = evaluated_bounds(pool, *evaluator);

        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            const std::string& method = methods[mi];
            std::vector<Genome> genomes;
            if (method == "uniform") {
                auto [p1, p2] = uniform_split_populations(
                    pool, partition, run.population1_size, run.population2_size,
                    run.extreme_regions, derive_seed(seed_s, 2));
                genomes = std::move(p1);
                genomes.insert(genomes.end(), p2.begin(), p2.end());
            } else {
                genomes = baseline_sample(pool, run.space, sample_method_from_string(method), n,
                                          derive_seed(seed_s, 3 + mi), cfg.baseline_strata);
            }
            const auto evaluated = evaluate_all(genomes, *evaluator, run.max_parallel);

            std::vector<Point2> cloud;
            std::vector<Point2> objectives;
            cloud.reserve(evaluated.size());
            objectives.reserve(evaluated.size());
            for (const auto& e : evaluated) {
                cloud.push_back({1.0 - e.error_rate, e.madds});
                objectives.push_back(
                    {(e.error_rate - bounds.error_lo) / (bounds.error_hi - bounds.error_lo),
                     (e.madds - bounds.madds_lo) / (bounds.madds_hi - bounds.madds_lo)});
            }
            const double entropy =
                distribution_entropy(cloud, run.histogram_bins,
                                     {1.0 - bounds.error_hi, bounds.madds_lo},
                                     {1.0 - bounds.error_lo, bounds.madds_hi});
            const double hv = hypervolume_2d(objectives, {1.05, 1.05});
            rows.push_back({method, s, entropy, hv});
        }
    }
    return rows;
}

std::vector<SurrogateEvalRow> run_surrogate_eval(const ExperimentConfig& cfg) {
    const RunConfig& run = cfg.run;
    const auto evaluator = make_evaluator(run.evaluator, run.space, run.seed);
    const auto train_n = static_cast<std::size_t>(cfg.surrogate_train_size);
    const auto test_n = static_cast<std::size_t>(cfg.surrogate_test_size);

    std::vector<SurrogateEvalRow> rows;
    for (int s = 0; s < cfg.surrogate_seeds; ++s) {
        const std::uint64_t seed_s = derive_seed(run.seed, kSurrogateEvalStream, s);
        const auto pool = build_pool(run.space, run.pool_size, derive_seed(seed_s, 1));

        // Each sampling method draws its whole train+test cohort, which is
        // then shuffled and split; sampling therefore shapes both sides, the
        // way the initial archive shapes search and surrogate alike.
        const auto random_cohort = [&]() {
            auto rng = make_engine(derive_seed(seed_s, 2));
            std::vector<std::size_t> order(pool.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::shuffle(order.begin(), order.end(), rng);
            GenomeSet taken;
            std::vector<Genome> cohort;
            for (std::size_t idx : order) {
                if (cohort.size() == train_n + test_n) break;
                const Genome& g = pool.members[idx].genome;
                if (taken.insert(g).second) cohort.push_back(g);
            }
            return cohort;
        };
        const auto uniform_cohort = [&]() {
            const auto partition = partition_regions(pool, run.regions);
            std::vector<std::size_t> all_regions(static_cast<std::size_t>(run.regions));
            std::iota(all_regions.begin(), all_regions.end(), std::size_t{0});
            GenomeSet taken;
            auto rng = make_engine(derive_seed(seed_s, 3));
            const auto idx = region_quota_sample(pool, partition, all_regions,
                                                 train_n + test_n, rng, taken);
            std::vector<Genome> cohort;
            cohort.reserve(idx.size());
            for (std::size_t i : idx) cohort.push_back(pool.members[i].genome);
            std::shuffle(cohort.begin(), cohort.end(), rng);
            return cohort;
        };

        const auto score = [&](std::vector<Genome> cohort, const std::string& sampling) {
            if (cohort.size() < train_n + test_n)
                throw std::invalid_argument(
                    "surrogate eval: pool yields too few distinct genomes for the split");
            const std::vector<Genome> train(cohort.begin(), cohort.begin() + train_n);
            const std::vector<Genome> test(cohort.begin() + train_n, cohort.end());

            const auto train_records = evaluate_all(train, *evaluator, run.max_parallel);
            const auto test_records = evaluate_all(test, *evaluator, run.max_parallel);
            std::vector<double> truth;
            truth.reserve(test_records.size());
            for (const auto& r : test_records) truth.push_back(r.error_rate);
            const auto normalizer =
                GeneNormalizer::fit(std::span<const EvaluatedGenome>(train_records));

            const auto dataset =
                build_pairwise_dataset(train_records, normalizer, run.augment_swapped_pairs);
            const auto comparator =
                train_comparator(dataset, run.comparator, derive_seed(seed_s, 4));
            const auto strengths = predict_strengths(comparator, test, normalizer);
            rows.push_back({"pairwise", sampling, s, kendall_tau(strengths, truth)});

            const auto regressor = train_regressor(train_records, normalizer, run.comparator,
                                                   derive_seed(seed_s, 5));
            const auto scores = predict_scores(regressor, test, normalizer);
            rows.push_back({"regression", sampling, s, kendall_tau(scores, truth)});
        };
        score(random_cohort(), "random");
        score(uniform_cohort(), "uniform");
    }
    return rows;
}

}  // namespace moeabus
