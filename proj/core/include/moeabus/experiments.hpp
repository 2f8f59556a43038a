// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "moeabus/driver.hpp"

namespace moeabus {

/// Entropy/HV of one sampled initial population. Both metrics are anchored to
/// the candidate pool's objective bounds so every method lands on identical
/// histogram cells and the same normalized hypervolume frame.
struct SampleCompareRow {
    std::string method;
    int seed = 0;
    double entropy = 0.0;
    double hypervolume = 0.0;
};

/// Runs each method x seed on a fresh pool per seed (pools are shared across
/// methods within a seed). `methods` entries: uniform | random | stratified |
/// latin_hypercube. Throws on unknown method names.
std::vector<SampleCompareRow> run_sample_compare(const ExperimentConfig& cfg,
                                                 const std::vector<std::string>& methods,
                                                 int seeds);

/// Kendall tau of one surrogate configuration on one seed.
struct SurrogateEvalRow {
    std::string model;     // "pairwise" | "regression"
    std::string sampling;  // "random" | "uniform"
    int seed = 0;
    double ktau = 0.0;
};

/// The {regression, pairwise} x {random, uniform} grid: per seed, a disjoint
/// train/test split is drawn from a fresh pool (test uniformly at random;
/// train by the named sampling rule), models are fit on the train records and
/// scored by Kendall tau against the true test errors.
std::vector<SurrogateEvalRow> run_surrogate_eval(const ExperimentConfig& cfg);

}  // namespace moeabus
