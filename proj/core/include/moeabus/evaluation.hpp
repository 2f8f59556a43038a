// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "moeabus/complexity.hpp"
#include "moeabus/search_space.hpp"

namespace moeabus {

struct EvaluationResult {
    double error_rate = 0.0;  // in [0, 1]
    double madds = 0.0;       // millions
};

/// A genome together with its real evaluation; the common currency between
/// the surrogate, search and driver layers.
struct EvaluatedGenome {
    Genome genome;
    double error_rate = 0.0;
    double madds = 0.0;
};

/// Closed-form stand-in for real training: error decays exponentially in
/// MAdds from e_max toward e_min with time constant tau (M), plus a bounded
/// deterministic hash perturbation.
struct SyntheticOracleConfig {
    double e_min = 0.05;
    double e_max = 0.60;
    double tau_madds = 200.0;
    double noise_amp = 0.02;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Deterministic perturbation in [-1, 1). Mixing scheme, fixed by golden
/// vectors in the test suite: h = splitmix64(seed); then for every gene v,
/// h = splitmix64(h ^ v); finally map the top 53 bits onto [0,1) and scale
/// to [-1,1).
double genome_noise(const Genome& g, std::uint64_t seed);

/// clamp(e_min + (e_max - e_min) * exp(-madds / tau) + noise_amp * noise, 0, 1)
double synthetic_error(double madds, const SyntheticOracleConfig& oracle, double noise);

class Evaluator {
 public:
    virtual ~Evaluator() = default;
    /// Pure and safe for concurrent invocation; repeated calls on the same
    /// genome return bitwise-identical results.
    virtual EvaluationResult evaluate(const Genome& g) const = 0;
    virtual std::string name() const = 0;
};

class SyntheticEvaluator final : public Evaluator {
 public:
    SyntheticEvaluator(SearchSpaceConfig space, SyntheticOracleConfig oracle);
    EvaluationResult evaluate(const Genome& g) const override;
    std::string name() const override { return "synthetic"; }
    const SyntheticOracleConfig& oracle() const noexcept { return oracle_; }

 private:
    SearchSpaceConfig space_;
    SyntheticOracleConfig oracle_;
};

/// Exact-match replay of recorded evaluations. File format: header
/// "genome,error_rate,madds", then one row per record with the genome in its
/// textual form followed by the two values; UTF-8, LF line endings.
class TabularEvaluator final : public Evaluator {
 public:
    static TabularEvaluator load(const std::filesystem::path& path);
    static TabularEvaluator parse(std::istream& in);
    static TabularEvaluator from_records(std::span<const EvaluatedGenome> records);

    EvaluationResult evaluate(const Genome& g) const override;  // throws on a missing entry
    std::string name() const override { return "tabular"; }
    std::size_t size() const noexcept { return table_.size(); }

 private:
    std::unordered_map<Genome, EvaluationResult, GenomeHash> table_;
};

void save_table(std::span<const EvaluatedGenome> records, std::ostream& out);

/// Thread-safe call counter around another evaluator.
class CountingEvaluator final : public Evaluator {
 public:
    explicit CountingEvaluator(const Evaluator& inner) : inner_(inner) {}
    EvaluationResult evaluate(const Genome& g) const override {
        calls_.fetch_add(1, std::memory_order_relaxed);
        return inner_.evaluate(g);
    }
    std::string name() const override { return inner_.name(); }
    std::size_t calls() const noexcept { return calls_.load(std::memory_order_relaxed); }

 private:
    const Evaluator& inner_;
    mutable std::atomic<std::size_t> calls_{0};
};

/// Per-genome outcome of a batch; failures carry the evaluator's message.
struct BatchItem {
    bool ok = false;
    EvaluationResult result;
    std::string error;
};

/// Evaluates every genome, positionally aligned with the input. Individual
/// failures are reported per index without aborting the batch, and results do
/// not depend on max_parallel.
std::vector<BatchItem> evaluate_batch(std::span<const Genome> genomes, const Evaluator& evaluator,
                                      int max_parallel);

}  // namespace moeabus
