// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "moeabus/evaluation.hpp"
#include "moeabus/moea.hpp"
#include "moeabus/sampling.hpp"
#include "moeabus/search_space.hpp"
#include "moeabus/surrogate.hpp"

namespace moeabus {

enum class Provenance { init_p1, init_p2, elite_p1, elite_p2 };

const char* to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

struct ArchiveRecord {
    Genome genome;
    double error_rate = 0.0;
    double madds = 0.0;
    int iteration_found = 0;
    Provenance source = Provenance::init_p1;
};

enum class MigrationMode { one_way, mutual };

const char* to_string(MigrationMode m);
MigrationMode migration_mode_from_string(const std::string& s);

struct EvaluatorSpec {
    enum class Kind { synthetic, tabular };
    Kind kind = Kind::synthetic;
    SyntheticOracleConfig oracle;            // synthetic backend
    std::optional<std::uint64_t> oracle_seed;  // unset: derived from the run seed
    std::string table_path;                  // tabular backend
};

struct RunConfig {
    SearchSpaceConfig space = default_space();
    std::size_t population1_size = 25;  // n1
    std::size_t population2_size = 75;  // n2
    int iterations = 25;                // T
    int generations = 40;               // G per sub-search
    std::size_t sub_population_size = 60;
    std::size_t elites1 = 4;  // k1
    std::size_t elites2 = 6;  // k2
    std::size_t pool_size = 5000;
    int regions = 8;          // R
    int extreme_regions = 2;  // E
    MigrationMode migration = MigrationMode::one_way;
    EvaluatorSpec evaluator;
    std::uint64_t seed = 0;
    VariationParams variation;
    ComparatorHyperparams comparator;
    bool augment_swapped_pairs = true;
    int max_parallel = 1;
    int histogram_bins = 10;

    void validate() const;
    /// (n1 + n2) + T * (k1 + k2)
    [[nodiscard]] std::size_t evaluation_budget() const noexcept {
        return population1_size + population2_size +
               static_cast<std::size_t>(iterations) * (elites1 + elites2);
    }
};

/// Seed streams drawn off the master seed; iteration-scoped streams also fold
/// in the iteration counter.
namespace seed_stream {
inline constexpr std::uint64_t pool = 1;
inline constexpr std::uint64_t split = 2;
inline constexpr std::uint64_t comparator = 3;
inline constexpr std::uint64_t sub_search_p1 = 4;
inline constexpr std::uint64_t sub_search_p2 = 5;
inline constexpr std::uint64_t oracle = 6;
}  // namespace seed_stream

std::unique_ptr<Evaluator> make_evaluator(const EvaluatorSpec& spec,
                                          const SearchSpaceConfig& space,
                                          std::uint64_t run_seed);

struct IterationTraceRow {
    int iteration = 0;  // 0 is the evaluated initial populations
    std::size_t archive_size = 0;
    std::size_t rank1_size = 0;
    double hypervolume = 0.0;  // fixed per-run normalization, reference (1.05, 1.05)
    double entropy = 0.0;      // (accuracy, MAdds) histogram entropy of the archive
    std::size_t p1_size = 0;
    std::size_t p2_size = 0;
    std::size_t real_evaluations = 0;
};

struct RunResult {
    std::vector<ArchiveRecord> archive;
    std::vector<std::size_t> pareto_indices;  // rank-1 of the archive by (error_rate, MAdds)
    std::vector<IterationTraceRow> trace;
    std::size_t real_evaluations = 0;
    std::size_t elite_shortfalls = 0;
    /// True if a genome first archived as elite_p2 ever entered population 1.
    /// Structurally impossible under one-way migration; expected under mutual.
    bool p1_received_p2_elite = false;
    std::vector<std::string> warnings;
};

/// End-to-end search: pool, uniform split, real evaluation of both initial
/// populations, then `iterations` rounds of comparator training, dual
/// surrogate-only sub-searches, real evaluation of the elites, and migration.
/// Fully deterministic given the config (two runs produce identical results).
RunResult run_moea_bus(const RunConfig& cfg);

/// One migration step. one_way: P1' = P1 u P1*, P2' = P2 u P1* u P2*.
/// mutual: both unions include both elite sets. Duplicates (by genome) are
/// never added twice.
std::pair<std::vector<EvaluatedGenome>, std::vector<EvaluatedGenome>> migrate(
    std::span<const EvaluatedGenome> p1, std::span<const EvaluatedGenome> p2,
    std::span<const EvaluatedGenome> p1_star, std::span<const EvaluatedGenome> p2_star,
    MigrationMode mode);

// --- run directory artifacts -------------------------------------------------

void write_archive_csv(std::ostream& out, std::span<const ArchiveRecord> archive);
void write_archive_csv(const std::filesystem::path& path, std::span<const ArchiveRecord> archive);
std::vector<ArchiveRecord> read_archive_csv(std::istream& in);
std::vector<ArchiveRecord> read_archive_csv(const std::filesystem::path& path);

void write_pareto_json(const std::filesystem::path& path, std::span<const ArchiveRecord> archive,
                       std::span<const std::size_t> pareto_indices);
std::vector<ArchiveRecord> read_pareto_json(const std::filesystem::path& path);

void write_trace_csv(std::ostream& out, std::span<const IterationTraceRow> trace);
void write_trace_csv(const std::filesystem::path& path, std::span<const IterationTraceRow> trace);

// --- config document ---------------------------------------------------------

/// Raised on a malformed config document; `field` names the offending key.
class ConfigError : public std::runtime_error {
 public:
    ConfigError(std::string field_name, const std::string& message)
        : std::runtime_error(message), field_(std::move(field_name)) {}
    const std::string& field() const noexcept { return field_; }

 private:
    std::string field_;
};

/// The full key-value document shared by every CLI command; search-specific
/// keys mirror RunConfig, the rest parameterize the sampling and surrogate
/// experiments.
struct ExperimentConfig {
    RunConfig run;
    int surrogate_train_size = 300;
    int surrogate_test_size = 1000;
    int surrogate_seeds = 10;
    int baseline_strata = 10;
};

/// Parses the JSON text; `iterations` and `seed` are required, everything
/// else falls back to defaults. Unknown or ill-typed keys raise ConfigError.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Resolved echo of the configuration (all defaults applied, sub-seeds
/// materialized), suitable for config.json.
std::string experiment_config_json(const ExperimentConfig& cfg);
void write_config_json(const std::filesystem::path& path, const ExperimentConfig& cfg);

}  // namespace moeabus
