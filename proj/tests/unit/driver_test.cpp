// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <stdexcept>

#include <doctest.h>

#include "moeabus/driver.hpp"

using namespace moeabus;

namespace {

RunConfig small_tiny_run(std::uint64_t seed) {
    RunConfig cfg;
    cfg.space = tiny_space();
    cfg.population1_size = 10;
    cfg.population2_size = 20;
    cfg.iterations = 2;
    cfg.generations = 3;
    cfg.sub_population_size = 10;
    cfg.elites1 = 2;
    cfg.elites2 = 3;
    cfg.pool_size = 500;
    cfg.regions = 6;
    cfg.extreme_regions = 1;
    cfg.seed = seed;
    return cfg;
}

std::vector<EvaluatedGenome> make_individuals(std::initializer_list<int> ids) {
    std::vector<EvaluatedGenome> out;
    for (int id : ids) out.push_back({Genome({id}), 0.1 * id, 100.0 * id});
    return out;
}

std::set<Genome> genome_set(const std::vector<EvaluatedGenome>& v) {
    std::set<Genome> s;
    for (const auto& e : v) s.insert(e.genome);
    return s;
}

}  // namespace

TEST_SUITE("driver") {

TEST_CASE("one-way migration shares elites asymmetrically") {
    const auto p1 = make_individuals({1, 2});
    const auto p2 = make_individuals({3, 4});
    const auto p1_star = make_individuals({5});
    const auto p2_star = make_individuals({6});

    const auto [n1, n2] = migrate(p1, p2, p1_star, p2_star, MigrationMode::one_way);
    CHECK(genome_set(n1) == std::set<Genome>{Genome({1}), Genome({2}), Genome({5})});
    CHECK(genome_set(n2) ==
          std::set<Genome>{Genome({3}), Genome({4}), Genome({5}), Genome({6})});
}

TEST_CASE("mutual migration shares both elite sets") {
    const auto p1 = make_individuals({1});
    const auto p2 = make_individuals({2});
    const auto p1_star = make_individuals({5});
    const auto p2_star = make_individuals({6});
    const auto [n1, n2] = migrate(p1, p2, p1_star, p2_star, MigrationMode::mutual);
    CHECK(genome_set(n1) == std::set<Genome>{Genome({1}), Genome({5}), Genome({6})});
    CHECK(genome_set(n2) == std::set<Genome>{Genome({2}), Genome({5}), Genome({6})});
}

TEST_CASE("migration never duplicates a genome") {
    const auto p1 = make_individuals({1, 5});
    const auto p2 = make_individuals({2});
    const auto p1_star = make_individuals({5});
    const auto p2_star = make_individuals({5, 6});
    const auto [n1, n2] = migrate(p1, p2, p1_star, p2_star, MigrationMode::one_way);
    CHECK(n1.size() == 2);
    CHECK(n2.size() == 3);  // 2, 5, 6
}

TEST_CASE("budget accounting on a small tiny-space run") {
    const auto cfg = small_tiny_run(123);
    const auto result = run_moea_bus(cfg);
    CHECK(result.real_evaluations <= cfg.evaluation_budget());
    if (result.elite_shortfalls == 0) CHECK(result.real_evaluations == cfg.evaluation_budget());
    CHECK(result.archive.size() == result.real_evaluations);  // synthetic never fails
    CHECK_FALSE(result.p1_received_p2_elite);

    // Archive genomes are unique and their MAdds match the analytic value.
    std::set<Genome> seen;
    for (const auto& r : result.archive) {
        CHECK(seen.insert(r.genome).second);
        CHECK(r.madds == doctest::Approx(total_madds(r.genome, cfg.space)).epsilon(1e-12));
    }
}

TEST_CASE("zero iterations archive only the initial populations") {
    auto cfg = small_tiny_run(5);
    cfg.iterations = 0;
    const auto result = run_moea_bus(cfg);
    CHECK(result.real_evaluations == cfg.population1_size + cfg.population2_size);
    for (const auto& r : result.archive) {
        CHECK(r.iteration_found == 0);
        CHECK((r.source == Provenance::init_p1 || r.source == Provenance::init_p2));
    }
}

TEST_CASE("runs are deterministic") {
    const auto cfg = small_tiny_run(77);
    const auto a = run_moea_bus(cfg);
    const auto b = run_moea_bus(cfg);
    REQUIRE(a.archive.size() == b.archive.size());
    for (std::size_t i = 0; i < a.archive.size(); ++i) {
        CHECK(a.archive[i].genome == b.archive[i].genome);
        CHECK(a.archive[i].error_rate == b.archive[i].error_rate);
        CHECK(a.archive[i].madds == b.archive[i].madds);
        CHECK(a.archive[i].iteration_found == b.archive[i].iteration_found);
        CHECK(a.archive[i].source == b.archive[i].source);
    }
    CHECK(a.pareto_indices == b.pareto_indices);
    std::stringstream ta, tb;
    write_trace_csv(ta, a.trace);
    write_trace_csv(tb, b.trace);
    CHECK(ta.str() == tb.str());
}

TEST_CASE("trace hypervolume never decreases") {
    const auto result = run_moea_bus(small_tiny_run(31));
    REQUIRE(result.trace.size() >= 2);
    for (std::size_t i = 1; i < result.trace.size(); ++i) {
        CHECK(result.trace[i].hypervolume >= result.trace[i - 1].hypervolume - 1e-12);
        CHECK(result.trace[i].archive_size >= result.trace[i - 1].archive_size);
    }
}

TEST_CASE("pareto indices point at the archive's rank-1 records") {
    const auto result = run_moea_bus(small_tiny_run(9));
    REQUIRE(!result.pareto_indices.empty());
    for (std::size_t i : result.pareto_indices) {
        const auto& candidate = result.archive[i];
        for (const auto& other : result.archive) {
            const bool dominated = other.error_rate <= candidate.error_rate &&
                                   other.madds <= candidate.madds &&
                                   (other.error_rate < candidate.error_rate ||
                                    other.madds < candidate.madds);
            CHECK_FALSE(dominated);
        }
    }
}

TEST_CASE("archive csv round-trips") {
    const auto result = run_moea_bus(small_tiny_run(13));
    std::stringstream buffer;
    write_archive_csv(buffer, result.archive);
    const auto loaded = read_archive_csv(buffer);
    REQUIRE(loaded.size() == result.archive.size());
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        CHECK(loaded[i].genome == result.archive[i].genome);
        CHECK(loaded[i].error_rate == result.archive[i].error_rate);
        CHECK(loaded[i].madds == result.archive[i].madds);
        CHECK(loaded[i].iteration_found == result.archive[i].iteration_found);
        CHECK(loaded[i].source == result.archive[i].source);
    }
}

TEST_CASE("malformed archive rows are reported with their line number") {
    std::stringstream buffer("genome,error_rate,madds,iteration,source\n1,2,0.5,100,0,init_p1\nbroken\n");
    CHECK_THROWS_WITH_AS(read_archive_csv(buffer), doctest::Contains("line 3"),
                         std::invalid_argument);
}

TEST_CASE("config documents parse with field-level errors") {
    CHECK_THROWS_WITH_AS(parse_experiment_config("{\"seed\": 1}"),
                         doctest::Contains("iterations"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_experiment_config("{\"iterations\": 2}"),
                         doctest::Contains("seed"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_experiment_config("{\"seed\":1,\"iterations\":2,\"bogus\":3}"),
                         doctest::Contains("bogus"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_experiment_config("{\"seed\":1,\"iterations\":\"x\"}"),
                         doctest::Contains("iterations"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config("not json"), ConfigError);

    const auto cfg = parse_experiment_config(
        "{\"seed\": 7, \"iterations\": 3, \"space\": \"tiny\","
        " \"evaluator\": {\"type\": \"synthetic\", \"noise_amp\": 0.0}}");
    CHECK(cfg.run.seed == 7);
    CHECK(cfg.run.iterations == 3);
    CHECK(cfg.run.space.blocks.size() == 2);
    CHECK(cfg.run.evaluator.oracle.noise_amp == 0.0);
    CHECK(cfg.run.population1_size == 25);  // defaults intact
}

TEST_CASE("config echo is stable and re-parseable") {
    auto cfg = parse_experiment_config("{\"seed\": 7, \"iterations\": 3, \"space\": \"tiny\"}");
    const auto text = experiment_config_json(cfg);
    const auto reparsed = parse_experiment_config(text);
    CHECK(experiment_config_json(reparsed) == text);
    CHECK(reparsed.run.space.resolution_options == cfg.run.space.resolution_options);
}

TEST_CASE("tabular backend failures surface as warnings, not crashes") {
    // A table that misses most of the space: every unlisted elite/init genome
    // fails to evaluate and is excluded from the archive.
    const auto space = tiny_space();
    const auto genomes = enumerate_genomes(space);
    std::vector<EvaluatedGenome> records;
    for (std::size_t i = 0; i < genomes.size(); i += 2)
        records.push_back({genomes[i], 0.2 + 0.001 * static_cast<double>(i), 50.0 + i});

    namespace fs = std::filesystem;
    const auto table_path = fs::temp_directory_path() / "moeabus_half_table.csv";
    {
        std::ofstream out(table_path);
        save_table(records, out);
    }
    auto cfg = small_tiny_run(3);
    cfg.iterations = 1;
    cfg.evaluator.kind = EvaluatorSpec::Kind::tabular;
    cfg.evaluator.table_path = table_path.string();
    const auto result = run_moea_bus(cfg);
    CHECK(result.archive.size() < result.real_evaluations);
    CHECK(!result.warnings.empty());
    for (const auto& r : result.archive) CHECK(r.error_rate >= 0.2);
    fs::remove(table_path);
}

}  // TEST_SUITE
