// SPDX-License-Identifier: Apache-2.0
#include "moeabus/driver.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "moeabus/metrics.hpp"
#include "moeabus/rand.hpp"

namespace moeabus {

using nlohmann::json;

const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::init_p1: return "init_p1";
        case Provenance::init_p2: return "init_p2";
        case Provenance::elite_p1: return "elite_p1";
        case Provenance::elite_p2: return "elite_p2";
    }
    return "?";
}

Provenance provenance_from_string(const std::string& s) {
    if (s == "init_p1") return Provenance::init_p1;
    if (s == "init_p2") return Provenance::init_p2;
    if (s == "elite_p1") return Provenance::elite_p1;
    if (s == "elite_p2") return Provenance::elite_p2;
    throw std::invalid_argument("unknown provenance '" + s + "'");
}

const char* to_string(MigrationMode m) {
    return m == MigrationMode::one_way ? "one_way" : "mutual";
}

MigrationMode migration_mode_from_string(const std::string& s) {
    if (s == "one_way") return MigrationMode::one_way;
    if (s == "mutual") return MigrationMode::mutual;
    throw std::invalid_argument("unknown migration mode '" + s + "'");
}

void RunConfig::validate() const {
    space.validate();
    if (population1_size == 0 || population2_size == 0)
        throw std::invalid_argument("population sizes must be positive");
    if (iterations < 0) throw std::invalid_argument("iterations must be >= 0");
    if (generations < 0) throw std::invalid_argument("generations must be >= 0");
    if (sub_population_size < 2)
        throw std::invalid_argument("sub_population_size must be at least 2");
    if (elites1 == 0 || elites2 == 0) throw std::invalid_argument("elite counts must be positive");
    if (pool_size < population1_size + population2_size)
        throw std::invalid_argument("pool_size must cover both initial populations");
    if (regions < 2) throw std::invalid_argument("regions must be >= 2");
    if (extreme_regions < 1) throw std::invalid_argument("extreme_regions must be >= 1");
    if (regions <= 2 * extreme_regions)
        throw std::invalid_argument("need regions > 2 * extreme_regions");
    if (max_parallel < 1) throw std::invalid_argument("max_parallel must be >= 1");
    if (histogram_bins < 1) throw std::invalid_argument("histogram_bins must be >= 1");
    if (evaluator.kind == EvaluatorSpec::Kind::synthetic) evaluator.oracle.validate();
}

std::unique_ptr<Evaluator> make_evaluator(const EvaluatorSpec& spec,
                                          const SearchSpaceConfig& space,
                                          std::uint64_t run_seed) {
    if (spec.kind == EvaluatorSpec::Kind::synthetic) {
        SyntheticOracleConfig oracle = spec.oracle;
        oracle.seed = spec.oracle_seed.value_or(derive_seed(run_seed, seed_stream::oracle));
        return std::make_unique<SyntheticEvaluator>(space, oracle);
    }
    return std::make_unique<TabularEvaluator>(TabularEvaluator::load(spec.table_path));
}

std::pair<std::vector<EvaluatedGenome>, std::vector<EvaluatedGenome>> migrate(
    std::span<const EvaluatedGenome> p1, std::span<const EvaluatedGenome> p2,
    std::span<const EvaluatedGenome> p1_star, std::span<const EvaluatedGenome> p2_star,
    MigrationMode mode) {
    const auto extend = [](std::vector<EvaluatedGenome> base,
                           std::initializer_list<std::span<const EvaluatedGenome>> additions) {
        GenomeSet present;
        for (const auto& e : base) present.insert(e.genome);
        for (const auto& group : additions)
            for (const auto& e : group)
                if (present.insert(e.genome).second) base.push_back(e);
        return base;
    };
    std::vector<EvaluatedGenome> base1(p1.begin(), p1.end());
    std::vector<EvaluatedGenome> base2(p2.begin(), p2.end());
    if (mode == MigrationMode::one_way)
        return {extend(std::move(base1), {p1_star}), extend(std::move(base2), {p1_star, p2_star})};
    return {extend(std::move(base1), {p1_star, p2_star}),
            extend(std::move(base2), {p1_star, p2_star})};
}

namespace {

std::vector<EvaluatedGenome> archive_view(std::span<const ArchiveRecord> archive) {
    std::vector<EvaluatedGenome> view;
    view.reserve(archive.size());
    for (const auto& r : archive) view.push_back({r.genome, r.error_rate, r.madds});
    return view;
}

}  // namespace

RunResult run_moea_bus(const RunConfig& cfg) {
    cfg.validate();
    const auto evaluator_impl = make_evaluator(cfg.evaluator, cfg.space, cfg.seed);
    CountingEvaluator evaluator(*evaluator_impl);

    RunResult result;
    GenomeSet archived;
    GenomeSet p2_only_elites;
    std::unordered_map<Genome, std::size_t, GenomeHash> archive_index;

    const SamplePool pool =
        build_pool(cfg.space, cfg.pool_size, derive_seed(cfg.seed, seed_stream::pool));
    const RegionPartition partition = partition_regions(pool, cfg.regions);
    const double pool_lo = partition.boundaries.front();
    const double pool_hi = partition.boundaries.back();

    auto [p1_genomes, p2_genomes] = uniform_split_populations(
        pool, partition, cfg.population1_size, cfg.population2_size, cfg.extreme_regions,
        derive_seed(cfg.seed, seed_stream::split));

    // Evaluates novel genomes, archives the successes and appends them to the
    // population lists keyed by provenance.
    const auto evaluate_and_archive = [&](const std::vector<Genome>& genomes,
                                          const std::vector<Provenance>& sources, int iteration) {
        std::vector<EvaluatedGenome> evaluated(genomes.size());
        const auto outcomes = evaluate_batch(genomes, evaluator, cfg.max_parallel);
        for (std::size_t i = 0; i < genomes.size(); ++i) {
            if (!outcomes[i].ok) {
                result.warnings.push_back("evaluation failed for genome " +
                                          genome_to_csv(genomes[i]) + ": " + outcomes[i].error);
                continue;
            }
            archive_index.emplace(genomes[i], result.archive.size());
            result.archive.push_back({genomes[i], outcomes[i].result.error_rate,
                                      outcomes[i].result.madds, iteration, sources[i]});
            archived.insert(genomes[i]);
            if (sources[i] == Provenance::elite_p2) p2_only_elites.insert(genomes[i]);
            evaluated[i] = {genomes[i], outcomes[i].result.error_rate, outcomes[i].result.madds};
        }
        return std::pair(std::move(evaluated), outcomes);
    };

    std::vector<EvaluatedGenome> p1;
    std::vector<EvaluatedGenome> p2;
    const auto seed_population = [&](std::vector<Genome>& genomes, Provenance source,
                                     std::vector<EvaluatedGenome>& population) {
        std::vector<Provenance> sources(genomes.size(), source);
        auto [evaluated, outcomes] = evaluate_and_archive(genomes, sources, 0);
        for (std::size_t i = 0; i < evaluated.size(); ++i)
            if (outcomes[i].ok) population.push_back(std::move(evaluated[i]));
    };
    seed_population(p1_genomes, Provenance::init_p1, p1);
    seed_population(p2_genomes, Provenance::init_p2, p2);

    const auto push_trace = [&](int iteration) {
        std::vector<ObjectiveVector> objectives;
        objectives.reserve(result.archive.size());
        for (const auto& r : result.archive) objectives.push_back({r.error_rate, r.madds});
        const auto fa = non_dominated_sort(objectives);

        // HV under a run-fixed normalization (error is already in [0,1]; MAdds
        // scaled by the pool range) so the trace is monotone as the archive grows.
        std::vector<Point2> front;
        front.reserve(fa.fronts.front().size());
        for (std::size_t i : fa.fronts.front())
            front.push_back({result.archive[i].error_rate,
                             (result.archive[i].madds - pool_lo) / (pool_hi - pool_lo)});
        const double hv = hypervolume_2d(front, {1.05, 1.05});

        std::vector<Point2> cloud;
        cloud.reserve(result.archive.size());
        for (const auto& r : result.archive) cloud.push_back({1.0 - r.error_rate, r.madds});
        const double entropy = distribution_entropy(cloud, cfg.histogram_bins);

        result.trace.push_back({iteration, result.archive.size(), fa.fronts.front().size(), hv,
                                entropy, p1.size(), p2.size(), evaluator.calls()});
    };
    push_trace(0);

    for (int t = 0; t < cfg.iterations; ++t) {
        const auto snapshot = archive_view(result.archive);
        const auto normalizer = GeneNormalizer::fit(std::span<const EvaluatedGenome>(snapshot));
        const auto dataset =
            build_pairwise_dataset(snapshot, normalizer, cfg.augment_swapped_pairs);
        const auto comparator = train_comparator(
            dataset, cfg.comparator, derive_seed(cfg.seed, seed_stream::comparator, t));

        SubSearchParams sub1{cfg.generations, cfg.sub_population_size, cfg.elites1, cfg.variation,
                             derive_seed(cfg.seed, seed_stream::sub_search_p1, t)};
        SubSearchParams sub2{cfg.generations, cfg.sub_population_size, cfg.elites2, cfg.variation,
                             derive_seed(cfg.seed, seed_stream::sub_search_p2, t)};
        const auto r1 = sub_search(p1, comparator, normalizer, snapshot, cfg.space, sub1);
        const auto r2 = sub_search(p2, comparator, normalizer, snapshot, cfg.space, sub2);
        for (const auto* r : {&r1, &r2}) {
            if (r->elite_shortfall) {
                ++result.elite_shortfalls;
                result.warnings.push_back("iteration " + std::to_string(t + 1) +
                                          ": sub-search returned fewer elites than requested");
            }
        }

        // Real-evaluate elites not seen before; duplicates neither re-evaluate
        // nor consume budget, and no replacement is drawn.
        std::vector<Genome> novel;
        std::vector<Provenance> novel_sources;
        GenomeSet batch_seen;
        const auto collect = [&](const std::vector<Individual>& elites, Provenance source) {
            for (const auto& e : elites) {
                if (archived.contains(e.genome) || !batch_seen.insert(e.genome).second) continue;
                novel.push_back(e.genome);
                novel_sources.push_back(source);
            }
        };
        collect(r1.elites, Provenance::elite_p1);
        collect(r2.elites, Provenance::elite_p2);
        evaluate_and_archive(novel, novel_sources, t + 1);

        // Migration uses the evaluated elite sets; an elite that failed to
        // evaluate is dropped, an already-archived one reuses its record.
        const auto evaluated_elites = [&](const std::vector<Individual>& elites) {
            std::vector<EvaluatedGenome> out;
            out.reserve(elites.size());
            for (const auto& e : elites) {
                const auto it = archive_index.find(e.genome);
                if (it == archive_index.end()) continue;
                const ArchiveRecord& rec = result.archive[it->second];
                out.push_back({rec.genome, rec.error_rate, rec.madds});
            }
            return out;
        };
        std::tie(p1, p2) =
            migrate(p1, p2, evaluated_elites(r1.elites), evaluated_elites(r2.elites), cfg.migration);

        for (const auto& member : p1) {
            if (p2_only_elites.contains(member.genome)) {
                result.p1_received_p2_elite = true;
                break;
            }
        }
        push_trace(t + 1);
    }

    std::vector<ObjectiveVector> final_objectives;
    final_objectives.reserve(result.archive.size());
    for (const auto& r : result.archive) final_objectives.push_back({r.error_rate, r.madds});
    result.pareto_indices = non_dominated_sort(final_objectives).fronts.front();
    result.real_evaluations = evaluator.calls();
    return result;
}

// --- run directory artifacts -------------------------------------------------

namespace {

void write_double(std::ostream& out, double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, end - buf);
}

double parse_double(const std::string& text, std::size_t begin, std::size_t end,
                    std::size_t line_no, const char* what) {
    double value = 0.0;
    auto [p, ec] = std::from_chars(text.data() + begin, text.data() + end, value);
    if (ec != std::errc() || p != text.data() + end)
        throw std::invalid_argument("archive line " + std::to_string(line_no) + ": bad " + what);
    return value;
}

constexpr const char* kArchiveHeader = "genome,error_rate,madds,iteration,source";

}  // namespace

void write_archive_csv(std::ostream& out, std::span<const ArchiveRecord> archive) {
    out << kArchiveHeader << '\n';
    for (const auto& r : archive) {
        out << genome_to_csv(r.genome) << ',';
        write_double(out, r.error_rate);
        out << ',';
        write_double(out, r.madds);
        out << ',' << r.iteration_found << ',' << to_string(r.source) << '\n';
    }
}

void write_archive_csv(const std::filesystem::path& path, std::span<const ArchiveRecord> archive) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    write_archive_csv(out, archive);
}

std::vector<ArchiveRecord> read_archive_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kArchiveHeader)
        throw std::invalid_argument(std::string("archive line 1: expected header '") +
                                    kArchiveHeader + "'");
    std::vector<ArchiveRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        // genome fields, then error_rate, madds, iteration, source.
        std::size_t cuts[4];
        std::size_t pos = line.size();
        for (int k = 3; k >= 0; --k) {
            pos = line.rfind(',', pos - 1);
            if (pos == std::string::npos || pos == 0)
                throw std::invalid_argument("archive line " + std::to_string(line_no) +
                                            ": expected " + kArchiveHeader);
            cuts[k] = pos;
        }
        ArchiveRecord rec;
        rec.genome = genome_from_csv(std::string_view(line).substr(0, cuts[0]));
        rec.error_rate = parse_double(line, cuts[0] + 1, cuts[1], line_no, "error_rate");
        rec.madds = parse_double(line, cuts[1] + 1, cuts[2], line_no, "madds");
        const auto iter_text = line.substr(cuts[2] + 1, cuts[3] - cuts[2] - 1);
        auto [p, ec] = std::from_chars(iter_text.data(), iter_text.data() + iter_text.size(),
                                       rec.iteration_found);
        if (ec != std::errc() || p != iter_text.data() + iter_text.size())
            throw std::invalid_argument("archive line " + std::to_string(line_no) +
                                        ": bad iteration");
        try {
            rec.source = provenance_from_string(line.substr(cuts[3] + 1));
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("archive line " + std::to_string(line_no) +
                                        ": bad source");
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<ArchiveRecord> read_archive_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    return read_archive_csv(in);
}

namespace {

json record_to_json(const ArchiveRecord& r) {
    return json{{"genome", r.genome.genes},
                {"error_rate", r.error_rate},
                {"madds", r.madds},
                {"iteration", r.iteration_found},
                {"source", to_string(r.source)}};
}

ArchiveRecord record_from_json(const json& j) {
    ArchiveRecord r;
    r.genome = Genome(j.at("genome").get<std::vector<int>>());
    r.error_rate = j.at("error_rate").get<double>();
    r.madds = j.at("madds").get<double>();
    r.iteration_found = j.at("iteration").get<int>();
    r.source = provenance_from_string(j.at("source").get<std::string>());
    return r;
}

}  // namespace

void write_pareto_json(const std::filesystem::path& path, std::span<const ArchiveRecord> archive,
                       std::span<const std::size_t> pareto_indices) {
    json arr = json::array();
    for (std::size_t i : pareto_indices) arr.push_back(record_to_json(archive[i]));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << arr.dump(2) << '\n';
}

std::vector<ArchiveRecord> read_pareto_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    json arr = json::parse(in);
    if (!arr.is_array()) throw std::invalid_argument("pareto file: expected a JSON array");
    std::vector<ArchiveRecord> records;
    records.reserve(arr.size());
    for (const auto& item : arr) records.push_back(record_from_json(item));
    return records;
}

void write_trace_csv(std::ostream& out, std::span<const IterationTraceRow> trace) {
    out << "iteration,archive_size,rank1_size,hypervolume,entropy,p1_size,p2_size,"
           "real_evaluations\n";
    for (const auto& row : trace) {
        out << row.iteration << ',' << row.archive_size << ',' << row.rank1_size << ',';
        write_double(out, row.hypervolume);
        out << ',';
        write_double(out, row.entropy);
        out << ',' << row.p1_size << ',' << row.p2_size << ',' << row.real_evaluations << '\n';
    }
}

void write_trace_csv(const std::filesystem::path& path, std::span<const IterationTraceRow> trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    write_trace_csv(out, trace);
}

// --- config document ---------------------------------------------------------

namespace {

// Tracks which keys of an object were consumed so unknown keys can be named.
class FieldReader {
 public:
    FieldReader(const json& obj, std::string prefix) : obj_(obj), prefix_(std::move(prefix)) {
        if (!obj_.is_object()) throw ConfigError(prefix_.empty() ? "<root>" : prefix_,
                                                 qualified("") + "must be a JSON object");
    }

    bool has(const char* key) const { return obj_.contains(key); }

    const json& require(const char* key) {
        if (!obj_.contains(key))
            throw ConfigError(key, "missing required field \"" + prefix_ + key + "\"");
        consumed_.push_back(key);
        return obj_.at(key);
    }

    template <typename T>
    T get(const char* key, T fallback) {
        if (!obj_.contains(key)) return fallback;
        consumed_.push_back(key);
        try {
            return obj_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError(key, "field \"" + prefix_ + key + "\" has the wrong type");
        }
    }

    const json* peek(const char* key) {
        if (!obj_.contains(key)) return nullptr;
        consumed_.push_back(key);
        return &obj_.at(key);
    }

    void finish() const {
        for (const auto& [key, value] : obj_.items()) {
            if (std::find(consumed_.begin(), consumed_.end(), key) == consumed_.end())
                throw ConfigError(key, "unknown field \"" + prefix_ + key + "\"");
        }
    }

 private:
    std::string qualified(const char* key) const { return "\"" + prefix_ + key + "\" "; }

    const json& obj_;
    std::string prefix_;
    std::vector<std::string> consumed_;
};

SearchSpaceConfig space_from_json(const json& j) {
    if (j.is_string()) {
        const auto name = j.get<std::string>();
        if (name == "default") return default_space();
        if (name == "tiny") return tiny_space();
        throw ConfigError("space", "field \"space\" names an unknown preset '" + name + "'");
    }
    FieldReader reader(j, "space.");
    SearchSpaceConfig cfg;
    cfg.resolution_options = reader.get<std::vector<int>>("resolutions", {});
    cfg.max_layers_per_block = reader.get<int>("max_layers_per_block", 0);
    cfg.depth_options = reader.get<std::vector<int>>("depths", {});
    cfg.expand_options = reader.get<std::vector<double>>("expands", {});
    cfg.kernel_options = reader.get<std::vector<int>>("kernels", {});
    if (const json* blocks = reader.peek("blocks")) {
        if (!blocks->is_array())
            throw ConfigError("blocks", "field \"space.blocks\" must be an array");
        for (const auto& b : *blocks) {
            FieldReader block(b, "space.blocks[].");
            BlockSpec spec;
            spec.in_channels = block.get<int>("in_channels", 0);
            spec.out_channels = block.get<int>("out_channels", 0);
            spec.stride = block.get<int>("stride", 1);
            spec.input_resolution_divisor = block.get<int>("input_resolution_divisor", 1);
            block.finish();
            cfg.blocks.push_back(spec);
        }
    }
    reader.finish();
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("space", std::string("field \"space\" is invalid: ") + e.what());
    }
    return cfg;
}

json space_to_json(const SearchSpaceConfig& cfg) {
    json blocks = json::array();
    for (const auto& b : cfg.blocks)
        blocks.push_back(json{{"in_channels", b.in_channels},
                              {"out_channels", b.out_channels},
                              {"stride", b.stride},
                              {"input_resolution_divisor", b.input_resolution_divisor}});
    return json{{"resolutions", cfg.resolution_options},
                {"blocks", blocks},
                {"max_layers_per_block", cfg.max_layers_per_block},
                {"depths", cfg.depth_options},
                {"expands", cfg.expand_options},
                {"kernels", cfg.kernel_options}};
}

EvaluatorSpec evaluator_from_json(const json& j) {
    FieldReader reader(j, "evaluator.");
    EvaluatorSpec spec;
    const auto type = reader.get<std::string>("type", "synthetic");
    if (type == "synthetic") {
        spec.kind = EvaluatorSpec::Kind::synthetic;
        spec.oracle.e_min = reader.get<double>("e_min", spec.oracle.e_min);
        spec.oracle.e_max = reader.get<double>("e_max", spec.oracle.e_max);
        spec.oracle.tau_madds = reader.get<double>("tau_madds", spec.oracle.tau_madds);
        spec.oracle.noise_amp = reader.get<double>("noise_amp", spec.oracle.noise_amp);
        if (reader.has("oracle_seed"))
            spec.oracle_seed = reader.get<std::uint64_t>("oracle_seed", 0);
    } else if (type == "tabular") {
        spec.kind = EvaluatorSpec::Kind::tabular;
        spec.table_path = reader.get<std::string>("path", "");
        if (spec.table_path.empty())
            throw ConfigError("path", "field \"evaluator.path\" is required for a tabular backend");
    } else {
        throw ConfigError("type", "field \"evaluator.type\" must be 'synthetic' or 'tabular'");
    }
    reader.finish();
    return spec;
}

json evaluator_to_json(const EvaluatorSpec& spec, std::uint64_t run_seed) {
    if (spec.kind == EvaluatorSpec::Kind::tabular)
        return json{{"type", "tabular"}, {"path", spec.table_path}};
    return json{{"type", "synthetic"},
                {"e_min", spec.oracle.e_min},
                {"e_max", spec.oracle.e_max},
                {"tau_madds", spec.oracle.tau_madds},
                {"noise_amp", spec.oracle.noise_amp},
                {"oracle_seed",
                 spec.oracle_seed.value_or(derive_seed(run_seed, seed_stream::oracle))}};
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<document>", std::string("config is not valid JSON: ") + e.what());
    }
    FieldReader reader(doc, "");
    ExperimentConfig cfg;
    RunConfig& run = cfg.run;

    try {
        run.seed = reader.require("seed").get<std::uint64_t>();
    } catch (const json::exception&) {
        throw ConfigError("seed", "field \"seed\" must be a non-negative integer");
    }
    try {
        run.iterations = reader.require("iterations").get<int>();
    } catch (const json::exception&) {
        throw ConfigError("iterations", "field \"iterations\" must be an integer");
    }

    if (const json* space = reader.peek("space"))
        run.space = space_from_json(*space);
    else
        run.space = default_space();
    if (const json* evaluator = reader.peek("evaluator"))
        run.evaluator = evaluator_from_json(*evaluator);

    run.population1_size = reader.get<std::size_t>("population1_size", run.population1_size);
    run.population2_size = reader.get<std::size_t>("population2_size", run.population2_size);
    run.generations = reader.get<int>("generations", run.generations);
    run.sub_population_size =
        reader.get<std::size_t>("sub_population_size", run.sub_population_size);
    run.elites1 = reader.get<std::size_t>("elites1", run.elites1);
    run.elites2 = reader.get<std::size_t>("elites2", run.elites2);
    run.pool_size = reader.get<std::size_t>("pool_size", run.pool_size);
    run.regions = reader.get<int>("regions", run.regions);
    run.extreme_regions = reader.get<int>("extreme_regions", run.extreme_regions);
    const auto migration = reader.get<std::string>("migration", to_string(run.migration));
    try {
        run.migration = migration_mode_from_string(migration);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("migration", std::string("field \"migration\": ") + e.what());
    }
    run.variation.crossover_prob =
        reader.get<double>("crossover_prob", run.variation.crossover_prob);
    run.variation.mutation_eta = reader.get<double>("mutation_eta", run.variation.mutation_eta);
    run.variation.mutation_prob = reader.get<double>("mutation_prob", run.variation.mutation_prob);
    if (const json* comparator = reader.peek("comparator")) {
        FieldReader sub(*comparator, "comparator.");
        run.comparator.l2 = sub.get<double>("l2", run.comparator.l2);
        run.comparator.learning_rate =
            sub.get<double>("learning_rate", run.comparator.learning_rate);
        run.comparator.epochs = sub.get<int>("epochs", run.comparator.epochs);
        sub.finish();
    }
    run.augment_swapped_pairs = reader.get<bool>("augment_swapped_pairs", run.augment_swapped_pairs);
    run.max_parallel = reader.get<int>("max_parallel", run.max_parallel);
    run.histogram_bins = reader.get<int>("histogram_bins", run.histogram_bins);

    cfg.surrogate_train_size = reader.get<int>("surrogate_train_size", cfg.surrogate_train_size);
    cfg.surrogate_test_size = reader.get<int>("surrogate_test_size", cfg.surrogate_test_size);
    cfg.surrogate_seeds = reader.get<int>("surrogate_seeds", cfg.surrogate_seeds);
    cfg.baseline_strata = reader.get<int>("baseline_strata", cfg.baseline_strata);
    reader.finish();

    try {
        run.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("<config>", std::string("invalid configuration: ") + e.what());
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("<file>", "cannot open config file '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_experiment_config(text.str());
}

std::string experiment_config_json(const ExperimentConfig& cfg) {
    const RunConfig& run = cfg.run;
    json doc{{"seed", run.seed},
             {"iterations", run.iterations},
             {"space", space_to_json(run.space)},
             {"evaluator", evaluator_to_json(run.evaluator, run.seed)},
             {"population1_size", run.population1_size},
             {"population2_size", run.population2_size},
             {"generations", run.generations},
             {"sub_population_size", run.sub_population_size},
             {"elites1", run.elites1},
             {"elites2", run.elites2},
             {"pool_size", run.pool_size},
             {"regions", run.regions},
             {"extreme_regions", run.extreme_regions},
             {"migration", to_string(run.migration)},
             {"crossover_prob", run.variation.crossover_prob},
             {"mutation_eta", run.variation.mutation_eta},
             {"mutation_prob", run.variation.mutation_prob},
             {"comparator",
              json{{"l2", run.comparator.l2},
                   {"learning_rate", run.comparator.learning_rate},
                   {"epochs", run.comparator.epochs}}},
             {"augment_swapped_pairs", run.augment_swapped_pairs},
             {"max_parallel", run.max_parallel},
             {"histogram_bins", run.histogram_bins},
             {"surrogate_train_size", cfg.surrogate_train_size},
             {"surrogate_test_size", cfg.surrogate_test_size},
             {"surrogate_seeds", cfg.surrogate_seeds},
             {"baseline_strata", cfg.baseline_strata}};
    return doc.dump(2) + "\n";
}

void write_config_json(const std::filesystem::path& path, const ExperimentConfig& cfg) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << experiment_config_json(cfg);
}

}  // namespace moeabus
