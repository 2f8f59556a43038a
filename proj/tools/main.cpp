// SPDX-License-Identifier: Apache-2.0
//
// moeabus command line: run searches, compare initial-population sampling
// methods, score surrogate backends, and compute archive metrics.
// Exit codes: 0 success, 2 usage/config error, 3 evaluator backend error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "moeabus/driver.hpp"
#include "moeabus/experiments.hpp"
#include "moeabus/metrics.hpp"

namespace fs = std::filesystem;
using namespace moeabus;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitBackend = 3;

struct CommonOptions {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int max_parallel = 0;  // 0: keep the config value
};

ExperimentConfig load_config(const CommonOptions& opts) {
    auto cfg = load_experiment_config(opts.config_path);
    if (opts.seed_set) cfg.run.seed = opts.seed;
    if (opts.max_parallel > 0) cfg.run.max_parallel = opts.max_parallel;
    return cfg;
}

struct Mean {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t n = 0;

    void add(double v) {
        sum += v;
        sum_sq += v * v;
        ++n;
    }
    double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
    double stddev() const {
        if (n < 2) return 0.0;
        const double m = mean();
        return std::sqrt(std::max(0.0, sum_sq / static_cast<double>(n) - m * m));
    }
};

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

int cmd_search(const CommonOptions& opts) {
    const auto cfg = load_config(opts);
    fs::create_directories(opts.out_dir);
    const auto result = run_moea_bus(cfg.run);

    const fs::path out(opts.out_dir);
    write_archive_csv(out / "archive.csv", result.archive);
    write_pareto_json(out / "pareto.json", result.archive, result.pareto_indices);
    write_trace_csv(out / "trace.csv", result.trace);
    write_config_json(out / "config.json", cfg);

    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "archive: " << result.archive.size() << " records ("
              << result.pareto_indices.size() << " on the Pareto front)\n"
              << "real evaluations: " << result.real_evaluations << "\n"
              << "outputs: " << (out / "archive.csv").string()
              << ", pareto.json, trace.csv, config.json\n";
    return kExitOk;
}

int cmd_sample_compare(const CommonOptions& opts, const std::vector<std::string>& methods,
                       int seeds) {
    const auto cfg = load_config(opts);
    const auto rows = run_sample_compare(cfg, methods, seeds);

    fs::create_directories(opts.out_dir);
    const fs::path csv_path = fs::path(opts.out_dir) / "sample_compare.csv";
    std::ofstream csv(csv_path, std::ios::binary);
    csv << "method,seed,entropy,hypervolume\n";
    std::map<std::string, std::pair<Mean, Mean>> summary;
    for (const auto& row : rows) {
        csv << row.method << ',' << row.seed << ',' << format_value(row.entropy) << ','
            << format_value(row.hypervolume) << '\n';
        summary[row.method].first.add(row.entropy);
        summary[row.method].second.add(row.hypervolume);
    }

    std::cout << pad("method", 18) << pad("mean_entropy", 14) << pad("mean_hv", 10) << "(over "
              << seeds << " seeds)\n";
    for (const auto& [method, stats] : summary)
        std::cout << pad(method, 18) << pad(format_value(stats.first.mean()), 14)
                  << format_value(stats.second.mean()) << "\n";
    std::cout << "rows: " << csv_path.string() << "\n";
    return kExitOk;
}

int cmd_surrogate_eval(const CommonOptions& opts) {
    const auto cfg = load_config(opts);
    const auto rows = run_surrogate_eval(cfg);

    fs::create_directories(opts.out_dir);
    std::ofstream csv(fs::path(opts.out_dir) / "surrogate_eval.csv", std::ios::binary);
    csv << "model,sampling,seed,ktau\n";
    std::map<std::string, Mean> taus;
    for (const auto& row : rows) {
        csv << row.model << ',' << row.sampling << ',' << row.seed << ','
            << format_value(row.ktau) << '\n';
        taus[row.model + "+" + row.sampling].add(row.ktau);
    }

    const fs::path table_path = fs::path(opts.out_dir) / "surrogate_eval.txt";
    std::ofstream table(table_path, std::ios::binary);
    std::string text = "Kendall tau over " + std::to_string(cfg.surrogate_seeds) +
                       " seeds (train " + std::to_string(cfg.surrogate_train_size) + " / test " +
                       std::to_string(cfg.surrogate_test_size) + ")\n";
    for (const char* row : {"regression+random", "regression+uniform", "pairwise+random",
                            "pairwise+uniform"}) {
        const Mean& m = taus[row];
        text += pad(row, 20) + format_value(m.mean()) + " +/- " + format_value(m.stddev()) + "\n";
    }
    table << text;
    std::cout << text << "table: " << table_path.string() << "\n";
    return kExitOk;
}

std::vector<ArchiveRecord> load_records(const std::string& path) {
    if (fs::path(path).extension() == ".json") return read_pareto_json(path);
    return read_archive_csv(fs::path(path));
}

int cmd_metrics(const std::string& archive_path, const std::string& metric, int bins,
                const std::string& ref_text, const std::string& second_path) {
    const auto records = load_records(archive_path);
    if (records.empty()) throw std::invalid_argument("archive holds no records");

    if (metric == "entropy") {
        std::vector<Point2> cloud;
        for (const auto& r : records) cloud.push_back({1.0 - r.error_rate, r.madds});
        const double value = distribution_entropy(cloud, bins);
        std::cout << "entropy " << format_value(value) << " bins=" << bins
                  << " points=" << records.size() << "\n";
        return kExitOk;
    }
    if (metric == "hv") {
        std::vector<Point2> objectives;
        for (const auto& r : records) objectives.push_back({r.error_rate, r.madds});
        if (ref_text.empty()) {
            const double value = hypervolume_2d(minmax_normalize(objectives), {1.05, 1.05});
            std::cout << "hv " << format_value(value)
                      << " ref=1.05,1.05 normalized=true points=" << records.size() << "\n";
        } else {
            double r1 = 0.0, r2 = 0.0;
            if (std::sscanf(ref_text.c_str(), "%lf,%lf", &r1, &r2) != 2)
                throw std::invalid_argument("--ref expects 'f1,f2'");
            const double value = hypervolume_2d(objectives, {r1, r2});
            std::cout << "hv " << format_value(value) << " ref=" << ref_text
                      << " normalized=false points=" << records.size() << "\n";
        }
        return kExitOk;
    }
    if (metric == "ktau") {
        if (second_path.empty())
            throw std::invalid_argument("ktau needs --second with a second archive");
        const auto other = load_records(second_path);
        std::map<std::vector<int>, double> other_errors;
        for (const auto& r : other) other_errors.emplace(r.genome.genes, r.error_rate);
        std::vector<double> a, b;
        for (const auto& r : records) {
            const auto it = other_errors.find(r.genome.genes);
            if (it == other_errors.end()) continue;
            a.push_back(r.error_rate);
            b.push_back(it->second);
        }
        if (a.size() < 2)
            throw std::invalid_argument("fewer than 2 genomes are shared between the archives");
        std::cout << "ktau " << format_value(kendall_tau(a, b)) << " shared=" << a.size() << "\n";
        return kExitOk;
    }
    throw std::invalid_argument("unknown metric '" + metric + "' (expected hv|entropy|ktau)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bi-population multi-objective architecture search over integer encodings"};
    app.require_subcommand(1);

    CommonOptions opts;
    std::vector<std::string> methods{"uniform", "random", "stratified", "latin_hypercube"};
    int seeds = 20;
    std::string archive_path, metric = "hv", ref_text, second_path;
    int bins = 10;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opts.config_path, "JSON config document")->required();
        cmd->add_option("--out", opts.out_dir, "output directory")->required();
        cmd->add_option("--seed", opts.seed, "override the config seed")
            ->each([&](const std::string&) { opts.seed_set = true; });
        cmd->add_option("--max-parallel", opts.max_parallel, "cap evaluation workers");
    };

    auto* search = app.add_subcommand("search", "run the full search and write the run directory");
    add_common(search);

    auto* compare = app.add_subcommand("sample-compare",
                                       "entropy/HV of initial populations per sampling method");
    add_common(compare);
    compare->add_option("--methods", methods,
                        "subset of uniform,random,stratified,latin_hypercube")
        ->delimiter(',');
    compare->add_option("--seeds", seeds, "number of sampling seeds")->check(CLI::PositiveNumber);

    auto* surrogate = app.add_subcommand(
        "surrogate-eval", "Kendall tau grid {regression,pairwise} x {random,uniform}");
    add_common(surrogate);

    auto* metrics_cmd = app.add_subcommand("metrics", "compute a metric over an archive file");
    metrics_cmd->add_option("--archive", archive_path, "archive.csv or pareto.json")->required();
    metrics_cmd->add_option("--metric", metric, "hv | entropy | ktau");
    metrics_cmd->add_option("--bins", bins, "histogram bins for entropy");
    metrics_cmd->add_option("--ref", ref_text, "raw-space HV reference 'f1,f2'");
    metrics_cmd->add_option("--second", second_path, "second archive for ktau");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (search->parsed()) return cmd_search(opts);
        if (compare->parsed()) return cmd_sample_compare(opts, methods, seeds);
        if (surrogate->parsed()) return cmd_surrogate_eval(opts);
        if (metrics_cmd->parsed())
            return cmd_metrics(archive_path, metric, bins, ref_text, second_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return metrics_cmd->parsed() ? kExitUsage : kExitBackend;
    }
    return kExitUsage;
}
