// SPDX-License-Identifier: Apache-2.0
#include "moeabus/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "moeabus/rand.hpp"

namespace moeabus {

void SyntheticOracleConfig::validate() const {
    if (!(e_min > 0.0 && e_min < 1.0 && e_max > 0.0 && e_max < 1.0 && e_min < e_max))
        throw std::invalid_argument("synthetic oracle: require 0 < e_min < e_max < 1");
    if (!(tau_madds > 0.0)) throw std::invalid_argument("synthetic oracle: tau must be positive");
    if (noise_amp < 0.0) throw std::invalid_argument("synthetic oracle: noise_amp must be >= 0");
}

double genome_noise(const Genome& g, std::uint64_t seed) {
    std::uint64_t h = splitmix64(seed);
    for (int v : g.genes) h = splitmix64(h ^ static_cast<std::uint64_t>(v));
    return 2.0 * to_unit_interval(h) - 1.0;
}

double synthetic_error(double madds, const SyntheticOracleConfig& oracle, double noise) {
    const double raw = oracle.e_min +
                       (oracle.e_max - oracle.e_min) * std::exp(-madds / oracle.tau_madds) +
                       oracle.noise_amp * noise;
    return std::clamp(raw, 0.0, 1.0);
}

SyntheticEvaluator::SyntheticEvaluator(SearchSpaceConfig space, SyntheticOracleConfig oracle)
    : space_(std::move(space)), oracle_(oracle) {
    space_.validate();
    oracle_.validate();
}

EvaluationResult SyntheticEvaluator::evaluate(const Genome& g) const {
    const double madds = total_madds(g, space_);
    return {synthetic_error(madds, oracle_, genome_noise(g, oracle_.seed)), madds};
}

namespace {

double parse_double_field(const std::string& line, std::size_t begin, std::size_t end,
                          std::size_t line_no, const char* what) {
    double value = 0.0;
    auto [p, ec] = std::from_chars(line.data() + begin, line.data() + end, value);
    if (ec != std::errc() || p != line.data() + end)
        throw std::invalid_argument("table line " + std::to_string(line_no) + ": bad " + what);
    return value;
}

}  // namespace

TabularEvaluator TabularEvaluator::parse(std::istream& in) {
    TabularEvaluator table;
    std::string line;
    if (!std::getline(in, line) || line != "genome,error_rate,madds")
        throw std::invalid_argument("table: expected header 'genome,error_rate,madds'");
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto last = line.rfind(',');
        const auto second_last = last == std::string::npos ? std::string::npos
                                                           : line.rfind(',', last - 1);
        if (second_last == std::string::npos)
            throw std::invalid_argument("table line " + std::to_string(line_no) +
                                        ": expected genome,error_rate,madds");
        Genome g = genome_from_csv(std::string_view(line).substr(0, second_last));
        EvaluationResult r;
        r.error_rate = parse_double_field(line, second_last + 1, last, line_no, "error_rate");
        r.madds = parse_double_field(line, last + 1, line.size(), line_no, "madds");
        if (!table.table_.emplace(std::move(g), r).second)
            throw std::invalid_argument("table line " + std::to_string(line_no) +
                                        ": duplicate genome row");
    }
    return table;
}

TabularEvaluator TabularEvaluator::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open evaluation table '" + path.string() + "'");
    return parse(in);
}

TabularEvaluator TabularEvaluator::from_records(std::span<const EvaluatedGenome> records) {
    TabularEvaluator table;
    for (const auto& r : records)
        if (!table.table_.emplace(r.genome, EvaluationResult{r.error_rate, r.madds}).second)
            throw std::invalid_argument("table: duplicate genome row");
    return table;
}

EvaluationResult TabularEvaluator::evaluate(const Genome& g) const {
    const auto it = table_.find(g);
    if (it == table_.end())
        throw std::out_of_range("tabular evaluator: no entry for genome " + genome_to_csv(g));
    return it->second;
}

void save_table(std::span<const EvaluatedGenome> records, std::ostream& out) {
    out << "genome,error_rate,madds\n";
    char buf[64];
    const auto write_double = [&](double v) {
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
        out.write(buf, end - buf);
    };
    for (const auto& r : records) {
        out << genome_to_csv(r.genome) << ',';
        write_double(r.error_rate);
        out << ',';
        write_double(r.madds);
        out << '\n';
    }
}

std::vector<BatchItem> evaluate_batch(std::span<const Genome> genomes, const Evaluator& evaluator,
                                      int max_parallel) {
    std::vector<BatchItem> items(genomes.size());
    const auto run_one = [&](std::size_t i) {
        try {
            items[i].result = evaluator.evaluate(genomes[i]);
            items[i].ok = true;
        } catch (const std::exception& e) {
            items[i].ok = false;
            items[i].error = e.what();
        }
    };

    const std::size_t workers =
        std::min<std::size_t>(std::max(max_parallel, 1), genomes.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < genomes.size(); ++i) run_one(i);
        return items;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < genomes.size(); i = next.fetch_add(1))
                run_one(i);
        });
    }
    for (auto& t : threads) t.join();
    return items;
}

}  // namespace moeabus
