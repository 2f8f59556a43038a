// SPDX-License-Identifier: Apache-2.0
#include "moeabus/sampling.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "moeabus/complexity.hpp"
#include "moeabus/rand.hpp"

namespace moeabus {

SamplePool build_pool(const SearchSpaceConfig& cfg, std::size_t size, std::uint64_t seed) {
    auto rng = make_engine(seed);
    SamplePool pool;
    pool.members.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
        Genome g = random_genome(cfg, rng);
        const double madds = total_madds(g, cfg);
        pool.members.push_back({std::move(g), madds});
    }
    return pool;
}

void save_pool(const SamplePool& pool, std::ostream& out) {
    char buf[64];
    for (const auto& m : pool.members) {
        out << genome_to_csv(m.genome) << ';';
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, m.madds);
        out.write(buf, end - buf);
        out << '\n';
    }
}

SamplePool load_pool(std::istream& in) {
    SamplePool pool;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto sep = line.find(';');
        if (sep == std::string::npos)
            throw std::invalid_argument("pool line " + std::to_string(line_no) + ": missing ';'");
        Genome g = genome_from_csv(std::string_view(line).substr(0, sep));
        double madds = 0.0;
        const char* first = line.data() + sep + 1;
        auto [p, ec] = std::from_chars(first, line.data() + line.size(), madds);
        if (ec != std::errc())
            throw std::invalid_argument("pool line " + std::to_string(line_no) + ": bad madds");
        pool.members.push_back({std::move(g), madds});
    }
    return pool;
}

RegionPartition partition_regions(const SamplePool& pool, int region_count) {
    if (pool.members.empty()) throw std::invalid_argument("partition_regions: empty pool");
    if (region_count < 2) throw std::invalid_argument("partition_regions: need at least 2 regions");

    double lo = pool.members.front().madds;
    double hi = lo;
    for (const auto& m : pool.members) {
        lo = std::min(lo, m.madds);
        hi = std::max(hi, m.madds);
    }
    if (!(lo < hi))
        throw std::invalid_argument(
            "partition_regions: all pool members share one MAdds value; sample a larger pool");

    RegionPartition part;
    const double width = (hi - lo) / region_count;
    part.boundaries.resize(static_cast<std::size_t>(region_count) + 1);
    for (int i = 0; i <= region_count; ++i) part.boundaries[i] = lo + width * i;
    part.boundaries.back() = hi;  // last interval closed

    part.assignment.reserve(pool.members.size());
    for (const auto& m : pool.members) {
        const int idx = static_cast<int>((m.madds - lo) / width);
        part.assignment.push_back(static_cast<std::size_t>(std::clamp(idx, 0, region_count - 1)));
    }
    return part;
}

namespace {

// Per-region shuffled candidate lists plus a cursor; used for quota filling
// and deficit redistribution.
struct GroupDraw {
    std::vector<std::size_t> candidates;
    std::size_t cursor = 0;

    // Next member index whose genome is not yet taken; npos when exhausted.
    std::size_t next(const SamplePool& pool, GenomeSet* taken) {
        while (cursor < candidates.size()) {
            const std::size_t idx = candidates[cursor++];
            if (taken == nullptr || taken->insert(pool.members[idx].genome).second) return idx;
        }
        return static_cast<std::size_t>(-1);
    }
};

std::vector<std::size_t> equal_quotas(std::size_t n, std::size_t groups) {
    std::vector<std::size_t> quota(groups, n / groups);
    for (std::size_t i = 0; i < n % groups; ++i) ++quota[i];
    return quota;
}

// Fills quotas group by group, then walks each deficit outward to the nearest
// groups. Throws when the groups cannot supply n picks overall.
std::vector<std::size_t> quota_fill(const SamplePool& pool, std::vector<GroupDraw>& groups,
                                    std::size_t n, GenomeSet* taken, const char* what) {
    const auto quota = equal_quotas(n, groups.size());
    std::vector<std::size_t> selected;
    selected.reserve(n);
    std::vector<std::size_t> shortfall(groups.size(), 0);
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        for (std::size_t k = 0; k < quota[gi]; ++k) {
            const std::size_t idx = groups[gi].next(pool, taken);
            if (idx == static_cast<std::size_t>(-1)) {
                shortfall[gi] = quota[gi] - k;
                break;
            }
            selected.push_back(idx);
        }
    }
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        std::size_t need = shortfall[gi];
        for (std::size_t offset = 1; need > 0 && offset < groups.size(); ++offset) {
            for (int side : {-1, +1}) {
                if (need == 0) break;
                const std::ptrdiff_t gj = static_cast<std::ptrdiff_t>(gi) + side * static_cast<std::ptrdiff_t>(offset);
                if (gj < 0 || gj >= static_cast<std::ptrdiff_t>(groups.size())) continue;
                while (need > 0) {
                    const std::size_t idx = groups[static_cast<std::size_t>(gj)].next(pool, taken);
                    if (idx == static_cast<std::size_t>(-1)) break;
                    selected.push_back(idx);
                    --need;
                }
            }
        }
        if (need > 0)
            throw std::invalid_argument(std::string(what) +
                                        ": pool cannot supply the requested number of distinct "
                                        "genomes; sample a larger pool");
    }
    return selected;
}

}  // namespace

std::vector<std::size_t> region_quota_sample(const SamplePool& pool,
                                             const RegionPartition& partition,
                                             const std::vector<std::size_t>& regions,
                                             std::size_t n, std::mt19937_64& rng,
                                             GenomeSet& taken) {
    if (regions.empty()) throw std::invalid_argument("region_quota_sample: no regions");
    std::vector<GroupDraw> groups(regions.size());
    for (std::size_t mi = 0; mi < pool.members.size(); ++mi) {
        const auto it = std::find(regions.begin(), regions.end(), partition.assignment[mi]);
        if (it != regions.end()) groups[it - regions.begin()].candidates.push_back(mi);
    }
    for (auto& g : groups) std::shuffle(g.candidates.begin(), g.candidates.end(), rng);
    return quota_fill(pool, groups, n, &taken, "region_quota_sample");
}

std::pair<std::vector<Genome>, std::vector<Genome>> uniform_split_populations(
    const SamplePool& pool, const RegionPartition& partition, std::size_t n1, std::size_t n2,
    int extreme_per_side, std::uint64_t seed) {
    const int regions = static_cast<int>(partition.region_count());
    if (extreme_per_side < 1)
        throw std::invalid_argument("uniform_split_populations: extreme_per_side must be >= 1");
    if (regions <= 2 * extreme_per_side)
        throw std::invalid_argument("uniform_split_populations: need R > 2E");
    if (n1 == 0 || n2 == 0)
        throw std::invalid_argument("uniform_split_populations: population sizes must be >= 1");

    std::vector<std::size_t> extreme;
    std::vector<std::size_t> middle;
    for (int r = 0; r < regions; ++r) {
        if (r < extreme_per_side || r >= regions - extreme_per_side)
            extreme.push_back(static_cast<std::size_t>(r));
        else
            middle.push_back(static_cast<std::size_t>(r));
    }

    auto rng = make_engine(seed);
    GenomeSet taken;
    const auto p1_idx = region_quota_sample(pool, partition, extreme, n1, rng, taken);
    const auto p2_idx = region_quota_sample(pool, partition, middle, n2, rng, taken);

    std::vector<Genome> p1, p2;
    p1.reserve(n1);
    p2.reserve(n2);
    for (std::size_t i : p1_idx) p1.push_back(pool.members[i].genome);
    for (std::size_t i : p2_idx) p2.push_back(pool.members[i].genome);
    return {std::move(p1), std::move(p2)};
}

SampleMethod sample_method_from_string(const std::string& name) {
    if (name == "random") return SampleMethod::random;
    if (name == "stratified") return SampleMethod::stratified;
    if (name == "latin_hypercube") return SampleMethod::latin_hypercube;
    throw std::invalid_argument("unknown sampling method '" + name + "'");
}

const char* to_string(SampleMethod method) {
    switch (method) {
        case SampleMethod::random: return "random";
        case SampleMethod::stratified: return "stratified";
        case SampleMethod::latin_hypercube: return "latin_hypercube";
    }
    return "?";
}

std::vector<std::vector<double>> latin_hypercube_matrix(
    const std::vector<std::pair<double, double>>& axes, std::size_t n, std::mt19937_64& rng) {
    std::vector<std::vector<double>> samples(n, std::vector<double>(axes.size(), 0.0));
    std::vector<std::size_t> perm(n);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t a = 0; a < axes.size(); ++a) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        const double lo = axes[a].first;
        const double width = (axes[a].second - axes[a].first) / static_cast<double>(n);
        for (std::size_t s = 0; s < n; ++s)
            samples[s][a] = lo + (static_cast<double>(perm[s]) + unit(rng)) * width;
    }
    return samples;
}

namespace {

std::vector<Genome> random_from_pool(const SamplePool& pool, std::size_t n, std::mt19937_64& rng) {
    if (n > pool.size())
        throw std::invalid_argument("baseline_sample: n exceeds the pool size");
    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Genome> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(pool.members[order[i]].genome);
    return out;
}

std::vector<Genome> stratified_from_pool(const SamplePool& pool, std::size_t n,
                                         std::mt19937_64& rng, int strata) {
    if (n > pool.size())
        throw std::invalid_argument("baseline_sample: n exceeds the pool size");
    // Strata are contiguous runs of the pool ordered by encoding.
    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&pool](std::size_t a, std::size_t b) {
        return std::tie(pool.members[a].genome.genes, a) <
               std::tie(pool.members[b].genome.genes, b);
    });

    const std::size_t s = static_cast<std::size_t>(strata);
    std::vector<GroupDraw> groups(s);
    const auto sizes = equal_quotas(pool.size(), s);
    std::size_t pos = 0;
    for (std::size_t gi = 0; gi < s; ++gi) {
        groups[gi].candidates.assign(order.begin() + pos, order.begin() + pos + sizes[gi]);
        std::shuffle(groups[gi].candidates.begin(), groups[gi].candidates.end(), rng);
        pos += sizes[gi];
    }
    const auto selected = quota_fill(pool, groups, n, nullptr, "stratified sample");
    std::vector<Genome> out;
    out.reserve(n);
    for (std::size_t i : selected) out.push_back(pool.members[i].genome);
    return out;
}

std::vector<Genome> latin_hypercube_genomes(const SearchSpaceConfig& cfg, std::size_t n,
                                            std::mt19937_64& rng) {
    std::vector<std::pair<double, double>> axes;
    axes.reserve(static_cast<std::size_t>(cfg.genome_length()));
    for (int pos = 0; pos < cfg.genome_length(); ++pos) {
        const double k = static_cast<double>(option_count_at(cfg, pos));
        axes.emplace_back(0.5, k + 0.5);
    }
    const auto matrix = latin_hypercube_matrix(axes, n, rng);
    std::vector<Genome> out;
    out.reserve(n);
    for (const auto& row : matrix) {
        std::vector<int> raw(row.size());
        for (std::size_t i = 0; i < row.size(); ++i)
            raw[i] = static_cast<int>(std::llround(row[i]));
        out.push_back(repair_genome(std::move(raw), cfg, rng));
    }
    return out;
}

}  // namespace

std::vector<Genome> baseline_sample(const SamplePool& pool, const SearchSpaceConfig& cfg,
                                    SampleMethod method, std::size_t n, std::uint64_t seed,
                                    int strata) {
    if (n == 0) return {};
    if (strata < 1) throw std::invalid_argument("baseline_sample: strata must be >= 1");
    auto rng = make_engine(seed);
    switch (method) {
        case SampleMethod::random: return random_from_pool(pool, n, rng);
        case SampleMethod::stratified:
            if (strata == 1) return random_from_pool(pool, n, rng);  // degenerate strata
            return stratified_from_pool(pool, n, rng, strata);
        case SampleMethod::latin_hypercube: return latin_hypercube_genomes(cfg, n, rng);
    }
    throw std::invalid_argument("baseline_sample: unknown method");
}

}  // namespace moeabus
