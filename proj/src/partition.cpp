#include "subtraj/partition.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <stdexcept>

namespace subtraj {

TemporalPartitioning::TemporalPartitioning(std::vector<Timestamp> borders)
    : borders_(std::move(borders)) {
    if (borders_.size() < 2)
        throw std::invalid_argument("partitioning needs at least two borders");
    for (std::size_t i = 1; i < borders_.size(); ++i)
        if (borders_[i] <= borders_[i - 1])
            throw std::invalid_argument("partition borders must be strictly increasing");
}

std::uint32_t TemporalPartitioning::owner(Timestamp t) const {
    // half-open intervals: a border timestamp belongs to the right interval
    auto it = std::upper_bound(borders_.begin(), borders_.end(), t);
    if (it == borders_.begin() || it == borders_.end()) {
        if (t == borders_.back()) return static_cast<std::uint32_t>(partition_count() - 1);
        throw std::out_of_range("timestamp outside partitioned range");
    }
    return static_cast<std::uint32_t>(std::distance(borders_.begin(), it) - 1);
}

TemporalPartitioning::SpanAssignment TemporalPartitioning::assign_span(Timestamp t_start,
                                                                       Timestamp t_end) const {
    SpanAssignment s;
    s.first_pid = owner(t_start);
    s.last_pid = owner(t_end);
    return s;
}

std::vector<TemporalPartitioning::PointAssignment>
TemporalPartitioning::assign_point(Timestamp t, double halo) const {
    const std::uint32_t own = owner(t);
    std::vector<PointAssignment> out;
    // left neighbors: interval j ends just below borders_[j+1]
    std::uint32_t first = own;
    while (first > 0 && static_cast<double>(t - borders_[first]) < halo) --first;
    std::uint32_t last = own;
    const auto max_pid = static_cast<std::uint32_t>(partition_count() - 1);
    while (last < max_pid && static_cast<double>(borders_[last + 1] - t) <= halo) ++last;
    out.reserve(last - first + 1);
    for (std::uint32_t pid = first; pid <= last; ++pid)
        out.push_back(PointAssignment{pid, pid == own});
    return out;
}

void TemporalPartitioning::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open partition file: " + path);
    for (const auto b : borders_) out << b << '\n';
}

TemporalPartitioning TemporalPartitioning::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open partition file: " + path);
    std::vector<Timestamp> borders;
    Timestamp b;
    while (in >> b) borders.push_back(b);
    return TemporalPartitioning(std::move(borders));
}

TemporalPartitioning build_partitioning(const Dataset& ds, std::size_t partitions,
                                        double sample_fraction, std::uint64_t seed) {
    if (partitions < 1) throw std::invalid_argument("partition count must be >= 1");
    if (ds.empty()) throw std::invalid_argument("cannot partition an empty dataset");
    if (!(sample_fraction > 0.0) || sample_fraction > 1.0)
        throw std::invalid_argument("sample_fraction must be in (0,1]");

    std::vector<Timestamp> all;
    all.reserve(ds.total_points());
    for (const auto& tr : ds.trajectories())
        for (const auto& p : tr.points) all.push_back(p.t);

    const std::size_t n = all.size();
    std::size_t want = static_cast<std::size_t>(
        std::max<double>(1.0, sample_fraction * static_cast<double>(n)));
    want = std::max(want, std::min<std::size_t>(10000, n));
    want = std::min(want, n);

    // deterministic partial Fisher-Yates, portable across standard libraries
    std::vector<Timestamp> sample;
    if (want == n) {
        sample = all;
    } else {
        std::mt19937_64 rng(seed);
        for (std::size_t i = 0; i < want; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, n - 1);
            std::swap(all[i], all[pick(rng)]);
        }
        sample.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(want));
    }
    std::sort(sample.begin(), sample.end());

    const Timestamp lo = ds.min_time();
    const Timestamp hi = ds.max_time() + 1; // last border must lie above every timestamp

    std::vector<Timestamp> borders;
    borders.push_back(lo);
    for (std::size_t i = 1; i < partitions; ++i) {
        const std::size_t q = i * sample.size() / partitions;
        borders.push_back(sample[q]);
    }
    borders.push_back(hi);

    for (std::size_t i = 1; i < borders.size(); ++i) {
        if (borders[i] <= borders[i - 1])
            throw std::runtime_error(
                "degenerate partition borders (too few distinct sampled timestamps); "
                "use a smaller partition count");
    }
    return TemporalPartitioning(std::move(borders));
}

} // namespace subtraj
