#pragma once

#include "subtraj/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace subtraj {

/// Load-balanced temporal partitioning: P half-open intervals
/// [borders[i], borders[i+1]) whose borders are sample quantiles, so each
/// interval holds roughly the same number of points.
class TemporalPartitioning {
public:
    TemporalPartitioning() = default;
    explicit TemporalPartitioning(std::vector<Timestamp> borders);

    std::size_t partition_count() const { return borders_.size() - 1; }
    const std::vector<Timestamp>& borders() const { return borders_; }

    /// Partition owning timestamp t. t must lie in [first, last) border range.
    std::uint32_t owner(Timestamp t) const;

    /// Ids of all partitions overlapping the inclusive span [t_start, t_end].
    struct SpanAssignment {
        std::uint32_t first_pid = 0;
        std::uint32_t last_pid = 0;
        bool intersecting() const { return last_pid > first_pid; }
    };
    SpanAssignment assign_span(Timestamp t_start, Timestamp t_end) const;

    /// Owner plus every partition whose interval lies within `halo` of t.
    /// Exactly one entry (the owner) is flagged primary.
    struct PointAssignment {
        std::uint32_t pid = 0;
        bool primary = false;
    };
    std::vector<PointAssignment> assign_point(Timestamp t, double halo) const;

    void save(const std::string& path) const;
    static TemporalPartitioning load(const std::string& path);

private:
    std::vector<Timestamp> borders_;
};

/// Builds the partitioning from a deterministic uniform sample of point
/// timestamps: interior borders are the (i/P)-quantiles of the sample,
/// the outer borders clamp to the data extent.
/// sample_fraction in (0,1]; the sample never goes below min(10000, n) points.
TemporalPartitioning build_partitioning(const Dataset& ds, std::size_t partitions,
                                        double sample_fraction, std::uint64_t seed);

} // namespace subtraj
