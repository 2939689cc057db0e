#pragma once

#include "subtraj/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace subtraj {

/// Expected label of one index range of one trajectory.
struct GroundTruthEntry {
    std::string traj_id;
    PointIndex first = 0; // 0-based inclusive
    PointIndex last = 0;
    std::string label;
};

struct GroundTruth {
    std::vector<GroundTruthEntry> entries;

    void save(const std::string& path) const;
    static GroundTruth load(const std::string& path);
};

struct SyntheticScene {
    Dataset dataset;
    GroundTruth truth;
};

/// Six routes between origins A, B and destinations A, B, C, D that share
/// the midpoint region: objects of the same origin travel together and fan
/// out halfway, so each half-route forms one expected cluster (A>O, B>O,
/// O>A, O>B, O>C, O>D). `replication` objects per route, all departing
/// simultaneously with equal speed; `noise` adds per-point jitter as a
/// fraction of the half-route length.
SyntheticScene generate_star(unsigned replication, double noise, std::uint64_t seed);

/// Five trajectories A>B, A>C, A>D, C>B and D>B through the shared midpoint:
/// the neighborhood of A>B keeps its size across the midpoint while its
/// composition changes completely. Labels mark the half-route segments.
SyntheticScene generate_tsa(unsigned replication, double noise, std::uint64_t seed);

/// Dispatch by scenario name ("star" or "tsa").
SyntheticScene generate_synthetic(const std::string& scenario, unsigned replication,
                                  double noise, std::uint64_t seed);

} // namespace subtraj
