#pragma once

#include "subtraj/params.hpp"
#include "subtraj/types.hpp"

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

namespace subtraj {

/// One point of one trajectory, flattened for per-partition processing.
struct FlatPoint {
    TrajIndex traj = 0;
    PointIndex idx = 0;
    Timestamp t = 0;
    double x = 0.0;
    double y = 0.0;
};

/// A cross-trajectory point pair within both join thresholds.
struct PointMatch {
    TrajIndex ref_traj = 0;
    PointIndex ref_idx = 0;
    TrajIndex other_traj = 0;
    PointIndex other_idx = 0;
    double dist = 0.0;
    double dt = 0.0;
};

/// Uniform grid over one partition's points with cell width eps_sp, so a
/// range query only touches the 3x3 neighborhood of a cell.
class GridIndex {
public:
    GridIndex(std::vector<FlatPoint> points, double cell_size);

    std::size_t size() const { return points_.size(); }
    const std::vector<FlatPoint>& points() const { return points_; }

    /// Calls fn for every indexed point within the 3x3 cell neighborhood
    /// of (x, y), in deterministic insertion order per cell.
    void for_each_candidate(double x, double y,
                            const std::function<void(const FlatPoint&)>& fn) const;

private:
    std::int64_t cell_of(double v) const;

    std::vector<FlatPoint> points_;
    double cell_size_ = 1.0;
    // cell key -> indices into points_, in insertion order
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells_;
};

/// Emits every cross-trajectory pair within eps_sp and eps_t, from the
/// perspective of each point for which `emit_for_ref` returns true
/// (per-partition halo ownership).
void point_join(const GridIndex& index, const JoinParams& params,
                const std::function<bool(const FlatPoint&)>& emit_for_ref,
                std::vector<PointMatch>& out);

/// Maximal run of reference points each matched against one other
/// trajectory, with both sides spanning at least delta_t.
struct MatchInterval {
    TrajIndex ref_traj = 0;
    TrajIndex other_traj = 0;
    PointIndex ref_first = 0;
    PointIndex ref_last = 0;
    PointIndex other_first = 0;
    PointIndex other_last = 0;
    /// Nearest matched point on the other side, one entry per reference
    /// point in [ref_first, ref_last].
    struct Nearest {
        PointIndex other_idx = 0;
        double dist = 0.0;
        double dt = 0.0;
    };
    std::vector<Nearest> nearest;
};

/// Builds match intervals for one reference trajectory from its deduplicated
/// point matches. A run breaks at the first unmatched reference point; a run
/// survives iff its reference-side duration and the spanned other-side
/// duration are both >= delta_t. Within a run each reference point records
/// its nearest match (ties: smaller dt, then smaller index).
std::vector<MatchInterval> refine_matches(const Dataset& ds, TrajIndex ref,
                                          std::vector<PointMatch> matches,
                                          const JoinParams& params);

} // namespace subtraj
