#include "subtraj/join.hpp"

#include <algorithm>
#include <cmath>

namespace subtraj {

namespace {

std::uint64_t pack_cell(std::int64_t cx, std::int64_t cy) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(cx)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(cy));
}

} // namespace

GridIndex::GridIndex(std::vector<FlatPoint> points, double cell_size)
    : points_(std::move(points)), cell_size_(cell_size) {
    if (!(cell_size_ > 0)) throw std::invalid_argument("grid cell size must be > 0");
    cells_.reserve(points_.size());
    for (std::uint32_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        cells_[pack_cell(cell_of(p.x), cell_of(p.y))].push_back(i);
    }
}

std::int64_t GridIndex::cell_of(double v) const {
    return static_cast<std::int64_t>(std::floor(v / cell_size_));
}

void GridIndex::for_each_candidate(double x, double y,
                                   const std::function<void(const FlatPoint&)>& fn) const {
    const std::int64_t cx = cell_of(x);
    const std::int64_t cy = cell_of(y);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
        for (std::int64_t dy = -1; dy <= 1; ++dy) {
            auto it = cells_.find(pack_cell(cx + dx, cy + dy));
            if (it == cells_.end()) continue;
            for (const auto i : it->second) fn(points_[i]);
        }
    }
}

void point_join(const GridIndex& index, const JoinParams& params,
                const std::function<bool(const FlatPoint&)>& emit_for_ref,
                std::vector<PointMatch>& out) {
    for (const auto& ref : index.points()) {
        if (!emit_for_ref(ref)) continue;
        index.for_each_candidate(ref.x, ref.y, [&](const FlatPoint& other) {
            if (other.traj == ref.traj) return;
            const double dt = static_cast<double>(
                ref.t >= other.t ? ref.t - other.t : other.t - ref.t);
            if (dt > params.eps_t) return;
            const double dx = ref.x - other.x;
            const double dy = ref.y - other.y;
            const double dist = std::sqrt(dx * dx + dy * dy);
            if (dist > params.eps_sp) return;
            out.push_back(PointMatch{ref.traj, ref.idx, other.traj, other.idx, dist, dt});
        });
    }
}

std::vector<MatchInterval> refine_matches(const Dataset& ds, TrajIndex ref,
                                          std::vector<PointMatch> matches,
                                          const JoinParams& params) {
    // group by other trajectory, then by reference point
    std::sort(matches.begin(), matches.end(), [](const PointMatch& a, const PointMatch& b) {
        if (a.other_traj != b.other_traj) return a.other_traj < b.other_traj;
        if (a.ref_idx != b.ref_idx) return a.ref_idx < b.ref_idx;
        return a.other_idx < b.other_idx;
    });
    matches.erase(std::unique(matches.begin(), matches.end(),
                              [](const PointMatch& a, const PointMatch& b) {
                                  return a.other_traj == b.other_traj &&
                                         a.ref_idx == b.ref_idx && a.other_idx == b.other_idx;
                              }),
                  matches.end());

    const auto& ref_points = ds.at(ref).points;
    std::vector<MatchInterval> out;

    std::size_t i = 0;
    while (i < matches.size()) {
        const TrajIndex other = matches[i].other_traj;
        std::size_t j = i;
        while (j < matches.size() && matches[j].other_traj == other) ++j;
        const auto& other_points = ds.at(other).points;

        // walk maximal runs of consecutive matched reference points
        std::size_t k = i;
        while (k < j) {
            const PointIndex run_first = matches[k].ref_idx;
            PointIndex run_last = run_first;
            PointIndex span_min = matches[k].other_idx;
            PointIndex span_max = matches[k].other_idx;
            std::vector<MatchInterval::Nearest> nearest;

            std::size_t m = k;
            PointIndex expect = run_first;
            while (m < j && matches[m].ref_idx == expect) {
                MatchInterval::Nearest best{matches[m].other_idx, matches[m].dist,
                                            matches[m].dt};
                span_min = std::min(span_min, matches[m].other_idx);
                span_max = std::max(span_max, matches[m].other_idx);
                ++m;
                while (m < j && matches[m].ref_idx == expect) {
                    span_min = std::min(span_min, matches[m].other_idx);
                    span_max = std::max(span_max, matches[m].other_idx);
                    const bool better =
                        matches[m].dist < best.dist ||
                        (matches[m].dist == best.dist &&
                         (matches[m].dt < best.dt ||
                          (matches[m].dt == best.dt && matches[m].other_idx < best.other_idx)));
                    if (better)
                        best = MatchInterval::Nearest{matches[m].other_idx, matches[m].dist,
                                                      matches[m].dt};
                    ++m;
                }
                nearest.push_back(best);
                run_last = expect;
                ++expect;
            }
            k = m;

            const double ref_span = static_cast<double>(ref_points[run_last].t -
                                                        ref_points[run_first].t);
            const double other_span = static_cast<double>(other_points[span_max].t -
                                                          other_points[span_min].t);
            if (ref_span >= params.delta_t && other_span >= params.delta_t) {
                MatchInterval mi;
                mi.ref_traj = ref;
                mi.other_traj = other;
                mi.ref_first = run_first;
                mi.ref_last = run_last;
                mi.other_first = span_min;
                mi.other_last = span_max;
                mi.nearest = std::move(nearest);
                out.push_back(std::move(mi));
            }
        }
        i = j;
    }
    return out;
}

} // namespace subtraj
