#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace subtraj {

using TrajIndex = std::uint32_t;
using PointIndex = std::uint32_t;
using Timestamp = std::int64_t;

/// A single timestamped sample of one moving object.
struct Point {
    Timestamp t = 0;
    double x = 0.0;
    double y = 0.0;
};

inline double spatial_dist(const Point& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

inline double temporal_dist(const Point& a, const Point& b) {
    return static_cast<double>(a.t >= b.t ? a.t - b.t : b.t - a.t);
}

/// Time-ordered samples of one moving object. Points are strictly
/// increasing in t; duplicates are rejected at ingestion.
struct Trajectory {
    std::string id;
    std::vector<Point> points;

    std::size_t size() const { return points.size(); }
    Timestamp start_time() const { return points.front().t; }
    Timestamp end_time() const { return points.back().t; }
    /// Duration between first and last sample.
    Timestamp duration() const { return end_time() - start_time(); }
};

/// The full input: trajectories sorted by id, with an id -> index map.
class Dataset {
public:
    Dataset() = default;
    explicit Dataset(std::vector<Trajectory> trajs);

    const std::vector<Trajectory>& trajectories() const { return trajs_; }
    const Trajectory& at(TrajIndex i) const { return trajs_[i]; }
    std::size_t size() const { return trajs_.size(); }
    bool empty() const { return trajs_.empty(); }
    std::size_t total_points() const;

    /// Index of a trajectory id, or throws if unknown.
    TrajIndex index_of(const std::string& id) const;

    Timestamp min_time() const;
    Timestamp max_time() const;

    struct Extent {
        double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
        double diagonal() const {
            return std::sqrt((max_x - min_x) * (max_x - min_x) +
                             (max_y - min_y) * (max_y - min_y));
        }
    };
    Extent bounding_box() const;

    /// Mean gap between consecutive samples of the same trajectory.
    double mean_sample_gap() const;

private:
    std::vector<Trajectory> trajs_;
    std::unordered_map<std::string, TrajIndex> index_;
};

/// Contiguous index range [first, last] of a parent trajectory,
/// 0-based inclusive. The external textual id uses 1-based indices.
struct SubtrajRef {
    TrajIndex traj = 0;
    PointIndex first = 0;
    PointIndex last = 0;

    PointIndex card() const { return last - first + 1; }
    bool operator==(const SubtrajRef&) const = default;
};

/// Key identifying a subtrajectory uniquely: (trajectory, first point index).
struct SubId {
    TrajIndex traj = 0;
    PointIndex first = 0;

    bool operator==(const SubId&) const = default;
    auto operator<=>(const SubId&) const = default;
};

struct SubIdHash {
    std::size_t operator()(const SubId& s) const {
        return (static_cast<std::size_t>(s.traj) << 32) ^ s.first;
    }
};

/// Textual form "trajid:first" with a 1-based first index.
std::string sub_id_string(const Dataset& ds, const SubId& id);

} // namespace subtraj
