#include "subtraj/types.hpp"

#include <algorithm>

namespace subtraj {

Dataset::Dataset(std::vector<Trajectory> trajs) : trajs_(std::move(trajs)) {
    std::sort(trajs_.begin(), trajs_.end(),
              [](const Trajectory& a, const Trajectory& b) { return a.id < b.id; });
    index_.reserve(trajs_.size());
    for (TrajIndex i = 0; i < trajs_.size(); ++i) {
        const auto& tr = trajs_[i];
        if (tr.points.empty())
            throw std::invalid_argument("trajectory " + tr.id + " has no points");
        for (std::size_t k = 1; k < tr.points.size(); ++k) {
            if (tr.points[k].t <= tr.points[k - 1].t)
                throw std::invalid_argument("trajectory " + tr.id +
                                            " is not strictly increasing in t");
        }
        if (!index_.emplace(tr.id, i).second)
            throw std::invalid_argument("duplicate trajectory id " + tr.id);
    }
}

std::size_t Dataset::total_points() const {
    std::size_t n = 0;
    for (const auto& tr : trajs_) n += tr.points.size();
    return n;
}

TrajIndex Dataset::index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw std::out_of_range("unknown trajectory id " + id);
    return it->second;
}

Timestamp Dataset::min_time() const {
    Timestamp m = std::numeric_limits<Timestamp>::max();
    for (const auto& tr : trajs_) m = std::min(m, tr.start_time());
    return m;
}

Timestamp Dataset::max_time() const {
    Timestamp m = std::numeric_limits<Timestamp>::min();
    for (const auto& tr : trajs_) m = std::max(m, tr.end_time());
    return m;
}

Dataset::Extent Dataset::bounding_box() const {
    Extent e;
    e.min_x = e.min_y = std::numeric_limits<double>::infinity();
    e.max_x = e.max_y = -std::numeric_limits<double>::infinity();
    for (const auto& tr : trajs_) {
        for (const auto& p : tr.points) {
            e.min_x = std::min(e.min_x, p.x);
            e.min_y = std::min(e.min_y, p.y);
            e.max_x = std::max(e.max_x, p.x);
            e.max_y = std::max(e.max_y, p.y);
        }
    }
    if (trajs_.empty()) e = Extent{};
    return e;
}

double Dataset::mean_sample_gap() const {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& tr : trajs_) {
        for (std::size_t k = 1; k < tr.points.size(); ++k) {
            sum += static_cast<double>(tr.points[k].t - tr.points[k - 1].t);
            ++count;
        }
    }
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

std::string sub_id_string(const Dataset& ds, const SubId& id) {
    return ds.at(id.traj).id + ":" + std::to_string(id.first + 1);
}

} // namespace subtraj
