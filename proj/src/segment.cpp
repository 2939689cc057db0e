#include "subtraj/segment.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace subtraj {

double VotingVector::trajectory_voting() const {
    if (raw.empty()) return 0.0;
    return std::accumulate(raw.begin(), raw.end(), 0.0) / static_cast<double>(raw.size());
}

VotingVector compute_voting(std::size_t n_points, const std::vector<MatchInterval>& intervals,
                            double eps_sp) {
    VotingVector v;
    v.raw.assign(n_points, 0.0);
    for (const auto& mi : intervals) {
        for (PointIndex i = mi.ref_first; i <= mi.ref_last; ++i) {
            const auto& near = mi.nearest[i - mi.ref_first];
            v.raw[i] += 1.0 - near.dist / eps_sp;
        }
    }
    const double max_raw = v.raw.empty() ? 0.0 : *std::max_element(v.raw.begin(), v.raw.end());
    v.normalized.assign(n_points, 0.0);
    if (max_raw > 0.0)
        for (std::size_t i = 0; i < n_points; ++i) v.normalized[i] = v.raw[i] / max_raw;
    return v;
}

std::vector<std::vector<TrajIndex>> neighbor_lists(std::size_t n_points,
                                                   const std::vector<MatchInterval>& intervals) {
    std::vector<std::vector<TrajIndex>> lists(n_points);
    for (const auto& mi : intervals)
        for (PointIndex i = mi.ref_first; i <= mi.ref_last; ++i)
            lists[i].push_back(mi.other_traj);
    for (auto& l : lists) {
        std::sort(l.begin(), l.end());
        l.erase(std::unique(l.begin(), l.end()), l.end());
    }
    return lists;
}

namespace {

/// Shared sliding-window cut rule: walk the interior positions, cut where
/// the window difference exceeds tau, the running maximum of the
/// differences seen so far, and is locally maximized (the first point of a
/// maximal excursion peak, so a rising slope yields one cut, not one per
/// sample).
CutPoints detect_cuts(std::size_t n, unsigned w,
                      double tau, const std::function<double(std::size_t)>& diff_at) {
    CutPoints cp{0};
    if (n < 2 * static_cast<std::size_t>(w) + 2) return cp;

    // 0-based positions c correspond to window split points: the left
    // window covers [c-w, c-1], the right one [c, c+w-1]
    const std::size_t first = w;
    const std::size_t last = n - w - 2;
    std::vector<double> d(last - first + 1);
    for (std::size_t c = first; c <= last; ++c) d[c - first] = diff_at(c);

    double d_max = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const bool rising_edge = i == 0 || d[i] > d[i - 1];
        const bool falling_next = i + 1 == d.size() || d[i] >= d[i + 1];
        if (d[i] > tau && d[i] >= d_max && rising_edge && falling_next)
            cp.push_back(static_cast<PointIndex>(first + i));
        d_max = std::max(d_max, d[i]);
    }
    return cp;
}

} // namespace

CutPoints tsa1(const VotingVector& v, const SegParams& p) {
    p.validate();
    const auto& vec = v.normalized;
    const std::size_t n = vec.size();
    const unsigned w = p.w;

    // prefix sums for O(1) window means
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + vec[i];
    auto window_mean = [&](std::size_t first, std::size_t last) {
        return (prefix[last + 1] - prefix[first]) / static_cast<double>(last - first + 1);
    };

    return detect_cuts(n, w, p.tau, [&](std::size_t c) {
        const double m1 = window_mean(c - w, c - 1);
        const double m2 = window_mean(c, c + w - 1);
        return std::abs(m1 - m2);
    });
}

CutPoints tsa2(const std::vector<std::vector<TrajIndex>>& lists, const SegParams& p) {
    p.validate();
    const std::size_t n = lists.size();
    const unsigned w = p.w;

    auto window_union = [&](std::size_t first, std::size_t last) {
        std::vector<TrajIndex> u;
        for (std::size_t i = first; i <= last; ++i)
            u.insert(u.end(), lists[i].begin(), lists[i].end());
        std::sort(u.begin(), u.end());
        u.erase(std::unique(u.begin(), u.end()), u.end());
        return u;
    };

    return detect_cuts(n, w, p.tau, [&](std::size_t c) {
        const auto l1 = window_union(c - w, c - 1);
        const auto l2 = window_union(c, c + w - 1);
        if (l1.empty() && l2.empty()) return 0.0;
        std::vector<TrajIndex> inter;
        std::set_intersection(l1.begin(), l1.end(), l2.begin(), l2.end(),
                              std::back_inserter(inter));
        const double uni = static_cast<double>(l1.size() + l2.size() - inter.size());
        return 1.0 - static_cast<double>(inter.size()) / uni;
    });
}

std::vector<Subtraj> split(const Dataset& ds, TrajIndex traj, const CutPoints& cps,
                           const VotingVector& voting) {
    const auto& points = ds.at(traj).points;
    const std::size_t n = points.size();
    std::vector<Subtraj> subs;
    subs.reserve(cps.size());
    for (std::size_t k = 0; k < cps.size(); ++k) {
        const PointIndex first = cps[k];
        const PointIndex last = (k + 1 < cps.size()) ? cps[k + 1] - 1
                                                     : static_cast<PointIndex>(n - 1);
        Subtraj s;
        s.ref = SubtrajRef{traj, first, last};
        s.t_start = points[first].t;
        s.t_end = points[last].t;
        s.card = s.ref.card();
        double sum = 0.0;
        for (PointIndex i = first; i <= last; ++i) sum += voting.raw[i];
        s.voting = sum / static_cast<double>(s.card);
        subs.push_back(s);
    }
    return subs;
}

} // namespace subtraj
