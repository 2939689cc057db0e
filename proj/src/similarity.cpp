#include "subtraj/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subtraj {

std::vector<STPRecord> emit_relations(const Dataset& ds, TrajIndex traj,
                                      const std::vector<Subtraj>& subs,
                                      const std::vector<MatchInterval>& intervals) {
    std::vector<STPRecord> out;
    if (subs.empty()) return out;

    auto sub_of = [&](PointIndex idx) -> const Subtraj& {
        // subs are consecutive and cover the whole index range
        auto it = std::upper_bound(subs.begin(), subs.end(), idx,
                                   [](PointIndex v, const Subtraj& s) { return v < s.ref.first; });
        return *std::prev(it);
    };

    struct KeyHash {
        std::size_t operator()(const std::pair<PointIndex, TrajIndex>& k) const {
            return (static_cast<std::size_t>(k.first) << 32) ^ k.second;
        }
    };
    std::unordered_map<std::pair<PointIndex, TrajIndex>, std::size_t, KeyHash> slot;

    for (const auto& mi : intervals) {
        const auto& other_points = ds.at(mi.other_traj).points;
        for (PointIndex i = mi.ref_first; i <= mi.ref_last; ++i) {
            const auto& near = mi.nearest[i - mi.ref_first];
            const auto& sub = sub_of(i);
            const auto key = std::make_pair(sub.ref.first, mi.other_traj);
            auto it = slot.find(key);
            if (it == slot.end()) {
                it = slot.emplace(key, out.size()).first;
                STPRecord rec;
                rec.sub = sub.id();
                rec.other_traj = mi.other_traj;
                out.push_back(std::move(rec));
            }
            out[it->second].entries.push_back(STPRecord::Entry{
                i, near.other_idx, other_points[near.other_idx].t, near.dist, near.dt});
        }
    }
    // deterministic record and entry order
    std::sort(out.begin(), out.end(), [](const STPRecord& a, const STPRecord& b) {
        if (a.sub != b.sub) return a.sub < b.sub;
        return a.other_traj < b.other_traj;
    });
    for (auto& rec : out)
        std::sort(rec.entries.begin(), rec.entries.end(),
                  [](const STPRecord::Entry& a, const STPRecord::Entry& b) {
                      return a.ref_idx < b.ref_idx;
                  });
    return out;
}

RelationIndex::RelationIndex(const Dataset& ds, std::vector<std::vector<Subtraj>> subs_per_traj,
                             std::vector<std::vector<STPRecord>> stp_per_traj)
    : ds_(ds), subs_(std::move(subs_per_traj)) {
    std::size_t total = 0;
    for (const auto& v : stp_per_traj) total += v.size();
    records_.reserve(total);
    for (auto& v : stp_per_traj)
        for (auto& rec : v) records_.push_back(std::move(rec));
    by_key_.reserve(records_.size());
    for (const auto& rec : records_)
        by_key_.emplace(std::make_pair(rec.sub, rec.other_traj), &rec);
}

const Subtraj& RelationIndex::sub_containing(TrajIndex t, PointIndex idx) const {
    const auto& subs = subs_[t];
    auto it = std::upper_bound(subs.begin(), subs.end(), idx,
                               [](PointIndex v, const Subtraj& s) { return v < s.ref.first; });
    if (it == subs.begin()) throw std::logic_error("point before first subtrajectory");
    return *std::prev(it);
}

const STPRecord* RelationIndex::find(const SubId& sub, TrajIndex other) const {
    auto it = by_key_.find(std::make_pair(sub, other));
    return it == by_key_.end() ? nullptr : it->second;
}

std::vector<MatchedPair> matched_pairs(const RelationIndex& idx, const Subtraj& a,
                                       const Subtraj& b) {
    std::vector<MatchedPair> candidates;
    auto collect = [&](const Subtraj& from, const Subtraj& to, bool swap_sides) {
        const STPRecord* rec = idx.find(from.id(), to.ref.traj);
        if (!rec) return;
        for (const auto& e : rec->entries) {
            if (e.other_idx < to.ref.first || e.other_idx > to.ref.last) continue;
            if (swap_sides)
                candidates.push_back(MatchedPair{e.other_idx, e.ref_idx, e.dist, e.dt});
            else
                candidates.push_back(MatchedPair{e.ref_idx, e.other_idx, e.dist, e.dt});
        }
    };
    collect(a, b, false);
    collect(b, a, true);

    std::sort(candidates.begin(), candidates.end(),
              [](const MatchedPair& x, const MatchedPair& y) {
                  if (x.dist != y.dist) return x.dist < y.dist;
                  if (x.dt != y.dt) return x.dt < y.dt;
                  if (x.a_idx != y.a_idx) return x.a_idx < y.a_idx;
                  return x.b_idx < y.b_idx;
              });

    // each point joins at most one pair: greedy by ascending distance
    std::vector<MatchedPair> pairs;
    std::vector<bool> a_used(a.card, false), b_used(b.card, false);
    for (const auto& c : candidates) {
        const auto ai = c.a_idx - a.ref.first;
        const auto bi = c.b_idx - b.ref.first;
        if (a_used[ai] || b_used[bi]) continue;
        a_used[ai] = true;
        b_used[bi] = true;
        pairs.push_back(c);
    }
    return pairs;
}

double pair_similarity(const std::vector<MatchedPair>& pairs, PointIndex card_a,
                       PointIndex card_b, double eps_sp) {
    if (pairs.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& p : pairs) sum += 1.0 - p.dist / eps_sp;
    const double denom = static_cast<double>(std::min(card_a, card_b));
    return std::clamp(sum / denom, 0.0, 1.0);
}

std::vector<SPRecord> build_sp(const RelationIndex& idx,
                               const std::vector<Subtraj>& partition_subs, double eps_sp) {
    const std::size_t n = partition_subs.size();
    std::vector<SPRecord> sp(n);
    for (std::size_t i = 0; i < n; ++i) sp[i].sub = partition_subs[i].id();

    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = partition_subs[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto& b = partition_subs[j];
            if (a.ref.traj == b.ref.traj) continue;
            const auto pairs = matched_pairs(idx, a, b);
            if (pairs.empty()) continue;
            const double sim = pair_similarity(pairs, a.card, b.card, eps_sp);
            if (sim <= 0.0) continue;
            sp[i].adj.push_back(SPRecord::Neighbor{b.id(), sim});
            sp[j].adj.push_back(SPRecord::Neighbor{a.id(), sim});
        }
    }
    for (auto& rec : sp)
        std::sort(rec.adj.begin(), rec.adj.end(),
                  [](const SPRecord::Neighbor& x, const SPRecord::Neighbor& y) {
                      return x.other < y.other;
                  });
    return sp;
}

} // namespace subtraj
