#pragma once

#include "subtraj/join.hpp"
#include "subtraj/segment.hpp"
#include "subtraj/types.hpp"

#include <unordered_map>
#include <vector>

namespace subtraj {

/// Matched-point partial sums of one subtrajectory against one other
/// trajectory, to be sliced by the other side's segmentation later.
struct STPRecord {
    SubId sub;
    TrajIndex other_traj = 0;
    struct Entry {
        PointIndex ref_idx = 0;   // point of the owning subtrajectory
        PointIndex other_idx = 0; // matched point on other_traj
        Timestamp other_t = 0;
        double dist = 0.0;
        double dt = 0.0;
    };
    std::vector<Entry> entries; // ordered by ref_idx
};

/// Slices a trajectory's match intervals at its cut points: every interval
/// contribution is attributed to the subtrajectory containing its reference
/// point. Returns one STP record per (subtrajectory, other trajectory) with
/// at least one matched point.
std::vector<STPRecord> emit_relations(const Dataset& ds, TrajIndex traj,
                                      const std::vector<Subtraj>& subs,
                                      const std::vector<MatchInterval>& intervals);

/// Read-only index of all STP records, keyed by (sub, other trajectory),
/// plus the global segmentation (sorted subtrajectory start indices per
/// trajectory) used to slice the other side.
class RelationIndex {
public:
    RelationIndex(const Dataset& ds, std::vector<std::vector<Subtraj>> subs_per_traj,
                  std::vector<std::vector<STPRecord>> stp_per_traj);

    const std::vector<Subtraj>& subs_of(TrajIndex t) const { return subs_[t]; }
    const std::vector<std::vector<Subtraj>>& all_subs() const { return subs_; }

    /// Subtrajectory of trajectory t containing point index idx.
    const Subtraj& sub_containing(TrajIndex t, PointIndex idx) const;

    const STPRecord* find(const SubId& sub, TrajIndex other) const;

    const Dataset& dataset() const { return ds_; }

private:
    struct KeyHash {
        std::size_t operator()(const std::pair<SubId, TrajIndex>& k) const {
            return SubIdHash{}(k.first) * 1000003u ^ k.second;
        }
    };
    const Dataset& ds_;
    std::vector<std::vector<Subtraj>> subs_;
    std::vector<STPRecord> records_;
    std::unordered_map<std::pair<SubId, TrajIndex>, const STPRecord*, KeyHash> by_key_;
};

/// One matched pair used by the weighted similarity.
struct MatchedPair {
    PointIndex a_idx = 0;
    PointIndex b_idx = 0;
    double dist = 0.0;
    double dt = 0.0;
};

/// Deterministic symmetric matching between two subtrajectories: the union
/// of both directions' nearest-match pairs, deduplicated, then reduced so
/// each point appears in at most one pair (smallest distance first; ties by
/// dt, then indices).
std::vector<MatchedPair> matched_pairs(const RelationIndex& idx, const Subtraj& a,
                                       const Subtraj& b);

/// Weighted LCSS similarity: sum of (1 - dist/eps_sp) over the matched
/// pairs, normalized by the shorter member's cardinality, clamped to [0,1].
double pair_similarity(const std::vector<MatchedPair>& pairs, PointIndex card_a,
                       PointIndex card_b, double eps_sp);

/// Adjacency list of one subtrajectory in one temporal partition.
struct SPRecord {
    SubId sub;
    struct Neighbor {
        SubId other;
        double sim = 0.0;
    };
    std::vector<Neighbor> adj; // sorted by other sub id
};

/// All-pairs similarity of one partition's subtrajectories; entries exist in
/// both directions whenever the similarity is positive.
std::vector<SPRecord> build_sp(const RelationIndex& idx, const std::vector<Subtraj>& partition_subs,
                               double eps_sp);

} // namespace subtraj
