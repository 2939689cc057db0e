#pragma once

#include "subtraj/join.hpp"
#include "subtraj/params.hpp"
#include "subtraj/types.hpp"

#include <vector>

namespace subtraj {

/// Per-point voting of one trajectory: raw values and the vector
/// normalized by the per-trajectory maximum.
struct VotingVector {
    std::vector<double> raw;
    std::vector<double> normalized;

    double trajectory_voting() const; // mean of raw
};

/// One vote per matching trajectory per point, weighted by proximity:
/// each interval covering point i contributes (1 - dist/eps_sp).
VotingVector compute_voting(std::size_t n_points, const std::vector<MatchInterval>& intervals,
                            double eps_sp);

/// Per point, the sorted deduplicated trajectory ids matched to it.
std::vector<std::vector<TrajIndex>> neighbor_lists(std::size_t n_points,
                                                   const std::vector<MatchInterval>& intervals);

/// Cut points as 0-based start indices of subtrajectories; always begins
/// with 0 (the external representation is 1-based).
using CutPoints = std::vector<PointIndex>;

/// Density-change detector: sliding window means over the normalized
/// voting vector; cuts where the window difference exceeds tau and the
/// running maximum so far.
CutPoints tsa1(const VotingVector& v, const SegParams& p);

/// Composition-change detector: Jaccard dissimilarity between the unions
/// of neighbor ids in the two windows; same cut rule as tsa1.
/// Two empty windows count as dissimilarity 0, exactly one empty as 1.
CutPoints tsa2(const std::vector<std::vector<TrajIndex>>& lists, const SegParams& p);

/// A subtrajectory produced by splitting, carrying its relational fields.
struct Subtraj {
    SubtrajRef ref;
    Timestamp t_start = 0;
    Timestamp t_end = 0;
    double voting = 0.0; // mean raw voting over the member points
    PointIndex card = 0;

    SubId id() const { return SubId{ref.traj, ref.first}; }
};

/// Splits a trajectory at the cut points into consecutive, non-overlapping
/// ranges covering every point.
std::vector<Subtraj> split(const Dataset& ds, TrajIndex traj, const CutPoints& cps,
                           const VotingVector& voting);

} // namespace subtraj
