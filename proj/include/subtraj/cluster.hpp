#pragma once

#include "subtraj/params.hpp"
#include "subtraj/segment.hpp"
#include "subtraj/similarity.hpp"
#include "subtraj/types.hpp"

#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

namespace subtraj {

struct Thresholds {
    double alpha_value = 0.0;
    double k_value = 0.0;
};

/// Partition-level thresholds: mean +/- sigma over the partition's
/// similarities (alpha) and subtrajectory votings (k). Empty SP yields
/// alpha_value = 0. Standard deviation is the population form.
Thresholds resolve_thresholds(const std::vector<Subtraj>& st, const std::vector<SPRecord>& sp,
                              const ClusterParams& cp);

enum class Role { Representative, Member, Outlier };

/// Outcome of clustering one temporal partition.
struct PartitionClustering {
    std::uint32_t pid = 0;
    Thresholds thresholds;
    std::vector<SubId> representatives; // in promotion order
    struct Membership {
        SubId rep;
        double sim = 0.0;
    };
    // every subtrajectory of the partition maps to exactly one state
    std::unordered_map<SubId, Role, SubIdHash> roles;
    std::unordered_map<SubId, Membership, SubIdHash> memberships; // Member only
};

/// Greedy representative-based clustering: traverse subtrajectories by
/// descending voting (ties by ascending sub id); a subtrajectory already
/// serving as representative or member is skipped; below-k ones become
/// outliers; otherwise it is promoted and its adjacency is scanned, admitting
/// unassigned neighbors with sim >= alpha and stealing members that improve.
PartitionClustering cluster_partition(std::uint32_t pid, const std::vector<Subtraj>& st,
                                      const std::vector<SPRecord>& sp, const Thresholds& th);

/// Final clustering after cross-partition refinement.
struct ClusteringResult {
    struct Member {
        SubId sub;
        double sim = 0.0;
        std::uint32_t pid = 0; // partition whose admission survived
    };
    struct Cluster {
        SubId representative;
        std::vector<Member> members; // representative not repeated here
    };
    std::vector<Cluster> clusters; // ordered by representative id
    std::vector<SubId> outliers;   // sorted
    std::vector<Thresholds> partition_thresholds;
};

/// Reconciles the per-partition states of subtrajectories replicated into
/// several partitions by sweeping consecutive partition pairs, then emits the
/// merged global clusters and the deduplicated outlier set.
ClusteringResult refine_results(const std::vector<PartitionClustering>& parts,
                                const std::unordered_map<SubId, bool, SubIdHash>& intersecting);

/// Sum of member-to-representative similarities over all clusters.
double sscr(const ClusteringResult& result);

struct RmseReport {
    double value = 0.0;
    std::size_t pair_count = 0;
};

/// Root mean square of matched-pair distances between each representative
/// and its members.
RmseReport rmse(const ClusteringResult& result, const RelationIndex& idx);

struct Lemma1Violation {
    SubId representative;
    SubId member;
    double mean_dist = 0.0;
    double bound = 0.0;
};

/// For every full-length matching between a representative and a member,
/// checks mean distance <= eps_sp * (1 - alpha_value) + 1e-9 using the
/// thresholds of the partition that admitted the member.
std::vector<Lemma1Violation> check_lemma1(const ClusteringResult& result,
                                          const RelationIndex& idx, double eps_sp);

} // namespace subtraj
