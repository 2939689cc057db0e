#pragma once

#include "subtraj/cluster.hpp"
#include "subtraj/csv.hpp"
#include "subtraj/join.hpp"
#include "subtraj/params.hpp"
#include "subtraj/partition.hpp"
#include "subtraj/segment.hpp"
#include "subtraj/similarity.hpp"
#include "subtraj/types.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace subtraj {

/// Full run configuration. Join thresholds may be given as absolutes or
/// relative to the dataset (fraction of the bounding-box diagonal for
/// eps_sp, multiples of the mean inter-sample gap for eps_t / delta_t);
/// absolutes win when both are set.
struct PipelineConfig {
    // relative switches
    std::optional<double> eps_sp_frac = 0.20;
    std::optional<double> eps_t_frac = 0.50;
    std::optional<double> delta_t_frac = 0.50;
    // absolute overrides
    std::optional<double> eps_sp;
    std::optional<double> eps_t;
    std::optional<double> delta_t;

    SegParams seg;
    Detector detector = Detector::Tsa1;
    ClusterParams cluster;

    std::size_t partitions = 4;
    unsigned workers = 0; // 0 = hardware parallelism
    double sample_fraction = 0.01;
    std::uint64_t seed = 1;
    bool dump_relations = false;

    std::string input_path;
    std::string output_dir;

    void validate() const;
    unsigned effective_workers() const;
};

/// Concrete join thresholds after relative resolution against the dataset.
JoinParams resolve_relative_params(const Dataset& ds, const PipelineConfig& cfg,
                                   std::vector<std::string>* warnings = nullptr);

struct StageTimings {
    double join_s = 0.0;
    double rse_s = 0.0; // refine + segmentation + relation emission
    double similarity_s = 0.0;
    double clustering_s = 0.0;
    double refine_s = 0.0;
    double total_s = 0.0;
    std::vector<double> join_per_partition_s;
    std::vector<double> similarity_per_partition_s;
};

struct PipelineResult {
    JoinParams join_params;
    TemporalPartitioning partitioning;
    std::shared_ptr<RelationIndex> relations;
    std::vector<PartitionClustering> partition_states;
    ClusteringResult clustering;
    double sscr_value = 0.0;
    RmseReport rmse_report;
    std::size_t lemma1_violations = 0;
    StageTimings timings;
    std::vector<std::string> warnings;

    /// Role of every subtrajectory in the final result, for evaluation.
    struct Assignment {
        SubtrajRef ref;
        bool outlier = false;
        SubId cluster; // representative id when not outlier
    };
    std::vector<Assignment> assignments() const;
};

/// Executes the staged computation: temporal repartitioning, per-partition
/// point join, group-by-trajectory refinement + segmentation + relation
/// emission, group-by-partition similarity and clustering, and the final
/// cross-partition refinement. Deterministic for a fixed (input, config,
/// seed) regardless of worker count.
PipelineResult run_pipeline(const Dataset& ds, const PipelineConfig& cfg);

/// Writes clusters.csv, outliers.csv, subs.csv, metrics.txt and timings.txt
/// (plus relation dumps when enabled) into cfg.output_dir.
void write_result_files(const Dataset& ds, const PipelineConfig& cfg,
                        const PipelineResult& result);

} // namespace subtraj
