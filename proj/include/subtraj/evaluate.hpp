#pragma once

#include "subtraj/pipeline.hpp"
#include "subtraj/synthetic.hpp"
#include "subtraj/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace subtraj {

struct Evaluation {
    double accuracy = 0.0;
    double f_measure = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    std::size_t labeled_points = 0;
    std::size_t correct_points = 0;
    std::size_t cluster_count = 0;
    /// label -> matched cluster representative (textual), "-" when unmatched
    std::map<std::string, std::string> label_to_cluster;
    std::vector<std::string> warnings;
};

/// Majority-mapping evaluation: each output subtrajectory takes the ground
/// truth label covering most of its points; clusters are matched one-to-one
/// to labels maximizing agreed points. Accuracy counts the points of
/// subtrajectories whose cluster matches their majority label over all
/// labeled points; F-measure is the harmonic mean of precision (over
/// clustered points) and recall (over labeled points).
Evaluation evaluate(const Dataset& ds,
                    const std::vector<PipelineResult::Assignment>& assignments,
                    const GroundTruth& truth);

} // namespace subtraj
