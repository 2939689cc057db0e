#include "subtraj/evaluate.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace subtraj {

namespace {

struct SubInfo {
    SubId cluster;     // representative id, valid when !outlier
    bool outlier = true;
    std::string majority_label; // empty when no ground truth covers it
    std::size_t points = 0;
};

} // namespace

Evaluation evaluate(const Dataset& ds,
                    const std::vector<PipelineResult::Assignment>& assignments,
                    const GroundTruth& truth) {
    Evaluation ev;
    if (assignments.empty()) {
        ev.warnings.push_back("empty clustering result");
        return ev;
    }

    // label coverage per trajectory
    std::map<std::string, std::vector<const GroundTruthEntry*>> per_traj;
    for (const auto& e : truth.entries) per_traj[e.traj_id].push_back(&e);

    std::vector<SubInfo> subs;
    subs.reserve(assignments.size());
    std::set<std::string> labels;
    for (const auto& e : truth.entries) labels.insert(e.label);

    for (const auto& a : assignments) {
        SubInfo info;
        info.cluster = a.cluster;
        info.outlier = a.outlier;
        info.points = a.ref.card();
        const auto it = per_traj.find(ds.at(a.ref.traj).id);
        if (it != per_traj.end()) {
            std::map<std::string, std::size_t> overlap;
            for (const auto* e : it->second) {
                const auto lo = std::max(a.ref.first, e->first);
                const auto hi = std::min(a.ref.last, e->last);
                if (lo <= hi) overlap[e->label] += hi - lo + 1;
            }
            std::size_t best = 0;
            for (const auto& [label, count] : overlap) {
                if (count > best) {
                    best = count;
                    info.majority_label = label;
                }
            }
        }
        subs.push_back(std::move(info));
    }

    // agreement matrix: cluster -> label -> points
    std::map<SubId, std::map<std::string, std::size_t>> agreement;
    std::map<SubId, std::size_t> cluster_points;
    std::size_t labeled_points = 0;
    for (const auto& s : subs) {
        if (s.majority_label.empty()) continue;
        labeled_points += s.points;
        if (s.outlier) continue;
        agreement[s.cluster][s.majority_label] += s.points;
        cluster_points[s.cluster] += s.points;
    }
    ev.labeled_points = labeled_points;
    ev.cluster_count = 0;
    {
        std::set<SubId> distinct;
        for (const auto& s : subs)
            if (!s.outlier) distinct.insert(s.cluster);
        ev.cluster_count = distinct.size();
    }
    if (labeled_points == 0) {
        ev.warnings.push_back("ground truth covers no output subtrajectory");
        return ev;
    }

    // optimal one-to-one label -> cluster assignment (greedy exhaustive over
    // labels; the label count is small)
    std::vector<std::string> label_list(labels.begin(), labels.end());
    std::vector<SubId> cluster_list;
    for (const auto& [c, _] : agreement) cluster_list.push_back(c);

    std::map<std::string, SubId> best_assignment;
    std::size_t best_agreed = 0;
    std::vector<int> chosen(label_list.size(), -1);
    std::vector<bool> used(cluster_list.size(), false);

    // branch over labels in order, tracking the best total agreement
    auto recurse = [&](auto&& self, std::size_t li, std::size_t agreed) -> void {
        if (li == label_list.size()) {
            if (agreed > best_agreed || best_assignment.empty()) {
                best_agreed = agreed;
                best_assignment.clear();
                for (std::size_t i = 0; i < label_list.size(); ++i)
                    if (chosen[i] >= 0)
                        best_assignment[label_list[i]] = cluster_list[chosen[i]];
            }
            return;
        }
        // leave this label unmatched
        chosen[li] = -1;
        self(self, li + 1, agreed);
        for (std::size_t ci = 0; ci < cluster_list.size(); ++ci) {
            if (used[ci]) continue;
            const auto it = agreement[cluster_list[ci]].find(label_list[li]);
            if (it == agreement[cluster_list[ci]].end()) continue;
            used[ci] = true;
            chosen[li] = static_cast<int>(ci);
            self(self, li + 1, agreed + it->second);
            chosen[li] = -1;
            used[ci] = false;
        }
    };
    recurse(recurse, 0, 0);

    std::map<SubId, std::string> cluster_to_label;
    for (const auto& [label, cluster] : best_assignment) {
        cluster_to_label[cluster] = label;
        ev.label_to_cluster[label] = sub_id_string(ds, cluster);
    }
    for (const auto& l : label_list)
        if (!ev.label_to_cluster.count(l)) ev.label_to_cluster[l] = "-";

    // accuracy over all ground-truth labeled points; precision over
    // clustered ones
    std::size_t correct = 0;
    std::size_t clustered_points = 0;
    for (const auto& s : subs) {
        if (s.majority_label.empty()) continue;
        if (s.outlier) continue;
        clustered_points += s.points;
        const auto it = cluster_to_label.find(s.cluster);
        if (it != cluster_to_label.end() && it->second == s.majority_label)
            correct += s.points;
    }
    ev.correct_points = correct;
    ev.accuracy = static_cast<double>(correct) / static_cast<double>(labeled_points);
    ev.precision = clustered_points == 0
                       ? 0.0
                       : static_cast<double>(correct) / static_cast<double>(clustered_points);
    ev.recall = ev.accuracy;
    ev.f_measure = (ev.precision + ev.recall) == 0.0
                       ? 0.0
                       : 2.0 * ev.precision * ev.recall / (ev.precision + ev.recall);
    return ev;
}

} // namespace subtraj
