#include "subtraj/config.hpp"
#include "subtraj/csv.hpp"
#include "subtraj/evaluate.hpp"
#include "subtraj/pipeline.hpp"
#include "subtraj/synthetic.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitDataError = 2;

int cmd_generate(const std::string& scenario, unsigned replication, double noise,
                 std::uint64_t seed, const std::string& out_dir) {
    const auto scene = subtraj::generate_synthetic(scenario, replication, noise, seed);
    std::filesystem::create_directories(out_dir);
    subtraj::write_csv(scene.dataset, out_dir + "/dataset.csv");
    scene.truth.save(out_dir + "/truth.csv");
    subtraj::write_manifest(scene.dataset, subtraj::IngestReport{}, out_dir + "/manifest.json");
    std::cout << "wrote " << scene.dataset.size() << " trajectories ("
              << scene.dataset.total_points() << " points) to " << out_dir << "\n";
    return kExitOk;
}

int cmd_run(subtraj::PipelineConfig cfg) {
    if (cfg.input_path.empty() || cfg.output_dir.empty())
        throw CLI::ValidationError("--in and --out are required");
    cfg.validate();

    const auto ingest = subtraj::ingest_csv(cfg.input_path);
    for (const auto& w : ingest.report.warnings) std::cerr << "warning: " << w << "\n";
    if (ingest.dataset.empty()) {
        std::cerr << "error: no trajectories in " << cfg.input_path << "\n";
        return kExitDataError;
    }

    const auto result = subtraj::run_pipeline(ingest.dataset, cfg);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    subtraj::write_result_files(ingest.dataset, cfg, result);
    subtraj::write_manifest(ingest.dataset, ingest.report, cfg.output_dir + "/manifest.json");

    std::cout << "clusters = " << result.clustering.clusters.size() << "\n"
              << "outliers = " << result.clustering.outliers.size() << "\n"
              << "sscr = " << result.sscr_value << "\n"
              << "rmse = " << result.rmse_report.value << "\n"
              << "lemma1_violations = " << result.lemma1_violations << "\n"
              << "eps_sp = " << result.join_params.eps_sp << "\n"
              << "eps_t = " << result.join_params.eps_t << "\n"
              << "delta_t = " << result.join_params.delta_t << "\n";
    return kExitOk;
}

/// Reads the result directory written by `run` back into evaluation inputs.
int cmd_evaluate(const std::string& result_dir, const std::string& truth_path) {
    const auto truth = subtraj::GroundTruth::load(truth_path);

    std::ifstream subs_in(result_dir + "/subs.csv");
    if (!subs_in) {
        std::cerr << "error: missing " << result_dir << "/subs.csv\n";
        return kExitDataError;
    }

    // rebuild a minimal dataset view: trajectory ids and index ranges
    struct SubRow {
        std::string sub_id, traj_id;
        unsigned first = 0, last = 0;
    };
    std::vector<SubRow> rows;
    std::string line;
    std::getline(subs_in, line);
    while (std::getline(subs_in, line)) {
        if (line.empty()) continue;
        SubRow r;
        std::stringstream ss(line);
        std::string first, last, rest;
        std::getline(ss, r.sub_id, ',');
        std::getline(ss, r.traj_id, ',');
        std::getline(ss, first, ',');
        std::getline(ss, last, ',');
        r.first = static_cast<unsigned>(std::stoul(first));
        r.last = static_cast<unsigned>(std::stoul(last));
        rows.push_back(std::move(r));
    }

    std::unordered_map<std::string, std::string> member_cluster; // sub id -> cluster id
    {
        std::ifstream in(result_dir + "/clusters.csv");
        if (!in) {
            std::cerr << "error: missing " << result_dir << "/clusters.csv\n";
            return kExitDataError;
        }
        std::getline(in, line);
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::stringstream ss(line);
            std::string cluster_id, rep, member;
            std::getline(ss, cluster_id, ',');
            std::getline(ss, rep, ',');
            std::getline(ss, member, ',');
            member_cluster[member] = cluster_id;
        }
    }

    // synthesize trajectories long enough for the evaluator's index math
    std::unordered_map<std::string, unsigned> traj_len;
    for (const auto& r : rows)
        traj_len[r.traj_id] = std::max(traj_len[r.traj_id], r.last);
    std::vector<subtraj::Trajectory> trajs;
    for (const auto& [id, n] : traj_len) {
        subtraj::Trajectory tr;
        tr.id = id;
        tr.points.resize(n);
        for (unsigned i = 0; i < n; ++i) tr.points[i] = subtraj::Point{i, 0.0, 0.0};
        trajs.push_back(std::move(tr));
    }
    subtraj::Dataset ds(std::move(trajs));

    std::unordered_map<std::string, subtraj::SubId> cluster_key;
    std::vector<subtraj::PipelineResult::Assignment> assignments;
    for (const auto& r : rows) {
        subtraj::PipelineResult::Assignment a;
        a.ref.traj = ds.index_of(r.traj_id);
        a.ref.first = r.first - 1;
        a.ref.last = r.last - 1;
        const auto it = member_cluster.find(r.sub_id);
        a.outlier = it == member_cluster.end();
        if (!a.outlier) {
            auto [ck, inserted] = cluster_key.try_emplace(
                it->second, subtraj::SubId{0, static_cast<subtraj::PointIndex>(
                                                  cluster_key.size())});
            (void)inserted;
            a.cluster = ck->second;
        }
        assignments.push_back(a);
    }

    const auto ev = subtraj::evaluate(ds, assignments, truth);
    for (const auto& w : ev.warnings) std::cerr << "warning: " << w << "\n";
    std::printf("accuracy = %.6f\n", ev.accuracy);
    std::printf("f_measure = %.6f\n", ev.f_measure);
    std::printf("precision = %.6f\n", ev.precision);
    std::printf("recall = %.6f\n", ev.recall);
    std::printf("clusters = %zu\n", ev.cluster_count);
    for (const auto& [label, cluster] : ev.label_to_cluster)
        std::printf("label %s -> %s\n", label.c_str(), cluster.c_str());
    return kExitOk;
}

int cmd_partition(const std::string& input, std::size_t partitions, double sample_fraction,
                  std::uint64_t seed, const std::string& out_path) {
    const auto ingest = subtraj::ingest_csv(input);
    if (ingest.dataset.empty()) {
        std::cerr << "error: no trajectories in " << input << "\n";
        return kExitDataError;
    }
    const auto tp =
        subtraj::build_partitioning(ingest.dataset, partitions, sample_fraction, seed);
    tp.save(out_path);
    std::cout << "wrote " << tp.partition_count() << " partitions to " << out_path << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"subtraj: partition-parallel subtrajectory clustering"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "emit a synthetic scene with ground truth");
    std::string scenario = "star";
    unsigned replication = 1;
    double noise = 0.0;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    gen->add_option("--scenario", scenario, "star|tsa")->capture_default_str();
    gen->add_option("--replication", replication, "objects per route")->capture_default_str();
    gen->add_option("--noise", noise, "per-point jitter, fraction of segment length")
        ->capture_default_str();
    gen->add_option("--seed", gen_seed, "rng seed")->capture_default_str();
    gen->add_option("--out", gen_out, "output directory")->required();

    // run
    auto* run = app.add_subcommand("run", "run the clustering pipeline");
    std::string config_path, in_path, out_dir;
    std::optional<double> eps_sp, eps_t, delta_t, tau, alpha_sigma, k_sigma;
    std::optional<unsigned> w_opt, workers;
    std::optional<std::size_t> partitions;
    std::optional<std::string> detector;
    std::optional<std::uint64_t> run_seed;
    bool dump_relations = false;
    run->add_option("--config", config_path, "key = value config file");
    run->add_option("--in", in_path, "input CSV");
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--eps-sp", eps_sp, "absolute spatial threshold");
    run->add_option("--eps-t", eps_t, "absolute temporal tolerance (s)");
    run->add_option("--delta-t", delta_t, "absolute minimum match duration (s)");
    run->add_option("--w", w_opt, "segmentation window (samples)");
    run->add_option("--tau", tau, "segmentation threshold");
    run->add_option("--alpha-sigma", alpha_sigma, "similarity threshold (sigmas)");
    run->add_option("--k-sigma", k_sigma, "voting threshold (sigmas)");
    run->add_option("--partitions", partitions, "temporal partition count");
    run->add_option("--workers", workers, "worker threads (0 = hardware)");
    run->add_option("--detector", detector, "tsa1|tsa2");
    run->add_option("--seed", run_seed, "rng seed");
    run->add_flag("--dump-relations", dump_relations, "dump voting/cuts/sp relations");

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "compare a result directory to ground truth");
    std::string result_dir, truth_path;
    eval->add_option("--result", result_dir, "result directory from `run`")->required();
    eval->add_option("--truth", truth_path, "ground truth CSV")->required();

    // partition
    auto* part = app.add_subcommand("partition", "build and save a temporal partitioning");
    std::string part_in, part_out;
    std::size_t part_count = 4;
    double part_fraction = 0.01;
    std::uint64_t part_seed = 1;
    part->add_option("--in", part_in, "input CSV")->required();
    part->add_option("-P,--partitions", part_count, "partition count")->required();
    part->add_option("--sample-fraction", part_fraction, "sampling rate")
        ->capture_default_str();
    part->add_option("--seed", part_seed, "rng seed")->capture_default_str();
    part->add_option("--out", part_out, "output borders file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_generate(scenario, replication, noise, gen_seed, gen_out);
        if (run->parsed()) {
            subtraj::PipelineConfig cfg;
            if (!config_path.empty()) cfg = subtraj::load_config(config_path);
            if (!in_path.empty()) cfg.input_path = in_path;
            if (!out_dir.empty()) cfg.output_dir = out_dir;
            if (eps_sp) cfg.eps_sp = *eps_sp;
            if (eps_t) cfg.eps_t = *eps_t;
            if (delta_t) cfg.delta_t = *delta_t;
            if (w_opt) cfg.seg.w = *w_opt;
            if (tau) cfg.seg.tau = *tau;
            if (alpha_sigma) cfg.cluster.alpha_sigma = *alpha_sigma;
            if (k_sigma) cfg.cluster.k_sigma = *k_sigma;
            if (partitions) cfg.partitions = *partitions;
            if (workers) cfg.workers = *workers;
            if (detector) cfg.detector = subtraj::detector_from_string(*detector);
            if (run_seed) cfg.seed = *run_seed;
            if (dump_relations) cfg.dump_relations = true;
            return cmd_run(std::move(cfg));
        }
        if (eval->parsed()) return cmd_evaluate(result_dir, truth_path);
        if (part->parsed())
            return cmd_partition(part_in, part_count, part_fraction, part_seed, part_out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const CLI::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDataError;
    }
    return kExitConfigError;
}
