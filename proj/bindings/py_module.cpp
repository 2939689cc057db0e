#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "subtraj/config.hpp"
#include "subtraj/csv.hpp"
#include "subtraj/evaluate.hpp"
#include "subtraj/pipeline.hpp"
#include "subtraj/synthetic.hpp"

#include <filesystem>

namespace py = pybind11;
using namespace subtraj;

namespace {

PipelineConfig config_from_dict(const py::dict& d) {
    PipelineConfig cfg;
    for (const auto& item : d) {
        const auto key = py::cast<std::string>(item.first);
        const auto value = py::cast<std::string>(py::str(item.second));
        apply_config_entry(cfg, key, value);
    }
    return cfg;
}

py::dict run_on_csv(const std::string& input_csv, const py::dict& options) {
    PipelineConfig cfg = config_from_dict(options);
    cfg.input_path = input_csv;
    const auto ingest = ingest_csv(input_csv);
    const auto result = run_pipeline(ingest.dataset, cfg);

    py::dict out;
    out["eps_sp"] = result.join_params.eps_sp;
    out["eps_t"] = result.join_params.eps_t;
    out["delta_t"] = result.join_params.delta_t;
    out["sscr"] = result.sscr_value;
    out["rmse"] = result.rmse_report.value;
    out["lemma1_violations"] = result.lemma1_violations;
    out["outliers"] = [&] {
        py::list l;
        for (const auto& o : result.clustering.outliers)
            l.append(sub_id_string(ingest.dataset, o));
        return l;
    }();
    py::list clusters;
    for (const auto& c : result.clustering.clusters) {
        py::dict cl;
        cl["representative"] = sub_id_string(ingest.dataset, c.representative);
        py::list members;
        for (const auto& m : c.members) {
            py::dict mem;
            mem["sub"] = sub_id_string(ingest.dataset, m.sub);
            mem["sim"] = m.sim;
            members.append(mem);
        }
        cl["members"] = members;
        clusters.append(cl);
    }
    out["clusters"] = clusters;
    return out;
}

py::dict generate_to_dir(const std::string& scenario, unsigned replication, double noise,
                         std::uint64_t seed, const std::string& out_dir) {
    const auto scene = generate_synthetic(scenario, replication, noise, seed);
    std::filesystem::create_directories(out_dir);
    write_csv(scene.dataset, out_dir + "/dataset.csv");
    scene.truth.save(out_dir + "/truth.csv");
    py::dict out;
    out["trajectories"] = scene.dataset.size();
    out["points"] = scene.dataset.total_points();
    out["dataset"] = out_dir + "/dataset.csv";
    out["truth"] = out_dir + "/truth.csv";
    return out;
}

py::dict evaluate_run(const std::string& input_csv, const py::dict& options,
                      const std::string& truth_path) {
    PipelineConfig cfg = config_from_dict(options);
    const auto ingest = ingest_csv(input_csv);
    const auto result = run_pipeline(ingest.dataset, cfg);
    const auto truth = GroundTruth::load(truth_path);
    const auto ev = evaluate(ingest.dataset, result.assignments(), truth);
    py::dict out;
    out["accuracy"] = ev.accuracy;
    out["f_measure"] = ev.f_measure;
    out["precision"] = ev.precision;
    out["recall"] = ev.recall;
    out["clusters"] = ev.cluster_count;
    return out;
}

} // namespace

PYBIND11_MODULE(_subtraj, m) {
    m.doc() = "Partition-parallel subtrajectory clustering core";

    m.def("spatial_dist",
          [](double ax, double ay, double bx, double by) {
              return spatial_dist(Point{0, ax, ay}, Point{0, bx, by});
          },
          py::arg("ax"), py::arg("ay"), py::arg("bx"), py::arg("by"),
          "Euclidean distance between two planar points");

    m.def("temporal_dist",
          [](std::int64_t ta, std::int64_t tb) {
              return temporal_dist(Point{ta, 0, 0}, Point{tb, 0, 0});
          },
          py::arg("ta"), py::arg("tb"), "Absolute timestamp difference in seconds");

    m.def("partition_borders",
          [](const std::string& input_csv, std::size_t partitions, double sample_fraction,
             std::uint64_t seed) {
              const auto ingest = ingest_csv(input_csv);
              const auto tp =
                  build_partitioning(ingest.dataset, partitions, sample_fraction, seed);
              return tp.borders();
          },
          py::arg("input_csv"), py::arg("partitions"), py::arg("sample_fraction") = 1.0,
          py::arg("seed") = 1,
          "Equi-depth temporal partition borders of a CSV dataset");

    m.def("generate", &generate_to_dir, py::arg("scenario"), py::arg("replication") = 1,
          py::arg("noise") = 0.0, py::arg("seed") = 1, py::arg("out_dir") = ".",
          "Write a synthetic scene (dataset.csv + truth.csv) into a directory");

    m.def("run", &run_on_csv, py::arg("input_csv"), py::arg("options") = py::dict(),
          "Run the full pipeline on a CSV file and return the clustering");

    m.def("evaluate", &evaluate_run, py::arg("input_csv"), py::arg("options"),
          py::arg("truth_csv"),
          "Run the pipeline and score it against a ground-truth file");
}
