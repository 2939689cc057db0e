#include "subtraj/pipeline.hpp"

#include "subtraj/worker_pool.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <thread>

namespace subtraj {

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

void PipelineConfig::validate() const {
    if (partitions < 1) throw std::invalid_argument("partitions must be >= 1");
    seg.validate();
    if (!(sample_fraction > 0.0) || sample_fraction > 1.0)
        throw std::invalid_argument("sample_fraction must be in (0,1]");
    auto check_frac = [](const std::optional<double>& f, const char* name) {
        if (f && (!(*f > 0.0) || *f > 1.0))
            throw std::invalid_argument(std::string(name) + " must be in (0,1]");
    };
    check_frac(eps_sp_frac, "eps_sp_frac");
    if (eps_t_frac && *eps_t_frac < 0.0)
        throw std::invalid_argument("eps_t_frac must be >= 0");
    if (delta_t_frac && *delta_t_frac < 0.0)
        throw std::invalid_argument("delta_t_frac must be >= 0");
    if (eps_sp && !(*eps_sp > 0.0)) throw std::invalid_argument("eps_sp must be > 0");
    if (eps_t && *eps_t < 0.0) throw std::invalid_argument("eps_t must be >= 0");
    if (delta_t && *delta_t < 0.0) throw std::invalid_argument("delta_t must be >= 0");
}

unsigned PipelineConfig::effective_workers() const {
    if (workers > 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

JoinParams resolve_relative_params(const Dataset& ds, const PipelineConfig& cfg,
                                   std::vector<std::string>* warnings) {
    JoinParams jp;
    const double diagonal = ds.bounding_box().diagonal();
    const double gap = ds.mean_sample_gap();

    auto pick = [&](const std::optional<double>& absolute, const std::optional<double>& frac,
                    double base, const char* name) {
        if (absolute) {
            if (frac && warnings)
                warnings->push_back(std::string("both absolute and relative ") + name +
                                    " given; using the absolute value");
            return *absolute;
        }
        if (!frac) throw std::invalid_argument(std::string("missing ") + name);
        return *frac * base;
    };
    jp.eps_sp = pick(cfg.eps_sp, cfg.eps_sp_frac, diagonal, "eps_sp");
    jp.eps_t = pick(cfg.eps_t, cfg.eps_t_frac, gap, "eps_t");
    jp.delta_t = pick(cfg.delta_t, cfg.delta_t_frac, gap, "delta_t");
    jp.validate();
    return jp;
}

std::vector<PipelineResult::Assignment> PipelineResult::assignments() const {
    std::vector<Assignment> out;
    std::unordered_map<SubId, SubtrajRef, SubIdHash> refs;
    for (const auto& per_traj : relations->all_subs())
        for (const auto& s : per_traj) refs.emplace(s.id(), s.ref);
    for (const auto& c : clustering.clusters) {
        out.push_back(Assignment{refs.at(c.representative), false, c.representative});
        for (const auto& m : c.members)
            out.push_back(Assignment{refs.at(m.sub), false, c.representative});
    }
    for (const auto& o : clustering.outliers)
        out.push_back(Assignment{refs.at(o), true, SubId{}});
    return out;
}

PipelineResult run_pipeline(const Dataset& ds, const PipelineConfig& cfg) {
    cfg.validate();
    if (ds.empty()) throw std::invalid_argument("empty dataset");

    const auto t_start = std::chrono::steady_clock::now();
    PipelineResult result;
    result.join_params = resolve_relative_params(ds, cfg, &result.warnings);
    const JoinParams jp = result.join_params;
    const unsigned workers = cfg.effective_workers();
    const std::size_t P = cfg.partitions;

    result.partitioning = build_partitioning(ds, P, cfg.sample_fraction, cfg.seed);
    const auto& tp = result.partitioning;

    // ---- stage 1: per-partition point-level join -------------------------
    const auto t_join = std::chrono::steady_clock::now();

    // distribute points (with halo copies) to partitions, trajectory order
    std::vector<std::vector<FlatPoint>> partition_points(P);
    std::vector<std::vector<bool>> partition_primary(P);
    for (TrajIndex t = 0; t < ds.size(); ++t) {
        const auto& pts = ds.at(t).points;
        for (PointIndex i = 0; i < pts.size(); ++i) {
            for (const auto& a : tp.assign_point(pts[i].t, jp.eps_t)) {
                partition_points[a.pid].push_back(
                    FlatPoint{t, i, pts[i].t, pts[i].x, pts[i].y});
                partition_primary[a.pid].push_back(a.primary);
            }
        }
    }

    std::vector<std::vector<PointMatch>> join_out(P);
    result.timings.join_per_partition_s.assign(P, 0.0);
    parallel_for(P, workers, [&](std::size_t p) {
        const auto t0 = std::chrono::steady_clock::now();
        GridIndex index(partition_points[p], jp.eps_sp);
        // emit from primary copies only: every matching pair coexists in the
        // owner partition of at least one endpoint, so this is complete
        std::size_t cursor = 0;
        std::unordered_map<std::uint64_t, bool> primary_of;
        primary_of.reserve(partition_points[p].size());
        for (std::size_t i = 0; i < partition_points[p].size(); ++i) {
            const auto& fp = partition_points[p][i];
            primary_of[(static_cast<std::uint64_t>(fp.traj) << 32) | fp.idx] =
                partition_primary[p][i];
        }
        (void)cursor;
        point_join(index, jp,
                   [&](const FlatPoint& fp) {
                       return primary_of[(static_cast<std::uint64_t>(fp.traj) << 32) | fp.idx];
                   },
                   join_out[p]);
        result.timings.join_per_partition_s[p] = seconds_since(t0);
    });
    result.timings.join_s = seconds_since(t_join);

    // ---- shuffle 1: group matches by reference trajectory ---------------
    const auto t_rse = std::chrono::steady_clock::now();
    std::vector<std::vector<PointMatch>> by_traj(ds.size());
    for (std::size_t p = 0; p < P; ++p)
        for (const auto& m : join_out[p]) by_traj[m.ref_traj].push_back(m);
    join_out.clear();
    join_out.shrink_to_fit();

    // ---- stage 2: refine + segmentation + relations per trajectory ------
    std::vector<std::vector<Subtraj>> subs_per_traj(ds.size());
    std::vector<std::vector<STPRecord>> stp_per_traj(ds.size());
    std::vector<VotingVector> votes_per_traj(cfg.dump_relations ? ds.size() : 0);
    parallel_for(ds.size(), workers, [&](std::size_t t) {
        const auto traj = static_cast<TrajIndex>(t);
        const std::size_t n = ds.at(traj).points.size();
        auto intervals = refine_matches(ds, traj, std::move(by_traj[t]), jp);
        const VotingVector voting = compute_voting(n, intervals, jp.eps_sp);
        CutPoints cps;
        if (cfg.detector == Detector::Tsa1) {
            cps = tsa1(voting, cfg.seg);
        } else {
            cps = tsa2(neighbor_lists(n, intervals), cfg.seg);
        }
        subs_per_traj[t] = split(ds, traj, cps, voting);
        stp_per_traj[t] = emit_relations(ds, traj, subs_per_traj[t], intervals);
        if (cfg.dump_relations) votes_per_traj[t] = voting;
    });
    result.relations = std::make_shared<RelationIndex>(ds, std::move(subs_per_traj),
                                                       std::move(stp_per_traj));
    const auto& relations = *result.relations;
    result.timings.rse_s = seconds_since(t_rse);

    // ---- shuffle 2: assign subtrajectories to temporal partitions -------
    const auto t_sim = std::chrono::steady_clock::now();
    std::vector<std::vector<Subtraj>> partition_subs(P);
    std::unordered_map<SubId, bool, SubIdHash> intersecting;
    for (TrajIndex t = 0; t < ds.size(); ++t) {
        for (const auto& s : relations.subs_of(t)) {
            const auto span = tp.assign_span(s.t_start, s.t_end);
            intersecting[s.id()] = span.intersecting();
            for (std::uint32_t pid = span.first_pid; pid <= span.last_pid; ++pid)
                partition_subs[pid].push_back(s);
        }
    }

    // ---- stage 3: per-partition similarity ------------------------------
    std::vector<std::vector<SPRecord>> partition_sp(P);
    result.timings.similarity_per_partition_s.assign(P, 0.0);
    parallel_for(P, workers, [&](std::size_t p) {
        const auto t0 = std::chrono::steady_clock::now();
        partition_sp[p] = build_sp(relations, partition_subs[p], jp.eps_sp);
        result.timings.similarity_per_partition_s[p] = seconds_since(t0);
    });
    result.timings.similarity_s = seconds_since(t_sim);

    // ---- stage 4: per-partition clustering ------------------------------
    const auto t_cluster = std::chrono::steady_clock::now();
    result.partition_states.resize(P);
    parallel_for(P, workers, [&](std::size_t p) {
        const auto th = resolve_thresholds(partition_subs[p], partition_sp[p], cfg.cluster);
        result.partition_states[p] = cluster_partition(static_cast<std::uint32_t>(p),
                                                       partition_subs[p], partition_sp[p], th);
    });
    result.timings.clustering_s = seconds_since(t_cluster);

    // ---- stage 5: cross-partition refinement + metrics -------------------
    const auto t_refine = std::chrono::steady_clock::now();
    result.clustering = refine_results(result.partition_states, intersecting);
    result.sscr_value = sscr(result.clustering);
    result.rmse_report = rmse(result.clustering, relations);
    result.lemma1_violations = check_lemma1(result.clustering, relations, jp.eps_sp).size();
    result.timings.refine_s = seconds_since(t_refine);
    result.timings.total_s = seconds_since(t_start);

    if (cfg.dump_relations && !cfg.output_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(cfg.output_dir);
        std::ofstream vout(cfg.output_dir + "/voting.csv");
        std::ofstream cout_(cfg.output_dir + "/cuts.csv");
        for (TrajIndex t = 0; t < ds.size(); ++t) {
            const auto& v = votes_per_traj[t];
            for (std::size_t i = 0; i < v.raw.size(); ++i)
                vout << ds.at(t).id << ',' << i + 1 << ',' << v.raw[i] << ','
                     << v.normalized[i] << '\n';
            for (const auto& s : relations.subs_of(t))
                cout_ << ds.at(t).id << ',' << s.ref.first + 1 << '\n';
        }
        std::ofstream spout(cfg.output_dir + "/sp.txt");
        char buf[32];
        for (std::size_t p = 0; p < P; ++p) {
            for (const auto& rec : partition_sp[p]) {
                spout << sub_id_string(ds, rec.sub) << '|';
                for (std::size_t i = 0; i < rec.adj.size(); ++i) {
                    std::snprintf(buf, sizeof(buf), "%.6f", rec.adj[i].sim);
                    spout << (i ? "," : "") << sub_id_string(ds, rec.adj[i].other) << ':' << buf;
                }
                spout << '\n';
            }
        }
    }
    return result;
}

void write_result_files(const Dataset& ds, const PipelineConfig& cfg,
                        const PipelineResult& result) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);
    char buf[32];

    {
        std::ofstream out(cfg.output_dir + "/clusters.csv");
        out << "cluster_id,representative_sub_id,member_sub_id,sim\n";
        for (const auto& c : result.clustering.clusters) {
            const std::string rep = sub_id_string(ds, c.representative);
            out << rep << ',' << rep << ',' << rep << ",1.000000\n";
            for (const auto& m : c.members) {
                std::snprintf(buf, sizeof(buf), "%.6f", m.sim);
                out << rep << ',' << rep << ',' << sub_id_string(ds, m.sub) << ',' << buf
                    << '\n';
            }
        }
    }
    {
        std::ofstream out(cfg.output_dir + "/outliers.csv");
        out << "sub_id\n";
        for (const auto& o : result.clustering.outliers)
            out << sub_id_string(ds, o) << '\n';
    }
    {
        std::ofstream out(cfg.output_dir + "/subs.csv");
        out << "sub_id,traj_id,first_idx,last_idx,t_start,t_end,voting,card\n";
        for (const auto& per_traj : result.relations->all_subs()) {
            for (const auto& s : per_traj) {
                std::snprintf(buf, sizeof(buf), "%.6f", s.voting);
                out << sub_id_string(ds, s.id()) << ',' << ds.at(s.ref.traj).id << ','
                    << s.ref.first + 1 << ',' << s.ref.last + 1 << ',' << s.t_start << ','
                    << s.t_end << ',' << buf << ',' << s.card << '\n';
            }
        }
    }
    {
        std::ofstream out(cfg.output_dir + "/metrics.txt");
        out << "sscr = " << result.sscr_value << '\n';
        out << "rmse = " << result.rmse_report.value << '\n';
        out << "cluster_count = " << result.clustering.clusters.size() << '\n';
        out << "outlier_count = " << result.clustering.outliers.size() << '\n';
        out << "lemma1_violations = " << result.lemma1_violations << '\n';
        for (std::size_t p = 0; p < result.clustering.partition_thresholds.size(); ++p) {
            const auto& th = result.clustering.partition_thresholds[p];
            out << "alpha.partition." << p << " = " << th.alpha_value << '\n';
            out << "k.partition." << p << " = " << th.k_value << '\n';
        }
    }
    {
        std::ofstream out(cfg.output_dir + "/timings.txt");
        const auto& t = result.timings;
        out << "join = " << t.join_s << '\n';
        out << "rse = " << t.rse_s << '\n';
        out << "similarity = " << t.similarity_s << '\n';
        out << "clustering = " << t.clustering_s << '\n';
        out << "refine = " << t.refine_s << '\n';
        out << "total = " << t.total_s << '\n';
        for (std::size_t p = 0; p < t.join_per_partition_s.size(); ++p)
            out << "join.partition." << p << " = " << t.join_per_partition_s[p] << '\n';
        for (std::size_t p = 0; p < t.similarity_per_partition_s.size(); ++p)
            out << "similarity.partition." << p << " = " << t.similarity_per_partition_s[p]
                << '\n';
    }
    result.partitioning.save(cfg.output_dir + "/partitions.txt");
}

} // namespace subtraj
