#include "subtraj/csv.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace subtraj {

namespace {

bool parse_row(const std::string& line, std::string& id, Timestamp& t, double& x, double& y) {
    // traj_id,t,x,y
    std::size_t p0 = line.find(',');
    if (p0 == std::string::npos) return false;
    std::size_t p1 = line.find(',', p0 + 1);
    if (p1 == std::string::npos) return false;
    std::size_t p2 = line.find(',', p1 + 1);
    if (p2 == std::string::npos) return false;
    if (line.find(',', p2 + 1) != std::string::npos) return false;

    id = line.substr(0, p0);
    if (id.empty()) return false;

    const char* tb = line.data() + p0 + 1;
    const char* te = line.data() + p1;
    auto tr = std::from_chars(tb, te, t);
    if (tr.ec != std::errc{} || tr.ptr != te) return false;

    try {
        std::size_t used = 0;
        x = std::stod(line.substr(p1 + 1, p2 - p1 - 1), &used);
        if (used != p2 - p1 - 1) return false;
        std::string ys = line.substr(p2 + 1);
        while (!ys.empty() && (ys.back() == '\r' || ys.back() == '\n')) ys.pop_back();
        y = std::stod(ys, &used);
        if (used != ys.size()) return false;
    } catch (const std::exception&) {
        return false;
    }
    return std::isfinite(x) && std::isfinite(y);
}

} // namespace

IngestResult ingest_csv(const std::string& path, const IngestOptions& opts) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);

    IngestResult result;
    std::string line;
    if (!std::getline(in, line)) {
        result.report.warnings.push_back("empty input file: " + path);
        return result;
    }
    // tolerate a UTF-8 BOM before the header
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line != "traj_id,t,x,y")
        throw std::runtime_error("unexpected CSV header: \"" + line + "\"");

    std::map<std::string, std::vector<Point>> grouped;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        ++result.report.rows_read;
        std::string id;
        Timestamp t;
        double x, y;
        if (!parse_row(line, id, t, x, y)) {
            ++result.report.rows_malformed;
            if (opts.fail_fast)
                throw std::runtime_error("malformed row at line " + std::to_string(line_no));
            continue;
        }
        grouped[id].push_back(Point{t, x, y});
    }

    std::vector<Trajectory> trajs;
    trajs.reserve(grouped.size());
    for (auto& [id, pts] : grouped) {
        std::stable_sort(pts.begin(), pts.end(),
                         [](const Point& a, const Point& b) { return a.t < b.t; });
        std::vector<Point> unique_pts;
        unique_pts.reserve(pts.size());
        for (const auto& p : pts) {
            if (!unique_pts.empty() && unique_pts.back().t == p.t) {
                ++result.report.rows_duplicate;
                continue;
            }
            unique_pts.push_back(p);
        }
        trajs.push_back(Trajectory{id, std::move(unique_pts)});
    }
    result.report.trajectory_count = trajs.size();
    if (trajs.empty()) result.report.warnings.push_back("no usable rows in " + path);
    result.dataset = Dataset(std::move(trajs));
    return result;
}

void write_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << "traj_id,t,x,y\n";
    char buf[64];
    for (const auto& tr : ds.trajectories()) {
        for (const auto& p : tr.points) {
            out << tr.id << ',' << p.t << ',';
            std::snprintf(buf, sizeof(buf), "%.9g", p.x);
            out << buf << ',';
            std::snprintf(buf, sizeof(buf), "%.9g", p.y);
            out << buf << '\n';
        }
    }
}

void write_manifest(const Dataset& ds, const IngestReport& report, const std::string& path) {
    nlohmann::json j;
    j["trajectories"] = ds.size();
    j["points"] = ds.total_points();
    j["rows_read"] = report.rows_read;
    j["rows_malformed"] = report.rows_malformed;
    j["rows_duplicate"] = report.rows_duplicate;
    if (!ds.empty()) {
        j["t_min"] = ds.min_time();
        j["t_max"] = ds.max_time();
        const auto bb = ds.bounding_box();
        j["bbox"] = {{"min_x", bb.min_x}, {"min_y", bb.min_y},
                     {"max_x", bb.max_x}, {"max_y", bb.max_y}};
        j["diagonal"] = bb.diagonal();
        j["mean_sample_gap"] = ds.mean_sample_gap();
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open manifest file: " + path);
    out << j.dump(2) << '\n';
}

} // namespace subtraj
