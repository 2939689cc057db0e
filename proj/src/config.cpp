#include "subtraj/config.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace subtraj {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key " + key + ": not a number: " + v);
    }
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const unsigned long long x = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key " + key + ": not an integer: " + v);
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    throw std::invalid_argument("config key " + key + ": not a boolean: " + v);
}

} // namespace

std::string to_string(Detector d) { return d == Detector::Tsa1 ? "tsa1" : "tsa2"; }

Detector detector_from_string(const std::string& s) {
    if (s == "tsa1") return Detector::Tsa1;
    if (s == "tsa2") return Detector::Tsa2;
    throw std::invalid_argument("unknown detector: " + s + " (expected tsa1 or tsa2)");
}

void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "input") cfg.input_path = value;
    else if (key == "output") cfg.output_dir = value;
    else if (key == "eps_sp") cfg.eps_sp = to_double(key, value);
    else if (key == "eps_t") cfg.eps_t = to_double(key, value);
    else if (key == "delta_t") cfg.delta_t = to_double(key, value);
    else if (key == "eps_sp_frac") cfg.eps_sp_frac = to_double(key, value);
    else if (key == "eps_t_frac") cfg.eps_t_frac = to_double(key, value);
    else if (key == "delta_t_frac") cfg.delta_t_frac = to_double(key, value);
    else if (key == "w") cfg.seg.w = static_cast<unsigned>(to_uint(key, value));
    else if (key == "tau") cfg.seg.tau = to_double(key, value);
    else if (key == "detector") cfg.detector = detector_from_string(value);
    else if (key == "alpha_sigma") cfg.cluster.alpha_sigma = to_double(key, value);
    else if (key == "k_sigma") cfg.cluster.k_sigma = to_double(key, value);
    else if (key == "partitions") cfg.partitions = static_cast<std::size_t>(to_uint(key, value));
    else if (key == "workers") cfg.workers = static_cast<unsigned>(to_uint(key, value));
    else if (key == "sample_fraction") cfg.sample_fraction = to_double(key, value);
    else if (key == "seed") cfg.seed = to_uint(key, value);
    else if (key == "dump_relations") cfg.dump_relations = to_bool(key, value);
    else if (key == "adaptive_eps_sp") {
        // reserved for a per-cell adaptive spatial threshold; not implemented
        if (value != "off")
            throw std::invalid_argument("adaptive_eps_sp is reserved and must stay \"off\"");
    } else {
        throw std::invalid_argument("unknown config key: " + key);
    }
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    PipelineConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        apply_config_entry(cfg, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
    }
    return cfg;
}

} // namespace subtraj
