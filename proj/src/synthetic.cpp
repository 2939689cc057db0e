#include "subtraj/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <cstdlib>
#include <random>
#include <sstream>
#include <stdexcept>

namespace subtraj {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Vec {
    double x = 0.0, y = 0.0;
};

Vec operator+(Vec a, Vec b) { return {a.x + b.x, a.y + b.y}; }
Vec operator-(Vec a, Vec b) { return {a.x - b.x, a.y - b.y}; }
Vec operator*(double s, Vec v) { return {s * v.x, s * v.y}; }
double norm(Vec v) { return std::sqrt(v.x * v.x + v.y * v.y); }

Vec unit_from_deg(double deg) {
    const double r = deg * kPi / 180.0;
    return {std::cos(r), std::sin(r)};
}

Vec left_normal(Vec u) { return {-u.y, u.x}; }

/// Polyline walked at constant speed with a per-segment lateral offset.
class Path {
public:
    Path() = default;
    explicit Path(std::vector<Vec> waypoints) : pts_(std::move(waypoints)) {
        seg_len_.reserve(pts_.size() - 1);
        total_ = 0.0;
        for (std::size_t i = 1; i < pts_.size(); ++i) {
            seg_len_.push_back(norm(pts_[i] - pts_[i - 1]));
            total_ += seg_len_.back();
        }
    }

    double length() const { return total_; }

    Vec at(double arc, double lateral) const {
        double remaining = std::max(arc, 0.0);
        for (std::size_t i = 0; i < seg_len_.size(); ++i) {
            const bool last = i + 1 == seg_len_.size();
            if (remaining <= seg_len_[i] || last) {
                const Vec u = seg_len_[i] == 0
                                  ? Vec{1, 0}
                                  : (1.0 / seg_len_[i]) * (pts_[i + 1] - pts_[i]);
                return pts_[i] + remaining * u + lateral * left_normal(u);
            }
            remaining -= seg_len_[i];
        }
        return pts_.back();
    }

private:
    std::vector<Vec> pts_;
    std::vector<double> seg_len_;
    double total_ = 0.0;
};

/// One moving object: an arm (first half) and a leg (second half), walked at
/// a scene-wide constant speed so all objects stay synchronized.
struct ObjectSpec {
    std::string id;
    std::string first_label;
    std::string second_label;
    Path arm;
    Path leg;
    double arm_lateral = 0.0;
    double leg_lateral = 0.0;
};

SyntheticScene realize(const std::vector<ObjectSpec>& objects, unsigned samples_per_half,
                       Timestamp period, double arm_length, double step,
                       double noise_amplitude, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> jitter(0.0, 1.0);

    std::vector<Trajectory> trajs;
    GroundTruth truth;
    const unsigned n_half = samples_per_half;
    const unsigned n_total = 2 * n_half;

    for (const auto& obj : objects) {
        Trajectory tr;
        tr.id = obj.id;
        tr.points.reserve(n_total);
        for (unsigned k = 0; k < n_total; ++k) {
            const double arc = step * static_cast<double>(k);
            Vec p = arc <= arm_length ? obj.arm.at(arc, obj.arm_lateral)
                                      : obj.leg.at(arc - arm_length, obj.leg_lateral);
            p.x += noise_amplitude * jitter(rng);
            p.y += noise_amplitude * jitter(rng);
            tr.points.push_back(Point{static_cast<Timestamp>(k) * period, p.x, p.y});
        }
        truth.entries.push_back(GroundTruthEntry{tr.id, 0, n_half - 1, obj.first_label});
        truth.entries.push_back(GroundTruthEntry{tr.id, n_half, n_total - 1, obj.second_label});
        trajs.push_back(std::move(tr));
    }
    return SyntheticScene{Dataset(std::move(trajs)), std::move(truth)};
}

/// Stretches the path from -> via -> to by `extra`: the object swings out to
/// a point offset from `via` along `swing_dir` (its family's own approach
/// side) before rejoining at `via`, falling `extra` behind along-track
/// without changing speed.
Path with_detour(Vec from, Vec via, Vec to, double extra, Vec swing_dir) {
    if (extra <= 0.0) return Path({from, via, to});
    const double seg = norm(via - from);
    auto length_with = [&](double q) {
        const Vec w = via + q * swing_dir;
        return norm(w - from) + q;
    };
    double lo = 0.0, hi = std::max(extra, 1.0);
    while (length_with(hi) < seg + extra) hi *= 2.0;
    for (int it = 0; it < 60; ++it) {
        const double m = 0.5 * (lo + hi);
        (length_with(m) < seg + extra ? lo : hi) = m;
    }
    return Path({from, via + 0.5 * (lo + hi) * swing_dir, via, to});
}

/// (lateral offset, along-track lag) slots forming one central object
/// surrounded by a ring, so members stay close to the center while the
/// average pairwise proximity stays low.
struct RingSlot {
    double lateral = 0.0;
    double lag = 0.0;
};

/// Flock slot layouts. Each destination flock is built around one hub on
/// the corridor axis: the hub's own stream also fills a wide outer ring
/// (same-stream members tolerate the largest spread since they ride the
/// same turn lane), while the partner stream fills a mid ring. The hub sees
/// everybody, collects the top voting of the flock, and admits both rings.
std::vector<RingSlot> lead_slots(unsigned count, double radius, double flatten) {
    std::vector<RingSlot> slots;
    slots.reserve(count);
    const double mid_lag = flatten * radius;
    slots.push_back(RingSlot{0.0, 0.0}); // the hub, no detour lag
    for (unsigned k = 1; k < count; ++k) {
        const double theta = 2.0 * kPi * static_cast<double>(k - 1) /
                                 static_cast<double>(count - 1) +
                             0.79;
        slots.push_back(
            RingSlot{radius * std::sin(theta), mid_lag * (1.0 - std::cos(theta))});
    }
    return slots;
}

std::vector<RingSlot> partner_slots(unsigned count, double radius, double flatten,
                                    double mid_frac) {
    std::vector<RingSlot> slots;
    slots.reserve(count);
    const double mid_lag = flatten * radius;
    for (unsigned k = 0; k < count; ++k) {
        // phased so no partner slot sits on the corridor axis where it
        // would rival the hub's voting
        const double theta = kPi * (2.0 * static_cast<double>(k) + 1.0) /
                             static_cast<double>(count);
        slots.push_back(RingSlot{mid_frac * radius * std::sin(theta),
                                 mid_lag * (1.0 - mid_frac * std::cos(theta))});
    }
    return slots;
}

} // namespace

SyntheticScene generate_star(unsigned replication, double noise, std::uint64_t seed) {
    if (replication == 0) throw std::invalid_argument("replication must be >= 1");
    if (noise < 0.0) throw std::invalid_argument("noise must be >= 0");

    // Two opposing arms feed a junction area and fan out to four destination
    // legs. Arm lanes run just outside the spatial reach of each other, so
    // the two streams only graze near the junction; streams bound for the
    // same destination merge onto a shared corridor. Destination legs are
    // staggered into a loose ring around one central object, which makes the
    // neighborhood density collapse at the junction while every leg object
    // stays well connected to the ring center.
    auto knob = [](const char* name, double fallback) {
        const char* s = std::getenv(name);
        return s ? std::atof(s) : fallback;
    };
    const double L = 1000.0; // arm path length
    const double h = knob("STAR_H", 280.0); // arm lane distance from the junction axis
    const unsigned n_half = 22;
    const Timestamp period = 30;
    const double step = 2.0 * L / static_cast<double>(2 * n_half - 1);

    const double merge_x = knob("STAR_MERGE", 350.0);
    const double corridor = knob("STAR_CORRIDOR", 900.0);
    const double ob_angle = knob("STAR_OB_ANGLE", 55.0);

    const Vec fan_a{0.0, h};
    const Vec fan_b{0.0, -h};
    const Vec merge_c{merge_x, 0.0};
    const Vec merge_d{-merge_x, 0.0};
    const Vec dir_c = unit_from_deg(0.0);
    const Vec dir_d = unit_from_deg(180.0);
    const Vec dir_ob = unit_from_deg(ob_angle);
    const Vec dir_oa = unit_from_deg(180.0 + ob_angle);
    const Vec dest_c = merge_c + corridor * dir_c;
    const Vec dest_d = merge_d + corridor * dir_d;

    const double arm_lane_gap = knob("STAR_LANE", 150.0);
    const double ring_shared = knob("STAR_RING_C", 330.0);
    const double ring_single = knob("STAR_RING_B", 110.0);

    const unsigned R = replication;
    std::vector<ObjectSpec> objects;
    const double flatten = knob("STAR_FLAT", 0.2);
    const auto shared_lead = lead_slots(R, ring_shared, flatten);
    const auto shared_partner =
        partner_slots(R, ring_shared, flatten, knob("STAR_MIDFRAC", 0.5));
    const auto single_ring = lead_slots(R, ring_single, flatten);

    struct Family {
        const char* name;
        const char* first_label;
        const char* second_label;
        Vec fan;
        Vec arm_origin;
        double arm_lane;
        // leg construction
        bool merged;     // shares a corridor with the family `partner`
        Vec via;         // corridor entry (merged) or shoulder point (single)
        Vec dest;
        unsigned slot_base; // slot parity offset into the shared ring
        Vec swing;          // lag detours swing into this free direction
    };

    const Vec arm_a_origin{-L, h};
    const Vec arm_b_origin{L, -h};
    const Vec down{0.0, -1.0}, up{0.0, 1.0};
    const std::vector<Family> families = {
        {"AB", "A>O", "O>B", fan_a, arm_a_origin, 0.0, false,
         fan_a + 300.0 * dir_ob, fan_a + 1000.0 * dir_ob, 0, left_normal(dir_ob)},
        {"AC", "A>O", "O>C", fan_a, arm_a_origin, arm_lane_gap, true, merge_c, dest_c, 0, down},
        {"AD", "A>O", "O>D", fan_a, arm_a_origin, -arm_lane_gap, true, merge_d, dest_d, 0, up},
        {"BA", "B>O", "O>A", fan_b, arm_b_origin, 0.0, false,
         fan_b + 300.0 * dir_oa, fan_b + 1000.0 * dir_oa, 0, left_normal(dir_oa)},
        {"BC", "B>O", "O>C", fan_b, arm_b_origin, arm_lane_gap, true, merge_c, dest_c, 1, down},
        {"BD", "B>O", "O>D", fan_b, arm_b_origin, -arm_lane_gap, true, merge_d, dest_d, 1, up},
    };

    for (const auto& fam : families) {
        for (unsigned r = 0; r < R; ++r) {
            const RingSlot slot = !fam.merged ? single_ring[r]
                                  : fam.slot_base == 0 ? shared_lead[r]
                                                       : shared_partner[r];
            ObjectSpec obj;
            obj.id = std::string(fam.name) + std::to_string(r + 1);
            obj.first_label = fam.first_label;
            obj.second_label = fam.second_label;
            obj.arm = Path({fam.arm_origin, fam.fan});
            obj.arm_lateral = fam.arm_lane;
            // objects ride the turn together and fan out onto their lanes
            // where the corridor starts
            const Vec corr_dir = (1.0 / norm(fam.dest - fam.via)) * (fam.dest - fam.via);
            const Vec lane_shift = slot.lateral * left_normal(corr_dir);
            obj.leg = with_detour(fam.fan, fam.via + lane_shift, fam.dest + lane_shift,
                                  slot.lag, fam.swing);
            obj.leg_lateral = 0.0;
            objects.push_back(std::move(obj));
        }
    }

    return realize(objects, n_half, period, L, step, noise * L, seed);
}

SyntheticScene generate_tsa(unsigned replication, double noise, std::uint64_t seed) {
    if (replication == 0) throw std::invalid_argument("replication must be >= 1");

    // Five routes through one shared midpoint: the neighborhood of A>B keeps
    // its cardinality across O while its composition changes completely.
    const double L = 1000.0;
    const unsigned n_half = 40;
    const Timestamp period = 10;
    const double step = 2.0 * L / static_cast<double>(2 * n_half - 1);

    const Vec a{-L, 0}, b{L, 0}, o{0, 0}, c{0, L}, d{0, -L};
    const double lane = 6.0;

    struct Route {
        const char* name;
        const char* first_label;
        const char* second_label;
        Vec from, to;
        double arm_lane, leg_lane;
    };
    const std::vector<Route> routes = {
        {"AB", "A>O", "O>B", a, b, 0.0, 0.0},
        {"AC", "A>O", "O>C", a, c, lane, 0.0},
        {"AD", "A>O", "O>D", a, d, -lane, 0.0},
        {"CB", "C>O", "O>B", c, b, 0.0, lane},
        {"DB", "D>O", "O>B", d, b, 0.0, -lane},
    };

    std::vector<ObjectSpec> objects;
    for (const auto& route : routes) {
        for (unsigned r = 0; r < replication; ++r) {
            ObjectSpec obj;
            obj.id = std::string(route.name) + (replication > 1 ? std::to_string(r + 1) : "");
            obj.first_label = route.first_label;
            obj.second_label = route.second_label;
            obj.arm = Path({route.from, o});
            obj.leg = Path({o, route.to});
            obj.arm_lateral = route.arm_lane + 2.5 * static_cast<double>(r);
            obj.leg_lateral = route.leg_lane + 2.5 * static_cast<double>(r);
            objects.push_back(std::move(obj));
        }
    }
    return realize(objects, n_half, period, L, step, noise * L, seed);
}

SyntheticScene generate_synthetic(const std::string& scenario, unsigned replication,
                                  double noise, std::uint64_t seed) {
    if (scenario == "star") return generate_star(replication, noise, seed);
    if (scenario == "tsa") return generate_tsa(replication, noise, seed);
    throw std::invalid_argument("unknown scenario: " + scenario);
}

void GroundTruth::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open truth file: " + path);
    out << "traj_id,first_idx,last_idx,label\n";
    for (const auto& e : entries)
        out << e.traj_id << ',' << e.first + 1 << ',' << e.last + 1 << ',' << e.label << '\n';
}

GroundTruth GroundTruth::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open truth file: " + path);
    GroundTruth gt;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty truth file: " + path);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string id, first, last, label;
        if (!std::getline(ss, id, ',') || !std::getline(ss, first, ',') ||
            !std::getline(ss, last, ',') || !std::getline(ss, label))
            throw std::runtime_error("malformed truth row: " + line);
        while (!label.empty() && (label.back() == '\r' || label.back() == '\n'))
            label.pop_back();
        GroundTruthEntry e;
        e.traj_id = id;
        e.first = static_cast<PointIndex>(std::stoul(first) - 1);
        e.last = static_cast<PointIndex>(std::stoul(last) - 1);
        e.label = label;
        gt.entries.push_back(std::move(e));
    }
    return gt;
}

} // namespace subtraj
