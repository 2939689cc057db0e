#pragma once

#include <stdexcept>
#include <string>

namespace subtraj {

/// Thresholds of the spatio-temporal self-join: spatial reach eps_sp,
/// temporal tolerance eps_t and minimum match duration delta_t.
struct JoinParams {
    double eps_sp = 0.0;
    double eps_t = 0.0;
    double delta_t = 0.0;

    void validate() const {
        if (!(eps_sp > 0)) throw std::invalid_argument("eps_sp must be > 0");
        if (eps_t < 0) throw std::invalid_argument("eps_t must be >= 0");
        if (delta_t < 0) throw std::invalid_argument("delta_t must be >= 0");
    }
};

/// Segmentation detector choice.
enum class Detector { Tsa1, Tsa2 };

std::string to_string(Detector d);
Detector detector_from_string(const std::string& s);

/// Sliding-window size (in samples) and cut threshold in [0,1].
struct SegParams {
    unsigned w = 20;
    double tau = 0.6;

    void validate() const {
        if (w == 0) throw std::invalid_argument("w must be >= 1");
        if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("tau must be in [0,1]");
    }
};

/// Clustering thresholds expressed in standard deviations around each
/// temporal partition's mean similarity / mean voting.
struct ClusterParams {
    double alpha_sigma = 0.0;
    double k_sigma = 0.0;
};

} // namespace subtraj
