#pragma once

#include "gsp/graph.hpp"

#include <cstdint>
#include <random>
#include <string_view>

namespace gsp {

/// Diagonal observation-noise covariance, fixed for the lifetime of an experiment.
struct NoiseModel {
    Vector c_w;  // diagonal of C_w
    double n_a = 0.0;
    double n_b = 0.0;
    std::uint64_t seed = 0;

    Eigen::Index n() const noexcept { return c_w.size(); }
    bool strictly_positive() const { return c_w.size() > 0 && c_w.minCoeff() > 0.0; }
};

struct Scenario {
    double n_a;
    double n_b;
};

/// "i", "ii", "iii" -> (0.012, 0), (0.05, 0), (0.05, 0.05).
Scenario scenario_by_name(std::string_view name);

/// c_w = n_a |a| + n_b 1 with a ~ N(0, I) drawn once from `seed`.
NoiseModel build_cw(double n_a, double n_b, Eigen::Index n, std::uint64_t seed);

/// Noise-free model (c_w = 0). Only meaningful for LMS.
NoiseModel zero_noise(Eigen::Index n);

/// w_i = sqrt(c_w_i) z_i, z ~ N(0, I) from `stream`.
Vector draw_noise(const NoiseModel& model, std::mt19937_64& stream);

}  // namespace gsp
