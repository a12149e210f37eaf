#include "gsp/noise.hpp"

#include "gsp/error.hpp"

#include <cmath>
#include <string>

namespace gsp {

Scenario scenario_by_name(std::string_view name) {
    if (name == "i") return {0.012, 0.0};
    if (name == "ii") return {0.05, 0.0};
    if (name == "iii") return {0.05, 0.05};
    fail(ErrorKind::invalid_argument, "unknown noise scenario '" + std::string(name) + "' (expected i, ii or iii)");
}

NoiseModel build_cw(double n_a, double n_b, Eigen::Index n, std::uint64_t seed) {
    require(n >= 1, "build_cw: node count must be positive");
    require(std::isfinite(n_a) && std::isfinite(n_b) && n_a >= 0.0 && n_b >= 0.0,
            "build_cw: coefficients must be finite and non-negative");
    require(n_a > 0.0 || n_b > 0.0, "build_cw: N_a and N_b are both zero");

    NoiseModel model{Vector::Constant(n, n_b), n_a, n_b, seed};
    if (n_a > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> normal;
        for (Eigen::Index i = 0; i < n; ++i) model.c_w(i) += n_a * std::abs(normal(rng));
    }
    return model;
}

NoiseModel zero_noise(Eigen::Index n) { return NoiseModel{Vector::Zero(n), 0.0, 0.0, 0}; }

Vector draw_noise(const NoiseModel& model, std::mt19937_64& stream) {
    std::normal_distribution<double> normal;
    Vector w(model.n());
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::sqrt(model.c_w(i)) * normal(stream);
    return w;
}

}  // namespace gsp
