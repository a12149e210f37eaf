#pragma once

#include "gsp/estimators.hpp"
#include "gsp/graph.hpp"
#include "gsp/noise.hpp"
#include "gsp/sampling.hpp"
#include "gsp/theory.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gsp {

enum class SamplingStrategy { greedy, random };

std::string to_string(SamplingStrategy s);

struct ExperimentConfig {
    // graph case
    int k = 8;
    Eigen::Index f = 200;
    Eigen::Index sample_size = 210;
    // noise scenario; n_a = n_b = 0 is the noiseless LMS mode
    std::string scenario;  // "i", "ii", "iii" or empty for a custom pair
    double n_a = 0.012;
    double n_b = 0.0;
    // estimator
    Algorithm algorithm = Algorithm::lms;
    double param = 0.43;  // mu for LMS, lambda for RLS
    int iterations = 1000;
    int runs = 50;
    std::uint64_t master_seed = 1;
    SamplingStrategy sampling_strategy = SamplingStrategy::greedy;
    // execution only; never changes results
    int threads = 1;

    /// Every violated constraint, one message each. Empty when valid.
    std::vector<std::string> validate() const;
};

/// Seed streams derived from the master seed. Keeping them disjoint makes each stage reproducible on its own.
enum class SeedPurpose : std::uint32_t { covariance = 1, sampling = 2, run = 3, stations = 4 };

std::uint64_t derive_seed(std::uint64_t master_seed, SeedPurpose purpose, std::uint64_t index = 0);

/// Everything that depends only on the station data and the graph case.
struct CaseSetup {
    Graph graph;
    GftBasis basis;
    BandBasis band;
    SamplingSet sampling;
    Projection projection;
};

CaseSetup prepare_case(const StationTable& stations, int k, Eigen::Index f, Eigen::Index sample_size,
                       SamplingStrategy strategy, std::uint64_t sampling_seed);

/// Same as above but reusing an already computed basis.
CaseSetup prepare_case(const StationTable& stations, Graph graph, GftBasis basis, Eigen::Index f,
                       Eigen::Index sample_size, SamplingStrategy strategy, std::uint64_t sampling_seed);

struct ModeDeviation {
    double max_abs_db = 0.0;
    double mean_abs_db = 0.0;
};

struct DeviationStats {
    std::size_t tail_begin = 0;  // first 0-based iteration index in the tail
    ModeDeviation paper;
    ModeDeviation exact;
    double tail_mean_empirical = 0.0;
    double tail_mean_paper = 0.0;
    double tail_mean_exact = 0.0;
    /// Monte Carlo standard error of tail_mean_empirical; NaN when per-run data is absent.
    double tail_standard_error = 0.0;
};

struct RunResult {
    ExperimentConfig config;
    std::vector<double> msd_mean;     // linear, averaged over runs
    std::vector<double> msd_mean_db;  // 10 log10 of msd_mean
    std::vector<double> msd_standard_error;
    Matrix per_run;  // runs x iterations, linear
    TheoryCurve theory_paper;
    TheoryCurve theory_exact;
    DeviationStats deviation;
    SamplingSet sampling;
    NoiseModel noise;
    double s_f_energy = 0.0;
    bool unstable = false;
};

/// Builds the signal model for a prepared case and runs the configured Monte Carlo experiment.
RunResult run_on_case(const ExperimentConfig& config, const CaseSetup& setup);

/// Graph, basis, sampling, noise, R trajectories, theory curves. Deterministic in master_seed.
RunResult run_experiment(const ExperimentConfig& config, const StationTable& stations);

/// Theory curves only, with the same setup path as run_experiment.
std::pair<TheoryCurve, TheoryCurve> theory_curves(const ExperimentConfig& config, const CaseSetup& setup,
                                                  const NoiseModel& noise);

NoiseModel noise_for(const ExperimentConfig& config, Eigen::Index n);

/// Tail statistics over iterations [floor(burn_in * T), T).
DeviationStats compare(const RunResult& result, double burn_in_fraction = 0.5);

/// Tail statistics from dB columns alone (no per-run data, standard error is NaN).
DeviationStats compare_db(const std::vector<double>& empirical_db, const std::vector<double>& paper_db,
                          const std::vector<double>& exact_db, double burn_in_fraction = 0.5);

/// max_t |msd_mean[t] - exact[t]| / standard_error[t]. Points whose standard error is below
/// 1e-12 relative contribute 0 when they agree to 1e-9 relative and +inf otherwise.
double max_standardized_deviation(const RunResult& result);

/// Station-like coordinates in a bounded box carrying a smooth temperature field.
StationTable synthetic_stations(int n, std::uint64_t seed);

}  // namespace gsp
