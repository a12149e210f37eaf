#include "gsp/harness.hpp"

#include "gsp/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

namespace gsp {

std::string to_string(SamplingStrategy s) { return s == SamplingStrategy::greedy ? "greedy" : "random"; }

std::vector<std::string> ExperimentConfig::validate() const {
    std::vector<std::string> errors;
    if (k < 1) errors.push_back("k must be at least 1");
    if (f < 1) errors.push_back("f must be at least 1");
    if (sample_size < f) errors.push_back("sample_size must be at least f");
    if (!(n_a >= 0.0) || !(n_b >= 0.0)) errors.push_back("n_a and n_b must be non-negative");
    if (n_a == 0.0 && n_b == 0.0 && algorithm == Algorithm::rls)
        errors.push_back("n_a and n_b cannot both be zero for rls (C_w must be invertible)");
    if (algorithm == Algorithm::lms && !(param > 0.0 && std::isfinite(param)))
        errors.push_back("param (step size) must be positive for lms");
    if (algorithm == Algorithm::rls && !(param > 0.0 && param <= 1.0))
        errors.push_back("param (forgetting factor) must satisfy 0 < lambda <= 1 for rls");
    if (iterations < 1) errors.push_back("iterations must be at least 1");
    if (runs < 1) errors.push_back("runs must be at least 1");
    if (threads < 1) errors.push_back("threads must be at least 1");
    return errors;
}

std::uint64_t derive_seed(std::uint64_t master_seed, SeedPurpose purpose, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(purpose), static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    std::uint32_t out[2];
    seq.generate(std::begin(out), std::end(out));
    return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

CaseSetup prepare_case(const StationTable& stations, Graph graph, GftBasis basis, Eigen::Index f,
                       Eigen::Index sample_size, SamplingStrategy strategy, std::uint64_t sampling_seed) {
    BandBasis band = band_select(basis, f);
    SamplingSet sampling = strategy == SamplingStrategy::greedy ? greedy_max_lambda_min(band, sample_size)
                                                                : random_sampling(band, sample_size, sampling_seed);
    if (!check_recoverability(band, sampling).ok)
        fail(ErrorKind::numerical, "prepare_case: selected sampling set is not recoverable");
    const Vector x = Eigen::Map<const Vector>(stations.signal.data(), static_cast<Eigen::Index>(stations.size()));
    Projection projection = project_bandlimited(band, x);
    return CaseSetup{std::move(graph), std::move(basis), std::move(band), std::move(sampling), std::move(projection)};
}

CaseSetup prepare_case(const StationTable& stations, int k, Eigen::Index f, Eigen::Index sample_size,
                       SamplingStrategy strategy, std::uint64_t sampling_seed) {
    Graph graph = build_knn_graph(stations, k);
    GftBasis basis = gft_basis(laplacian(graph));
    return prepare_case(stations, std::move(graph), std::move(basis), f, sample_size, strategy, sampling_seed);
}

NoiseModel noise_for(const ExperimentConfig& config, Eigen::Index n) {
    if (config.n_a == 0.0 && config.n_b == 0.0) return zero_noise(n);
    return build_cw(config.n_a, config.n_b, n, derive_seed(config.master_seed, SeedPurpose::covariance));
}

std::pair<TheoryCurve, TheoryCurve> theory_curves(const ExperimentConfig& config, const CaseSetup& setup,
                                                  const NoiseModel& noise) {
    const auto& s_f = setup.projection.s_f;
    if (config.algorithm == Algorithm::lms)
        return {lms_theory_paper(setup.band, setup.sampling, s_f, noise.c_w, config.param, config.iterations),
                lms_theory_exact(setup.band, setup.sampling, s_f, noise.c_w, config.param, config.iterations)};
    return {rls_theory_paper(setup.band, setup.sampling, s_f, noise.c_w, config.param, config.iterations),
            rls_theory_exact(setup.band, setup.sampling, s_f, noise.c_w, config.param, config.iterations)};
}

namespace {

template <class State, class Step, class Out>
void simulate(State state, const SignalModel& model, Step step, std::mt19937_64& rng, int iterations, Out&& out) {
    for (int t = 0; t < iterations; ++t) {
        out(t) = msd(model, state.s_hat);
        if (t + 1 < iterations) state = step(state, model, draw_noise(model.noise, rng));
    }
}

double safe_db(double v) { return v > 0.0 ? 10.0 * std::log10(v) : (v == 0.0 ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::quiet_NaN()); }

}  // namespace

RunResult run_on_case(const ExperimentConfig& config, const CaseSetup& setup) {
    const auto errors = config.validate();
    if (!errors.empty()) fail(ErrorKind::config, "invalid experiment config: " + errors.front());

    const auto n = setup.band.n();
    NoiseModel noise = noise_for(config, n);
    const SignalModel model = SignalModel::make(setup.band, setup.projection.s_f, setup.sampling, noise);

    RunResult result;
    result.config = config;
    result.sampling = setup.sampling;
    result.noise = noise;
    result.s_f_energy = setup.projection.s_f.squaredNorm();
    std::tie(result.theory_paper, result.theory_exact) = theory_curves(config, setup, noise);

    std::optional<RlsState> rls0;
    if (config.algorithm == Algorithm::lms) {
        result.unstable = !(SampledSpectrum(setup.band, setup.sampling).spectral_radius(config.param) < 1.0);
        if (result.unstable)
            std::cerr << "warning: step size " << config.param << " is outside the stable range; running anyway\n";
    } else {
        rls0 = rls_init(model, config.param);
    }

    const int runs = config.runs;
    const int iters = config.iterations;
    result.per_run = Matrix(runs, iters);

    auto run_one = [&](int r) {
        std::mt19937_64 rng(derive_seed(config.master_seed, SeedPurpose::run, static_cast<std::uint64_t>(r)));
        auto row = result.per_run.row(r);
        if (config.algorithm == Algorithm::lms)
            simulate(lms_init(model, config.param), model, lms_step, rng, iters, row);
        else
            simulate(*rls0, model, rls_step, rng, iters, row);
    };

    const int workers = std::min(config.threads, runs);
    if (workers <= 1) {
        for (int r = 0; r < runs; ++r) run_one(r);
    } else {
        std::atomic<int> next{0};
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int r = next.fetch_add(1); r < runs; r = next.fetch_add(1)) run_one(r);
            });
    }

    // ascending-run reduction, independent of the schedule above
    result.msd_mean.assign(static_cast<std::size_t>(iters), 0.0);
    result.msd_standard_error.assign(static_cast<std::size_t>(iters), 0.0);
    result.msd_mean_db.resize(static_cast<std::size_t>(iters));
    for (int t = 0; t < iters; ++t) {
        double sum = 0.0;
        for (int r = 0; r < runs; ++r) sum += result.per_run(r, t);
        const double mean = sum / runs;
        double sq = 0.0;
        for (int r = 0; r < runs; ++r) sq += (result.per_run(r, t) - mean) * (result.per_run(r, t) - mean);
        const auto ti = static_cast<std::size_t>(t);
        result.msd_mean[ti] = mean;
        result.msd_mean_db[ti] = safe_db(mean);
        result.msd_standard_error[ti] = runs > 1 ? std::sqrt(sq / (runs - 1) / runs) : 0.0;
    }
    result.deviation = compare(result);
    return result;
}

RunResult run_experiment(const ExperimentConfig& config, const StationTable& stations) {
    const auto errors = config.validate();
    if (!errors.empty()) fail(ErrorKind::config, "invalid experiment config: " + errors.front());
    const CaseSetup setup = prepare_case(stations, config.k, config.f, config.sample_size, config.sampling_strategy,
                                         derive_seed(config.master_seed, SeedPurpose::sampling));
    return run_on_case(config, setup);
}

namespace {

std::size_t tail_start(std::size_t t, double burn_in_fraction) {
    require(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0, "compare: burn-in fraction must be in [0, 1)");
    return std::min(t - 1, static_cast<std::size_t>(std::floor(burn_in_fraction * static_cast<double>(t))));
}

ModeDeviation db_deviation(const std::vector<double>& a, const std::vector<double>& b, std::size_t begin) {
    ModeDeviation d;
    double sum = 0.0;
    for (std::size_t i = begin; i < a.size(); ++i) {
        // equal values (including matching infinities) deviate by zero
        const double diff = a[i] == b[i] ? 0.0 : std::abs(a[i] - b[i]);
        // a curve with no dB value (negative MSD) poisons both statistics
        d.max_abs_db = std::isnan(diff) ? diff : std::max(d.max_abs_db, diff);
        sum += diff;
    }
    d.mean_abs_db = sum / static_cast<double>(a.size() - begin);
    return d;
}

std::vector<double> to_db(const std::vector<double>& v) {
    std::vector<double> out(v.size());
    std::transform(v.begin(), v.end(), out.begin(), safe_db);
    return out;
}

double tail_mean(const std::vector<double>& v, std::size_t begin) {
    double s = 0.0;
    for (std::size_t i = begin; i < v.size(); ++i) s += v[i];
    return s / static_cast<double>(v.size() - begin);
}

std::vector<double> from_db(const std::vector<double>& v) {
    std::vector<double> out(v.size());
    std::transform(v.begin(), v.end(), out.begin(), [](double x) { return std::pow(10.0, x / 10.0); });
    return out;
}

}  // namespace

DeviationStats compare_db(const std::vector<double>& empirical_db, const std::vector<double>& paper_db,
                          const std::vector<double>& exact_db, double burn_in_fraction) {
    require(!empirical_db.empty(), "compare: empty curves");
    require(paper_db.size() == empirical_db.size() && exact_db.size() == empirical_db.size(),
            "compare: curve lengths differ");
    DeviationStats stats;
    stats.tail_begin = tail_start(empirical_db.size(), burn_in_fraction);
    stats.paper = db_deviation(empirical_db, paper_db, stats.tail_begin);
    stats.exact = db_deviation(empirical_db, exact_db, stats.tail_begin);
    stats.tail_mean_empirical = tail_mean(from_db(empirical_db), stats.tail_begin);
    stats.tail_mean_paper = tail_mean(from_db(paper_db), stats.tail_begin);
    stats.tail_mean_exact = tail_mean(from_db(exact_db), stats.tail_begin);
    stats.tail_standard_error = std::numeric_limits<double>::quiet_NaN();
    return stats;
}

DeviationStats compare(const RunResult& result, double burn_in_fraction) {
    const auto& emp = result.msd_mean;
    require(!emp.empty(), "compare: empty result");
    DeviationStats stats;
    stats.tail_begin = tail_start(emp.size(), burn_in_fraction);
    stats.paper = db_deviation(result.msd_mean_db, to_db(result.theory_paper.values), stats.tail_begin);
    stats.exact = db_deviation(result.msd_mean_db, to_db(result.theory_exact.values), stats.tail_begin);
    stats.tail_mean_empirical = tail_mean(emp, stats.tail_begin);
    stats.tail_mean_paper = tail_mean(result.theory_paper.values, stats.tail_begin);
    stats.tail_mean_exact = tail_mean(result.theory_exact.values, stats.tail_begin);

    const auto runs = result.per_run.rows();
    if (runs < 2 || result.per_run.cols() != static_cast<Eigen::Index>(emp.size())) {
        stats.tail_standard_error = runs == 1 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
        return stats;
    }
    const auto begin = static_cast<Eigen::Index>(stats.tail_begin);
    const Vector per_run_tail = result.per_run.rightCols(result.per_run.cols() - begin).rowwise().mean();
    const double mean = per_run_tail.mean();
    const double var = (per_run_tail.array() - mean).square().sum() / static_cast<double>(runs - 1);
    stats.tail_standard_error = std::sqrt(var / static_cast<double>(runs));
    return stats;
}

double max_standardized_deviation(const RunResult& result) {
    double worst = 0.0;
    for (std::size_t t = 0; t < result.msd_mean.size(); ++t) {
        const double diff = std::abs(result.msd_mean[t] - result.theory_exact.values[t]);
        const double se = result.msd_standard_error[t];
        const double scale = std::abs(result.theory_exact.values[t]);
        // identical runs leave a standard error at the rounding floor
        if (se > 1e-12 * scale) worst = std::max(worst, diff / se);
        else if (diff > 1e-9 * scale) return std::numeric_limits<double>::infinity();
    }
    return worst;
}

StationTable synthetic_stations(int n, std::uint64_t seed) {
    require(n >= 2, "synthetic_stations: need at least 2 stations");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    constexpr double lat_lo = -33.0, lat_hi = 3.0, lon_lo = -72.0, lon_hi = -36.0;
    constexpr double two_pi = 2.0 * std::numbers::pi;

    StationTable table;
    for (int i = 0; i < n; ++i) {
        const double u = unit(rng);
        const double v = unit(rng);
        char id[16];
        std::snprintf(id, sizeof id, "S%04d", i);
        table.ids.emplace_back(id);
        table.lat.push_back(lat_lo + u * (lat_hi - lat_lo));
        table.lon.push_back(lon_lo + v * (lon_hi - lon_lo));
        // warm north, cool south, with a couple of broad ripples
        table.signal.push_back(18.0 + 8.0 * u + 1.5 * std::sin(two_pi * v) + 1.0 * std::cos(two_pi * (u + 0.5 * v)));
    }
    return table;
}

}  // namespace gsp
