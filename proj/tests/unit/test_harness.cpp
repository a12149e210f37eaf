#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gsp/error.hpp"
#include "gsp/harness.hpp"
#include "support/oracles.hpp"

#include <cmath>
#include <set>

using namespace gsp;

namespace {

CaseSetup small_case(std::uint64_t seed, Eigen::Index n, Eigen::Index f, Eigen::Index m) {
    std::mt19937_64 rng(seed);
    auto [band, s] = oracle::random_instance(n, f, m, rng);
    Vector s_f = oracle::random_vector(f, rng);
    Vector x_o = band.u_f * s_f;
    return CaseSetup{Graph{}, GftBasis{}, band, s, Projection{s_f, x_o}};
}

ExperimentConfig small_config(Algorithm alg, double param, int runs, int iterations) {
    ExperimentConfig c;
    c.k = 3;
    c.f = 4;
    c.sample_size = 6;
    c.scenario = "iii";
    c.n_a = 0.05;
    c.n_b = 0.05;
    c.algorithm = alg;
    c.param = param;
    c.runs = runs;
    c.iterations = iterations;
    c.master_seed = 17;
    return c;
}

bool has_error(const ExperimentConfig& c, const std::string& fragment) {
    for (const auto& e : c.validate())
        if (e.find(fragment) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_SUITE("run") {
    TEST_CASE("single run, single iteration is the initial energy") {
        const auto setup = small_case(1, 10, 4, 6);
        for (auto alg : {Algorithm::lms, Algorithm::rls}) {
            const auto res = run_on_case(small_config(alg, 0.6, 1, 1), setup);
            REQUIRE(res.msd_mean.size() == 1);
            CHECK(res.msd_mean[0] == doctest::Approx(setup.projection.s_f.squaredNorm()).epsilon(1e-12));
            CHECK(res.per_run.rows() == 1);
            CHECK(res.per_run.cols() == 1);
            CHECK(res.msd_standard_error[0] == 0.0);
        }
    }

    TEST_CASE("every run starts from the same deterministic point") {
        const auto setup = small_case(2, 10, 4, 6);
        const auto res = run_on_case(small_config(Algorithm::lms, 0.5, 20, 5), setup);
        const double e = setup.projection.s_f.squaredNorm();
        for (Eigen::Index r = 0; r < res.per_run.rows(); ++r) CHECK(res.per_run(r, 0) == doctest::Approx(e).epsilon(1e-12));
        CHECK(res.msd_standard_error[0] < 1e-12 * e);
    }

    TEST_CASE("bit-identical across thread counts and reruns") {
        const auto setup = small_case(3, 10, 4, 6);
        for (auto alg : {Algorithm::lms, Algorithm::rls}) {
            auto cfg = small_config(alg, 0.7, 37, 40);
            const auto a = run_on_case(cfg, setup);
            cfg.threads = 4;
            const auto b = run_on_case(cfg, setup);
            cfg.threads = 1;
            const auto c = run_on_case(cfg, setup);
            CHECK(a.per_run == b.per_run);
            CHECK(a.per_run == c.per_run);
            CHECK(a.msd_mean == b.msd_mean);
            CHECK(a.msd_standard_error == b.msd_standard_error);
            cfg.master_seed += 1;
            const auto d = run_on_case(cfg, setup);
            CHECK(a.per_run != d.per_run);
        }
    }

    TEST_CASE("averaging is linear and precedes the dB map") {
        const auto setup = small_case(4, 10, 4, 6);
        const auto res = run_on_case(small_config(Algorithm::lms, 0.5, 2, 30), setup);
        bool differs_from_db_average = false;
        for (Eigen::Index t = 0; t < res.per_run.cols(); ++t) {
            const double a = res.per_run(0, t), b = res.per_run(1, t);
            const auto ti = static_cast<std::size_t>(t);
            CHECK(res.msd_mean[ti] == (a + b) / 2.0);
            CHECK(res.msd_mean_db[ti] == 10.0 * std::log10((a + b) / 2.0));
            const double db_avg = 5.0 * (std::log10(a) + std::log10(b));
            if (std::abs(db_avg - res.msd_mean_db[ti]) > 1e-6) differs_from_db_average = true;
        }
        CHECK(differs_from_db_average);
    }

    TEST_CASE("theory curves are attached with the configured mode and length") {
        const auto setup = small_case(5, 10, 4, 6);
        const auto res = run_on_case(small_config(Algorithm::rls, 0.8, 3, 25), setup);
        CHECK(res.theory_paper.mode == TheoryMode::paper_literal);
        CHECK(res.theory_exact.mode == TheoryMode::exact_expectation);
        CHECK(res.theory_paper.values.size() == 25);
        CHECK(res.theory_exact.values.size() == 25);
        CHECK(res.theory_exact.algorithm == Algorithm::rls);
    }

    TEST_CASE("unstable step size is flagged but still run") {
        const auto setup = small_case(6, 10, 4, 6);
        const double mu_max = stable_step_range(setup.band, setup.sampling).mu_max;
        const auto res = run_on_case(small_config(Algorithm::lms, 1.2 * mu_max, 2, 50), setup);
        CHECK(res.unstable);
        CHECK(res.msd_mean.back() > res.msd_mean.front());
        const auto ok = run_on_case(small_config(Algorithm::lms, 0.5 * mu_max, 2, 5), setup);
        CHECK_FALSE(ok.unstable);
    }

    TEST_CASE("noiseless lms: empirical equals theory") {
        const auto setup = small_case(7, 10, 4, 6);
        auto cfg = small_config(Algorithm::lms, 0.6, 3, 80);
        cfg.scenario.clear();
        cfg.n_a = 0.0;
        cfg.n_b = 0.0;
        const auto res = run_on_case(cfg, setup);
        CHECK(res.noise.c_w.isZero());
        const auto dev = compare(res, 0.0);
        CHECK(dev.exact.max_abs_db <= 1e-9);
        CHECK(dev.paper.max_abs_db <= 1e-9);
        CHECK(max_standardized_deviation(res) == 0.0);
    }

    TEST_CASE("noiseless rls is rejected") {
        const auto setup = small_case(8, 10, 4, 6);
        auto cfg = small_config(Algorithm::rls, 0.6, 3, 10);
        cfg.n_a = 0.0;
        cfg.n_b = 0.0;
        CHECK_THROWS_AS(run_on_case(cfg, setup), Error);
    }
}

TEST_SUITE("compare") {
    TEST_CASE("theory identical to empirical gives zero deviation") {
        const auto setup = small_case(9, 10, 4, 6);
        auto res = run_on_case(small_config(Algorithm::lms, 0.5, 4, 20), setup);
        res.theory_paper.values = res.msd_mean;
        res.theory_exact.values = res.msd_mean;
        const auto dev = compare(res);
        CHECK(dev.paper.max_abs_db == 0.0);
        CHECK(dev.paper.mean_abs_db == 0.0);
        CHECK(dev.exact.max_abs_db == 0.0);
        CHECK(dev.exact.mean_abs_db == 0.0);
        CHECK(dev.tail_mean_empirical == dev.tail_mean_exact);
    }

    TEST_CASE("tail boundaries") {
        const auto setup = small_case(10, 10, 4, 6);
        const auto res = run_on_case(small_config(Algorithm::lms, 0.5, 4, 20), setup);
        CHECK(compare(res, 0.5).tail_begin == 10);
        CHECK(compare(res, 0.0).tail_begin == 0);
        CHECK(compare(res, 0.99).tail_begin == 19);
        CHECK_THROWS_AS(compare(res, 1.0), Error);
        CHECK_THROWS_AS(compare(res, -0.1), Error);
    }

    TEST_CASE("db comparison is symmetric and has no standard error") {
        const std::vector<double> a{0.0, -1.0, -2.0, -3.0}, b{0.5, -1.5, -2.0, -2.0};
        const auto ab = compare_db(a, b, b, 0.5);
        const auto ba = compare_db(b, a, a, 0.5);
        CHECK(ab.paper.max_abs_db == doctest::Approx(1.0));
        CHECK(ab.paper.mean_abs_db == doctest::Approx(0.5));
        CHECK(ab.paper.max_abs_db == ba.paper.max_abs_db);
        CHECK(ab.exact.mean_abs_db == ba.exact.mean_abs_db);
        CHECK(std::isnan(ab.tail_standard_error));
        CHECK_THROWS_AS(compare_db(a, {1.0}, b), Error);
        const auto undefined = compare_db(a, {0.0, -1.0, std::nan(""), -3.0}, a, 0.0);
        CHECK(std::isnan(undefined.paper.max_abs_db));
        CHECK(std::isnan(undefined.paper.mean_abs_db));
        CHECK(undefined.exact.max_abs_db == 0.0);
    }

    TEST_CASE("exact theory lies within three standard errors of a large average") {
        const auto setup = small_case(11, 10, 4, 6);
        for (auto [alg, param] : {std::pair{Algorithm::lms, 0.6}, std::pair{Algorithm::rls, 0.8}}) {
            auto cfg = small_config(alg, param, 10000, 200);
            const auto res = run_on_case(cfg, setup);
            const auto dev = res.deviation;
            CHECK(std::abs(dev.tail_mean_empirical - dev.tail_mean_exact) <= 3.0 * dev.tail_standard_error);
            CHECK(dev.exact.mean_abs_db < 0.1);
        }
    }

    TEST_CASE("doubling the runs shrinks the standard error by about 1/sqrt(2)") {
        const auto setup = small_case(12, 10, 4, 6);
        const auto a = run_on_case(small_config(Algorithm::lms, 0.6, 2000, 60), setup);
        const auto b = run_on_case(small_config(Algorithm::lms, 0.6, 4000, 60), setup);
        const double ratio = b.deviation.tail_standard_error / a.deviation.tail_standard_error;
        CHECK(std::abs(ratio - 1.0 / std::sqrt(2.0)) <= 0.2 / std::sqrt(2.0));
    }
}

TEST_SUITE("seeds") {
    TEST_CASE("derived seeds are deterministic and distinct") {
        CHECK(derive_seed(1, SeedPurpose::run, 0) == derive_seed(1, SeedPurpose::run, 0));
        std::set<std::uint64_t> seen;
        for (std::uint64_t i = 0; i < 100; ++i) seen.insert(derive_seed(1, SeedPurpose::run, i));
        seen.insert(derive_seed(1, SeedPurpose::covariance));
        seen.insert(derive_seed(1, SeedPurpose::sampling));
        seen.insert(derive_seed(2, SeedPurpose::run, 0));
        CHECK(seen.size() == 103);
    }
}

TEST_SUITE("config") {
    TEST_CASE("defaults are valid") { CHECK(ExperimentConfig{}.validate().empty()); }

    TEST_CASE("every violation is listed") {
        ExperimentConfig c;
        c.k = 0;
        c.f = 10;
        c.sample_size = 5;
        c.iterations = 0;
        c.runs = 0;
        c.threads = 0;
        c.param = -1.0;
        const auto errors = c.validate();
        CHECK(errors.size() == 6);
        CHECK(has_error(c, "k must"));
        CHECK(has_error(c, "sample_size"));
        CHECK(has_error(c, "step size"));
    }

    TEST_CASE("rls parameter range") {
        ExperimentConfig c;
        c.algorithm = Algorithm::rls;
        c.param = 1.0;
        CHECK(c.validate().empty());
        c.param = 1.01;
        CHECK(has_error(c, "forgetting factor"));
        c.param = 0.9;
        c.n_a = 0.0;
        CHECK(has_error(c, "cannot both be zero"));
        c.n_a = -0.1;
        CHECK(has_error(c, "non-negative"));
    }
}

TEST_SUITE("synthetic stations") {
    TEST_CASE("two stations are distinct") {
        const auto st = synthetic_stations(2, 1);
        REQUIRE(st.size() == 2);
        CHECK((st.lat[0] != st.lat[1] || st.lon[0] != st.lon[1]));
        CHECK_NOTHROW(st.validate());
        CHECK_THROWS_AS(synthetic_stations(1, 1), Error);
    }

    TEST_CASE("shape, bounds and determinism") {
        const auto a = synthetic_stations(299, 5);
        const auto b = synthetic_stations(299, 5);
        const auto c = synthetic_stations(299, 6);
        REQUIRE(a.size() == 299);
        CHECK(a.ids.front() == "S0000");
        CHECK(a.ids.back() == "S0298");
        CHECK(a.lat == b.lat);
        CHECK(a.signal == b.signal);
        CHECK(a.lat != c.lat);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK((a.lat[i] >= -33.0 && a.lat[i] <= 3.0));
            CHECK((a.lon[i] >= -72.0 && a.lon[i] <= -36.0));
        }
    }

    TEST_CASE("field is close to bandlimited on the knn graph") {
        const auto st = synthetic_stations(299, 7);
        const auto basis = gft_basis(laplacian(build_knn_graph(st, 8)));
        const auto proj = project_bandlimited(band_select(basis, 2 * 299 / 3), Eigen::Map<const Vector>(st.signal.data(), 299));
        const Vector x = Eigen::Map<const Vector>(st.signal.data(), 299);
        CHECK((x - proj.x_o).norm() / x.norm() < 0.5);
    }

    TEST_CASE("end-to-end experiment on a small synthetic case") {
        ExperimentConfig c;
        c.k = 4;
        c.f = 10;
        c.sample_size = 14;
        c.iterations = 30;
        c.runs = 5;
        c.param = 0.5;
        const auto st = synthetic_stations(40, 3);
        const auto res = run_experiment(c, st);
        CHECK(res.sampling.size() == 14);
        CHECK(res.msd_mean.size() == 30);
        CHECK(res.msd_mean.back() < res.msd_mean.front());
        c.sampling_strategy = SamplingStrategy::random;
        CHECK(run_experiment(c, st).sampling.size() == 14);
    }
}
