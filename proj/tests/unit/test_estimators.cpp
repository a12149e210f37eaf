#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gsp/error.hpp"
#include "gsp/estimators.hpp"
#include "gsp/theory.hpp"
#include "support/oracles.hpp"

#include <cmath>
#include <limits>

using namespace gsp;

namespace {

BandBasis haar_band() {
    Matrix u(4, 2);
    u << 0.5, 0.5, 0.5, 0.5, 0.5, -0.5, 0.5, -0.5;
    return BandBasis{2, u};
}

SignalModel random_model(std::mt19937_64& rng, Eigen::Index n, Eigen::Index f, Eigen::Index m,
                         double n_a = 0.05, double n_b = 0.05) {
    auto [band, s] = oracle::random_instance(n, f, m, rng);
    return SignalModel::make(band, oracle::random_vector(f, rng), s, build_cw(n_a, n_b, n, rng()));
}

/// M from an explicit dense inverse.
Matrix dense_m(const SignalModel& model) {
    const Matrix d = oracle::dense_sampling(model.sampling);
    const Matrix cinv = model.noise.c_w.cwiseInverse().asDiagonal();
    return (model.band.u_f.transpose() * d * cinv * d * model.band.u_f).inverse();
}

Vector rls_drive(const SignalModel& model, const Vector& w) {
    const Matrix d = oracle::dense_sampling(model.sampling);
    return dense_m(model) * model.band.u_f.transpose() * d * model.noise.c_w.cwiseInverse().asDiagonal() * w;
}

}  // namespace

TEST_SUITE("error_signal") {
    TEST_CASE("perfect estimate and no noise gives zero error") {
        std::mt19937_64 rng(1);
        const auto model = random_model(rng, 8, 3, 5);
        CHECK(error_signal(model, model.s_f, Vector::Zero(8)).cwiseAbs().maxCoeff() < 1e-14);
    }

    TEST_CASE("empty sampling set gives zero error") {
        std::mt19937_64 rng(2);
        const auto band = oracle::random_band(6, 2, rng);
        const auto model = SignalModel::make(band, oracle::random_vector(2, rng), SamplingSet({}, 6), build_cw(0, 1, 6, 0));
        CHECK(error_signal(model, oracle::random_vector(2, rng), oracle::random_vector(6, rng)) == Vector::Zero(6));
    }

    TEST_CASE("hand-computed N = 4, F = 2 residual") {
        Vector s_f(2), s_hat(2), w(4), expected(4);
        s_f << 2, 4;       // x_o = (3, 3, -1, -1)
        s_hat << 1, 1;     // U s_hat = (1, 1, 0, 0)
        w << 0.1, 0.2, 0.3, 0.4;
        expected << 2.1, 0.0, -0.7, 0.0;
        const auto model = SignalModel::make(haar_band(), s_f, SamplingSet({0, 2}, 4), build_cw(0, 1, 4, 0));
        CHECK((error_signal(model, s_hat, w) - expected).cwiseAbs().maxCoeff() < 1e-15);
    }

    TEST_CASE("dimension mismatch") {
        const auto model = SignalModel::make(haar_band(), Vector::Ones(2), SamplingSet::all(4), build_cw(0, 1, 4, 0));
        CHECK_THROWS_AS(error_signal(model, Vector::Zero(3), Vector::Zero(4)), Error);
        CHECK_THROWS_AS(error_signal(model, Vector::Zero(2), Vector::Zero(5)), Error);
        CHECK_THROWS_AS(SignalModel::make(haar_band(), Vector::Ones(3), SamplingSet::all(4), build_cw(0, 1, 4, 0)), Error);
    }
}

TEST_SUITE("lms") {
    TEST_CASE("starts from zero at t = 1") {
        std::mt19937_64 rng(3);
        const auto model = random_model(rng, 6, 2, 3);
        const auto st = lms_init(model, 0.5);
        CHECK(st.t == 1);
        CHECK(st.s_hat == Vector::Zero(2));
        CHECK_THROWS_AS(lms_init(model, 0.0), Error);
    }

    TEST_CASE("vanishing step leaves the state unchanged") {
        std::mt19937_64 rng(4);
        const auto model = random_model(rng, 6, 2, 3);
        const auto st = lms_step(lms_init(model, 1e-300), model, oracle::random_vector(6, rng));
        CHECK(st.s_hat.cwiseAbs().maxCoeff() < 1e-290);
        CHECK(st.t == 2);
    }

    TEST_CASE("first noiseless step gives -A s_F") {
        std::mt19937_64 rng(5);
        const auto model = random_model(rng, 8, 3, 5);
        const double mu = 0.7;
        const Matrix a = Matrix::Identity(3, 3) - mu * oracle::dense_gram(model.band, model.sampling);
        const auto st = lms_step(lms_init(model, mu), model, Vector::Zero(8));
        CHECK(((st.s_hat - model.s_f) - (-a * model.s_f)).cwiseAbs().maxCoeff() < 1e-14);
    }

    TEST_CASE("five frozen-noise steps match the closed form, N = 6, F = 2") {
        std::mt19937_64 rng(6);
        const auto model = random_model(rng, 6, 2, 4);
        const double mu = 0.9;
        const Vector w = draw_noise(model.noise, rng);
        auto st = lms_init(model, mu);
        for (int i = 0; i < 5; ++i) st = lms_step(st, model, w);
        CHECK(st.t == 6);
        const Vector closed = lms_frozen_noise_error(model.band, model.sampling, model.s_f, mu, w, 6);
        CHECK(((st.s_hat - model.s_f) - closed).cwiseAbs().maxCoeff() < 1e-10);
    }

    TEST_CASE("noiseless contraction is monotone and converges") {
        std::mt19937_64 rng(7);
        const auto model = random_model(rng, 12, 4, 7);
        const double mu = 0.8 * stable_step_range(model.band, model.sampling).mu_max;
        auto st = lms_init(model, mu);
        double prev = msd(model, st.s_hat);
        for (int t = 0; t < 3000; ++t) {
            st = lms_step(st, model, Vector::Zero(12));
            const double cur = msd(model, st.s_hat);
            CHECK(cur <= prev * (1.0 + 1e-12) + 1e-28 * model.s_f.squaredNorm());
            prev = cur;
        }
        CHECK(prev < 1e-10 * model.s_f.squaredNorm());
    }
}

TEST_SUITE("rls") {
    TEST_CASE("full sampling with equal variances gives M = sigma^2 I") {
        std::mt19937_64 rng(8);
        const auto band = oracle::random_band(7, 3, rng);
        const auto model = SignalModel::make(band, oracle::random_vector(3, rng), SamplingSet::all(7), build_cw(0, 0.3, 7, 0));
        const auto st = rls_init(model, 0.9);
        CHECK((st.m() - 0.3 * Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(st.s_hat == Vector::Zero(3));
    }

    TEST_CASE("M scales linearly with C_w, N = 6") {
        std::mt19937_64 rng(9);
        const auto model = random_model(rng, 6, 2, 4);
        auto doubled = model;
        doubled.noise.c_w *= 2.0;
        const Matrix m1 = rls_init(model, 0.8).m();
        const Matrix m2 = rls_init(doubled, 0.8).m();
        CHECK((m2 - 2.0 * m1).cwiseAbs().maxCoeff() < 1e-12 * m1.cwiseAbs().maxCoeff());
        CHECK((m1 - dense_m(model)).cwiseAbs().maxCoeff() < 1e-10 * m1.cwiseAbs().maxCoeff());
    }

    TEST_CASE("Case I sized M is symmetric positive definite") {
        std::mt19937_64 rng(10);
        const auto band = oracle::random_band(299, 200, rng);
        const auto s = oracle::random_subset(299, 210, rng);
        REQUIRE(check_recoverability(band, s).ok);
        const auto model = SignalModel::make(band, oracle::random_vector(200, rng), s, build_cw(0.012, 0.0, 299, 3));
        const auto st = rls_init(model, 0.85);
        CHECK(st.m().rows() == 200);
        CHECK(st.m() == st.m().transpose());
        CHECK(oracle::eigenvalues(st.m())(0) > 0.0);
    }

    TEST_CASE("invalid inputs") {
        std::mt19937_64 rng(11);
        const auto band = oracle::random_band(6, 3, rng);
        const auto bad_s = SignalModel::make(band, Vector::Ones(3), SamplingSet({0, 1}, 6), build_cw(0, 1, 6, 0));
        CHECK_THROWS_AS(rls_init(bad_s, 0.9), Error);
        const auto zero_var = SignalModel::make(band, Vector::Ones(3), SamplingSet::all(6), zero_noise(6));
        CHECK_THROWS_AS(rls_init(zero_var, 0.9), Error);
        const auto ok = SignalModel::make(band, Vector::Ones(3), SamplingSet::all(6), build_cw(0, 1, 6, 0));
        CHECK_THROWS_AS(rls_init(ok, 0.0), Error);
        CHECK_THROWS_AS(rls_init(ok, 1.2), Error);
        CHECK_NOTHROW(rls_init(ok, 0.3));  // allowed, warns
    }

    TEST_CASE("lambda = 1 freezes the estimate") {
        std::mt19937_64 rng(12);
        const auto model = random_model(rng, 8, 3, 5);
        auto st = rls_init(model, 1.0);
        for (int i = 0; i < 20; ++i) st = rls_step(st, model, draw_noise(model.noise, rng));
        CHECK(st.s_hat == Vector::Zero(3));
        CHECK(st.t == 21);
    }

    TEST_CASE("second and third iterates follow the frozen-noise recursion") {
        std::mt19937_64 rng(13);
        const auto model = random_model(rng, 8, 3, 5);
        const double lambda = 0.79;
        const Vector w = draw_noise(model.noise, rng);
        const Vector drive = rls_drive(model, w);
        auto st = rls_step(rls_init(model, lambda), model, w);
        const Vector d2 = -lambda * model.s_f + (1 - lambda) * drive;
        CHECK(((st.s_hat - model.s_f) - d2).cwiseAbs().maxCoeff() < 1e-12);
        st = rls_step(st, model, w);
        const Vector d3 = -lambda * lambda * model.s_f + (1 - lambda * lambda) * drive;
        CHECK(((st.s_hat - model.s_f) - d3).cwiseAbs().maxCoeff() < 1e-12);
        const Vector closed = rls_frozen_noise_error(model.band, model.sampling, model.s_f, model.noise.c_w, lambda, w, 3);
        CHECK((closed - d3).cwiseAbs().maxCoeff() < 1e-12);
    }

    TEST_CASE("noiseless geometric decay") {
        std::mt19937_64 rng(14);
        const auto model = random_model(rng, 10, 4, 6);
        const double lambda = 0.61;
        auto st = rls_init(model, lambda);
        for (int t = 1; t <= 40; ++t) {
            const double expected = std::pow(lambda, 2 * t - 2) * model.s_f.squaredNorm();
            // scale of ||s_F||^2: late iterates are formed by cancellation against s_F
            CHECK(std::abs(msd(model, st.s_hat) - expected) <= 1e-10 * model.s_f.squaredNorm());
            st = rls_step(st, model, Vector::Zero(10));
        }
    }
}

TEST_SUITE("msd") {
    TEST_CASE("examples") {
        std::mt19937_64 rng(15);
        const auto model = random_model(rng, 10, 4, 6);
        CHECK(msd(model, model.s_f) < 1e-28);
        CHECK(msd(model, Vector::Zero(4)) == doctest::Approx(model.s_f.squaredNorm()).epsilon(1e-13));
    }

    TEST_CASE("node and frequency domain agree") {
        std::mt19937_64 rng(16);
        for (int trial = 0; trial < 50; ++trial) {
            const auto model = random_model(rng, 10, 4, 6);
            const Vector s_hat = oracle::random_vector(4, rng);
            const double node = msd(model, s_hat);
            CHECK(std::abs(node - msd_frequency(model, s_hat)) <= 1e-12 * node);
        }
    }

    TEST_CASE("decibels") {
        CHECK(msd_db(1.0) == 0.0);
        CHECK(msd_db(100.0) == doctest::Approx(20.0).epsilon(1e-15));
        CHECK(msd_db(0.05) == doctest::Approx(-13.010299956639812).epsilon(1e-14));
        CHECK(msd_db(0.0) == -std::numeric_limits<double>::infinity());
        CHECK_THROWS_AS(msd_db(-1.0), Error);
    }
}
