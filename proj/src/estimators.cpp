#include "gsp/estimators.hpp"

#include "gsp/error.hpp"

#include <cmath>
#include <iostream>
#include <limits>

namespace gsp {

SignalModel SignalModel::make(BandBasis band, Vector s_f, SamplingSet sampling, NoiseModel noise) {
    require(s_f.size() == band.f, "signal model: s_f length does not match bandwidth");
    require(sampling.n() == band.n(), "signal model: sampling set and basis disagree on N");
    require(noise.n() == band.n(), "signal model: noise model and basis disagree on N");
    Vector x_o = band.u_f * s_f;
    return SignalModel{std::move(band), std::move(s_f), std::move(x_o), std::move(sampling), std::move(noise)};
}

Vector error_signal(const SignalModel& model, const Vector& s_hat, const Vector& w) {
    require(s_hat.size() == model.band.f, "error_signal: estimate length does not match bandwidth");
    require(w.size() == model.band.n(), "error_signal: noise length does not match node count");
    Vector e = Vector::Zero(model.band.n());
    for (auto i : model.sampling.indices())
        e(i) = model.x_o(i) + w(i) - model.band.u_f.row(i).dot(s_hat);
    return e;
}

LmsState lms_init(const SignalModel& model, double mu) {
    require(mu > 0.0 && std::isfinite(mu), "lms: step size must be positive");
    return LmsState{Vector::Zero(model.band.f), mu, 1};
}

LmsState lms_step(const LmsState& state, const SignalModel& model, const Vector& w) {
    const Vector e = error_signal(model, state.s_hat, w);
    return LmsState{state.s_hat + state.mu * (model.band.u_f.transpose() * e), state.mu, state.t + 1};
}

RlsState rls_init(const SignalModel& model, double lambda) {
    require(lambda > 0.0 && lambda <= 1.0, "rls: forgetting factor must satisfy 0 < lambda <= 1");
    if (lambda < 0.5) std::cerr << "warning: rls forgetting factor " << lambda << " is below 0.5\n";
    require(model.noise.strictly_positive(), "rls: every noise variance must be positive");
    if (!check_recoverability(model.band, model.sampling).ok)
        fail(ErrorKind::numerical, "rls: sampling set is not recoverable");

    const auto& idx = model.sampling.indices();
    const Matrix rows = model.band.u_f(idx, Eigen::all);
    Vector inv_var(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t r = 0; r < idx.size(); ++r) inv_var(static_cast<Eigen::Index>(r)) = 1.0 / model.noise.c_w(idx[r]);
    const Matrix info = rows.transpose() * inv_var.asDiagonal() * rows;

    Eigen::LLT<Matrix> llt(info);
    if (llt.info() != Eigen::Success) fail(ErrorKind::numerical, "rls: information matrix is not positive definite");
    Matrix m = llt.solve(Matrix::Identity(info.rows(), info.cols()));
    m = (0.5 * (m + m.transpose())).eval();
    if (Eigen::LLT<Matrix>(m).info() != Eigen::Success) fail(ErrorKind::numerical, "rls: M is not positive definite");
    return RlsState{Vector::Zero(model.band.f), lambda, std::make_shared<const Matrix>(std::move(m)), 1};
}

RlsState rls_step(const RlsState& state, const SignalModel& model, const Vector& w) {
    Vector e = error_signal(model, state.s_hat, w);
    for (auto i : model.sampling.indices()) e(i) /= model.noise.c_w(i);
    const Vector gain = state.m() * (model.band.u_f.transpose() * e);
    return RlsState{state.s_hat + (1.0 - state.lambda) * gain, state.lambda, state.m_mat, state.t + 1};
}

double msd(const SignalModel& model, const Vector& s_hat) {
    return (model.band.u_f * s_hat - model.x_o).squaredNorm();
}

double msd_frequency(const SignalModel& model, const Vector& s_hat) { return (s_hat - model.s_f).squaredNorm(); }

double msd_db(double value) {
    require(!(value < 0.0) && !std::isnan(value), "msd_db: value must be non-negative");
    if (value == 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(value);
}

}  // namespace gsp
