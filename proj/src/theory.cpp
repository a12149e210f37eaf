#include "gsp/theory.hpp"

#include "gsp/error.hpp"

#include <cmath>

namespace gsp {

std::string to_string(Algorithm a) { return a == Algorithm::lms ? "lms" : "rls"; }

std::string to_string(TheoryMode m) { return m == TheoryMode::paper_literal ? "paper-literal" : "exact-expectation"; }

namespace {

Matrix sampled_rows(const BandBasis& band, const SamplingSet& sampling) {
    require(sampling.n() == band.n(), "theory: sampling set and basis disagree on N");
    return band.u_f(sampling.indices(), Eigen::all);
}

Vector sampled_values(const Vector& v, const SamplingSet& sampling) { return v(sampling.indices()); }

void check_lms_inputs(const BandBasis& band, const Vector& s_f, const Vector& c_w, double mu, int t_max) {
    require(s_f.size() == band.f, "theory: s_f length does not match bandwidth");
    require(c_w.size() == band.n(), "theory: c_w length does not match node count");
    require(c_w.size() == 0 || c_w.minCoeff() >= 0.0, "theory: negative noise variance");
    require(std::isfinite(mu) && mu >= 0.0, "theory: step size must be non-negative");
    require(t_max >= 1, "theory: t_max must be at least 1");
}

void check_rls_inputs(const BandBasis& band, const Vector& s_f, const Vector& c_w, double lambda, int t_max) {
    require(s_f.size() == band.f, "theory: s_f length does not match bandwidth");
    require(c_w.size() == band.n(), "theory: c_w length does not match node count");
    require(c_w.minCoeff() > 0.0, "theory: RLS needs every noise variance to be positive");
    require(lambda > 0.0 && lambda <= 1.0, "theory: forgetting factor must satisfy 0 < lambda <= 1");
    require(t_max >= 1, "theory: t_max must be at least 1");
}

const SampledSpectrum& require_recoverable(const SampledSpectrum& sp) {
    require(sp.recoverable(), "theory: sampling set is not recoverable (U_F^T D_S U_F is singular)");
    return sp;
}

// Diagonal of V^T U_S^T C_S U_S V, i.e. the injected noise energy along each eigen-direction of G.
Vector projected_noise(const Matrix& rows, const Matrix& v, const Vector& c_sampled) {
    const Matrix w = rows * v;
    return (w.array().square().colwise() * c_sampled.array()).colwise().sum().transpose();
}

}  // namespace

SampledSpectrum::SampledSpectrum(const BandBasis& band, const SamplingSet& sampling) {
    const Matrix rows = sampled_rows(band, sampling);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rows.transpose() * rows);
    if (solver.info() != Eigen::Success) fail(ErrorKind::numerical, "theory: eigensolver did not converge");
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
}

Matrix SampledSpectrum::transition_power(double mu, int p) const {
    const Vector powers = (1.0 - mu * eigenvalues_.array()).pow(static_cast<double>(p)).matrix();
    return eigenvectors_ * powers.asDiagonal() * eigenvectors_.transpose();
}

Matrix SampledSpectrum::gram_inverse() const {
    require_recoverable(*this);
    return eigenvectors_ * eigenvalues_.cwiseInverse().asDiagonal() * eigenvectors_.transpose();
}

double SampledSpectrum::spectral_radius(double mu) const {
    return (1.0 - mu * eigenvalues_.array()).abs().maxCoeff();
}

Matrix rls_gain_matrix(const BandBasis& band, const SamplingSet& sampling, const Vector& c_w) {
    require(c_w.size() == band.n(), "rls_gain_matrix: c_w length does not match node count");
    const Matrix rows = sampled_rows(band, sampling);
    const Vector inv_var = sampled_values(c_w, sampling).cwiseInverse();
    require(inv_var.allFinite(), "rls_gain_matrix: zero noise variance on a sampled node");
    const Matrix info = rows.transpose() * inv_var.asDiagonal() * rows;
    Eigen::LLT<Matrix> llt(info);
    if (llt.info() != Eigen::Success)
        fail(ErrorKind::numerical, "rls_gain_matrix: information matrix is singular (non-recoverable sampling)");
    Matrix m = llt.solve(Matrix::Identity(band.f, band.f));
    return 0.5 * (m + m.transpose());
}

Vector lms_frozen_noise_error(const BandBasis& band, const SamplingSet& sampling, const Vector& s_f, double mu,
                              const Vector& w, int t) {
    require(t >= 1, "lms_frozen_noise_error: t must be at least 1");
    return geometric_sum_closed(band, sampling, mu, w, t) -
           SampledSpectrum(band, sampling).transition_power(mu, t - 1) * s_f;
}

Vector rls_frozen_noise_error(const BandBasis& band, const SamplingSet& sampling, const Vector& s_f,
                              const Vector& c_w, double lambda, const Vector& w, int t) {
    require(t >= 1, "rls_frozen_noise_error: t must be at least 1");
    const Matrix m = rls_gain_matrix(band, sampling, c_w);
    const Matrix rows = sampled_rows(band, sampling);
    const Vector driven = m * (rows.transpose() * sampled_values(w, sampling).cwiseQuotient(sampled_values(c_w, sampling)));
    const double decay = std::pow(lambda, t - 1);
    return -decay * s_f + (1.0 - decay) * driven;
}

Vector geometric_sum_direct(const BandBasis& band, const SamplingSet& sampling, double mu, const Vector& w, int t) {
    require(t >= 1, "geometric_sum_direct: t must be at least 1");
    const Matrix rows = sampled_rows(band, sampling);
    const Matrix a = Matrix::Identity(band.f, band.f) - mu * rows.transpose() * rows;
    Vector term = mu * (rows.transpose() * sampled_values(w, sampling));
    Vector acc = Vector::Zero(band.f);
    for (int j = 0; j <= t - 2; ++j) {
        acc += term;
        term = a * term;
    }
    return acc;
}

Vector geometric_sum_closed(const BandBasis& band, const SamplingSet& sampling, double mu, const Vector& w, int t) {
    require(t >= 1, "geometric_sum_closed: t must be at least 1");
    const SampledSpectrum sp(band, sampling);
    const Matrix rows = sampled_rows(band, sampling);
    const Matrix shifted = sp.transition_power(mu, t - 1) - Matrix::Identity(band.f, band.f);
    return -(sp.gram_inverse() * (shifted * (rows.transpose() * sampled_values(w, sampling))));
}

TheoryCurve lms_theory_paper(const BandBasis& band, const SamplingSet& sampling, const Vector& s_f,
                             const Vector& c_w, double mu, int t_max) {
    check_lms_inputs(band, s_f, c_w, mu, t_max);
    const SampledSpectrum sp(band, sampling);
    require_recoverable(sp);
    const Matrix rows = sampled_rows(band, sampling);
    const Vector c_s = sampled_values(c_w, sampling);
    const auto& g = sp.eigenvalues();
    const auto& v = sp.eigenvectors();

    const Vector s_rot = v.transpose() * s_f;
    // diag(sqrt(C_w)) enters the cross term as the vector sqrt(c_w)
    const Vector r_rot = v.transpose() * (rows.transpose() * c_s.cwiseSqrt());
    const Vector q = projected_noise(rows, v, c_s);
    const Eigen::ArrayXd a = 1.0 - mu * g.array();

    TheoryCurve curve{TheoryMode::paper_literal, Algorithm::lms, {}, mu, {}};
    curve.values.reserve(static_cast<std::size_t>(t_max));
    for (int t = 1; t <= t_max; ++t) {
        const Eigen::ArrayXd p = a.pow(static_cast<double>(t - 1));
        const Eigen::ArrayXd gain = (p - 1.0) / g.array();
        const double decay = (p * s_rot.array()).square().sum();
        const double cross = 2.0 * (p * s_rot.array() * gain * r_rot.array()).sum();
        const double spread = (gain.square() * q.array()).sum();
        curve.values.push_back(decay + cross + spread);
    }
    return curve;
}

TheoryCurve lms_theory_exact(const BandBasis& band, const SamplingSet& sampling, const Vector& s_f,
                             const Vector& c_w, double mu, int t_max) {
    check_lms_inputs(band, s_f, c_w, mu, t_max);
    const SampledSpectrum sp(band, sampling);
    require_recoverable(sp);
    const Matrix rows = sampled_rows(band, sampling);
    const auto& v = sp.eigenvectors();

    // P(t+1) = A P(t) A^T + mu^2 Q is diagonal-decoupled in the eigenbasis of G for the trace.
    const Eigen::ArrayXd a2 = (1.0 - mu * sp.eigenvalues().array()).square();
    const Eigen::ArrayXd inject = mu * mu * projected_noise(rows, v, sampled_values(c_w, sampling)).array();
    Eigen::ArrayXd diag = (v.transpose() * s_f).array().square();

    TheoryCurve curve{TheoryMode::exact_expectation, Algorithm::lms, {}, mu, {}};
    curve.values.reserve(static_cast<std::size_t>(t_max));
    for (int t = 1; t <= t_max; ++t) {
        curve.values.push_back(diag.sum());
        diag = a2 * diag + inject;
    }
    return curve;
}

TheoryCurve rls_theory_paper(const BandBasis& band, const SamplingSet& sampling, const Vector& s_f,
                             const Vector& c_w, double lambda, int t_max) {
    check_rls_inputs(band, s_f, c_w, lambda, t_max);
    const Matrix m = rls_gain_matrix(band, sampling, c_w);
    const Matrix rows = sampled_rows(band, sampling);
    // C_w^-1 diag(sqrt(C_w)) read as the vector 1 / sqrt(c_w)
    const double cross = s_f.dot(m * (rows.transpose() * sampled_values(c_w, sampling).cwiseSqrt().cwiseInverse()));
    const double trace_m = m.trace();
    const double energy = s_f.squaredNorm();

    TheoryCurve curve{TheoryMode::paper_literal, Algorithm::rls, {}, lambda, {}};
    curve.values.reserve(static_cast<std::size_t>(t_max));
    for (int t = 1; t <= t_max; ++t) {
        const double decay = std::pow(lambda, t - 1);
        curve.values.push_back(decay * decay * energy + 2.0 * (decay - 1.0) * decay * cross +
                               (decay - 1.0) * (decay - 1.0) * trace_m);
    }
    return curve;
}

TheoryCurve rls_theory_exact(const BandBasis& band, const SamplingSet& sampling, const Vector& s_f,
                             const Vector& c_w, double lambda, int t_max) {
    check_rls_inputs(band, s_f, c_w, lambda, t_max);
    const double inject = (1.0 - lambda) * (1.0 - lambda) * rls_gain_matrix(band, sampling, c_w).trace();
    double value = s_f.squaredNorm();

    TheoryCurve curve{TheoryMode::exact_expectation, Algorithm::rls, {}, lambda, {}};
    curve.values.reserve(static_cast<std::size_t>(t_max));
    for (int t = 1; t <= t_max; ++t) {
        curve.values.push_back(value);
        value = lambda * lambda * value + inject;
    }
    return curve;
}

double rls_exact_closed_form(double lambda, double s_f_energy, double trace_m, int t) {
    require(t >= 1, "rls_exact_closed_form: t must be at least 1");
    const double decay2 = std::pow(lambda, 2 * (t - 1));
    if (lambda == 1.0) return s_f_energy;
    return decay2 * s_f_energy + (1.0 - lambda) * (1.0 - lambda) * (1.0 - decay2) / (1.0 - lambda * lambda) * trace_m;
}

LyapunovSolution solve_discrete_lyapunov(const Matrix& a, const Matrix& q) {
    require(a.rows() == a.cols() && q.rows() == a.rows() && q.cols() == a.cols(),
            "solve_discrete_lyapunov: dimension mismatch");
    Matrix p = q;
    Matrix ak = a;
    // P = sum_j A^j Q (A^T)^j; each sweep doubles the number of summed terms.
    for (int it = 0; it < 200; ++it) {
        const Matrix delta = ak * p * ak.transpose();
        p += delta;
        ak = ak * ak;
        if (!p.allFinite()) fail(ErrorKind::numerical, "solve_discrete_lyapunov: iteration diverged");
        if (delta.norm() <= 1e-17 * p.norm()) break;
    }
    p = (0.5 * (p + p.transpose())).eval();
    const double scale = p.norm();
    const double residual = (a * p * a.transpose() + q - p).norm();
    return {std::move(p), scale > 0.0 ? residual / scale : residual};
}

LyapunovSolution lms_steady_covariance(const BandBasis& band, const SamplingSet& sampling, const Vector& c_w,
                                       double mu) {
    require(c_w.size() == band.n(), "lms_steady_covariance: c_w length does not match node count");
    const SampledSpectrum sp(band, sampling);
    if (!(sp.spectral_radius(mu) < 1.0))
        fail(ErrorKind::invalid_argument, "lms_steady_state: step size is outside the stable range");
    const Matrix rows = sampled_rows(band, sampling);
    const Matrix a = Matrix::Identity(band.f, band.f) - mu * rows.transpose() * rows;
    const Matrix q = mu * mu * rows.transpose() * sampled_values(c_w, sampling).asDiagonal() * rows;
    return solve_discrete_lyapunov(a, q);
}

double lms_steady_state(const BandBasis& band, const SamplingSet& sampling, const Vector& c_w, double mu,
                        TheoryMode mode) {
    if (mode == TheoryMode::exact_expectation) return lms_steady_covariance(band, sampling, c_w, mu).p.trace();

    const SampledSpectrum sp(band, sampling);
    require_recoverable(sp);
    if (!(sp.spectral_radius(mu) < 1.0))
        fail(ErrorKind::invalid_argument, "lms_steady_state: step size is outside the stable range");
    const Matrix rows = sampled_rows(band, sampling);
    const Vector q = projected_noise(rows, sp.eigenvectors(), sampled_values(c_w, sampling));
    return (q.array() / sp.eigenvalues().array().square()).sum();
}

double rls_steady_state(const BandBasis& band, const SamplingSet& sampling, const Vector& c_w, double lambda,
                        TheoryMode mode) {
    require(lambda > 0.0 && lambda < 1.0, "rls_steady_state: forgetting factor must satisfy 0 < lambda < 1");
    const double trace_m = rls_gain_matrix(band, sampling, c_w).trace();
    return mode == TheoryMode::paper_literal ? trace_m : (1.0 - lambda) / (1.0 + lambda) * trace_m;
}

}  // namespace gsp
