#pragma once

#include "gsp/graph.hpp"
#include "gsp/noise.hpp"
#include "gsp/sampling.hpp"

#include <memory>

namespace gsp {

/// Bandlimited ground truth x_o = U_F s_F observed through D_S with additive noise.
struct SignalModel {
    BandBasis band;
    Vector s_f;
    Vector x_o;
    SamplingSet sampling;
    NoiseModel noise;

    /// Builds x_o from s_f and checks that all dimensions agree.
    static SignalModel make(BandBasis band, Vector s_f, SamplingSet sampling, NoiseModel noise);
};

struct LmsState {
    Vector s_hat;
    double mu = 0.0;
    int t = 1;
};

struct RlsState {
    Vector s_hat;
    double lambda = 1.0;
    std::shared_ptr<const Matrix> m_mat;  // (U_F^T D_S C_w^-1 D_S U_F)^-1, shared between states
    int t = 1;

    const Matrix& m() const { return *m_mat; }
};

/// e = D_S (x_o + w - U_F s_hat)
Vector error_signal(const SignalModel& model, const Vector& s_hat, const Vector& w);

/// Zero estimate at t = 1.
LmsState lms_init(const SignalModel& model, double mu);

/// s_hat <- s_hat + mu U_F^T e
LmsState lms_step(const LmsState& state, const SignalModel& model, const Vector& w);

/// Computes M by Cholesky solve. Throws if the sampled information matrix is singular
/// or any noise variance is zero. Warns on stderr for lambda < 0.5.
RlsState rls_init(const SignalModel& model, double lambda);

/// s_hat <- s_hat + (1 - lambda) M U_F^T D_S C_w^-1 e
RlsState rls_step(const RlsState& state, const SignalModel& model, const Vector& w);

/// Node-domain squared deviation ||U_F s_hat - x_o||^2.
double msd(const SignalModel& model, const Vector& s_hat);

/// Frequency-domain form ||s_hat - s_F||^2; equal to msd() because U_F^T U_F = I.
double msd_frequency(const SignalModel& model, const Vector& s_hat);

/// 10 log10(value); -inf for an exact zero, throws for negative input.
double msd_db(double value);

}  // namespace gsp
