#pragma once

#include "gsp/graph.hpp"
#include "gsp/sampling.hpp"

#include <string>
#include <vector>

namespace gsp {

enum class Algorithm { lms, rls };

/// paper_literal evaluates the published closed forms term by term; exact_expectation
/// propagates the error covariance under independent noise at every iteration.
enum class TheoryMode { paper_literal, exact_expectation };

std::string to_string(Algorithm a);
std::string to_string(TheoryMode m);

/// Per-iteration MSD prediction, linear units. values[0] corresponds to t = 1.
struct TheoryCurve {
    TheoryMode mode = TheoryMode::exact_expectation;
    Algorithm algorithm = Algorithm::lms;
    std::vector<double> values;
    double param = 0.0;  // mu or lambda
    std::string label;
};

/// Eigendecomposition of G = U_F^T D_S U_F, shared by every LMS closed form.
class SampledSpectrum {
public:
    SampledSpectrum(const BandBasis& band, const SamplingSet& sampling);

    const Vector& eigenvalues() const noexcept { return eigenvalues_; }
    const Matrix& eigenvectors() const noexcept { return eigenvectors_; }
    bool recoverable() const noexcept { return eigenvalues_(0) > recoverability_tolerance; }

    /// (I - mu G)^p
    Matrix transition_power(double mu, int p) const;
    /// G^-1; throws if G is singular.
    Matrix gram_inverse() const;
    /// max_i |1 - mu g_i|
    double spectral_radius(double mu) const;

private:
    Vector eigenvalues_;
    Matrix eigenvectors_;
};

/// (U_F^T D_S C_w^-1 D_S U_F)^-1 by Cholesky solve.
Matrix rls_gain_matrix(const BandBasis& band, const SamplingSet& sampling, const Vector& c_w);

// Frozen-noise trajectories: the error after t - 1 iterations when the same noise
// vector w enters every update.

/// -A^{t-1} s_F - G^-1 (A^{t-1} - I) U_F^T D_S w
Vector lms_frozen_noise_error(const BandBasis& band, const SamplingSet& sampling, const Vector& s_f, double mu,
                              const Vector& w, int t);
/// -lambda^{t-1} s_F + (1 - lambda^{t-1}) M U_F^T D_S C_w^-1 w
Vector rls_frozen_noise_error(const BandBasis& band, const SamplingSet& sampling, const Vector& s_f,
                              const Vector& c_w, double lambda, const Vector& w, int t);

/// sum_{j=0}^{t-2} A^j mu U_F^T D_S w, accumulated term by term.
Vector geometric_sum_direct(const BandBasis& band, const SamplingSet& sampling, double mu, const Vector& w, int t);
/// -G^-1 (A^{t-1} - I) U_F^T D_S w
Vector geometric_sum_closed(const BandBasis& band, const SamplingSet& sampling, double mu, const Vector& w, int t);

TheoryCurve lms_theory_paper(const BandBasis& band, const SamplingSet& sampling, const Vector& s_f,
                             const Vector& c_w, double mu, int t_max);
TheoryCurve lms_theory_exact(const BandBasis& band, const SamplingSet& sampling, const Vector& s_f,
                             const Vector& c_w, double mu, int t_max);
TheoryCurve rls_theory_paper(const BandBasis& band, const SamplingSet& sampling, const Vector& s_f,
                             const Vector& c_w, double lambda, int t_max);
TheoryCurve rls_theory_exact(const BandBasis& band, const SamplingSet& sampling, const Vector& s_f,
                             const Vector& c_w, double lambda, int t_max);

/// lambda^{2t-2} ||s_F||^2 + (1-lambda)^2 (1 - lambda^{2t-2}) / (1 - lambda^2) tr(M)
double rls_exact_closed_form(double lambda, double s_f_energy, double trace_m, int t);

double lms_steady_state(const BandBasis& band, const SamplingSet& sampling, const Vector& c_w, double mu,
                        TheoryMode mode);
double rls_steady_state(const BandBasis& band, const SamplingSet& sampling, const Vector& c_w, double lambda,
                        TheoryMode mode);

struct LyapunovSolution {
    Matrix p;
    double relative_residual = 0.0;  // ||A P A^T + Q - P||_F / ||P||_F
};

/// Solves P = A P A^T + Q by squared Smith iteration. Requires spectral radius of A below 1.
LyapunovSolution solve_discrete_lyapunov(const Matrix& a, const Matrix& q);

/// Stationary LMS error covariance: A = I - mu G, Q = mu^2 U_F^T D_S C_w D_S U_F.
LyapunovSolution lms_steady_covariance(const BandBasis& band, const SamplingSet& sampling, const Vector& c_w,
                                       double mu);

}  // namespace gsp
