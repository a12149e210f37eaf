#pragma once

#include "gsp/graph.hpp"

#include <cstdint>
#include <vector>

namespace gsp {

/// Sorted set of observed node indices. Stands in for the diagonal 0/1 matrix D_S.
class SamplingSet {
public:
    SamplingSet() = default;
    /// Sorts and validates; throws on duplicates or out-of-range indices.
    SamplingSet(std::vector<Eigen::Index> indices, Eigen::Index n);

    static SamplingSet all(Eigen::Index n);

    const std::vector<Eigen::Index>& indices() const noexcept { return indices_; }
    Eigen::Index n() const noexcept { return n_; }
    std::size_t size() const noexcept { return indices_.size(); }
    bool contains(Eigen::Index i) const;

    /// Diagonal of D_S as a 0/1 vector.
    Vector mask() const;

private:
    std::vector<Eigen::Index> indices_;
    Eigen::Index n_ = 0;
};

struct Recoverability {
    bool ok = false;
    double lambda_min = 0.0;
};

struct StepRange {
    double mu_min = 0.0;
    double mu_max = 0.0;
};

inline constexpr double recoverability_tolerance = 1e-8;

/// D_S x without forming D_S.
Vector apply_sampling(const SamplingSet& s, const Vector& x);

/// U_F^T D_S U_F, i.e. the Gram matrix of the sampled rows of U_F.
Matrix sampled_gram(const BandBasis& band, const SamplingSet& s);

Recoverability check_recoverability(const BandBasis& band, const SamplingSet& s);

/// Greedy selection maximizing the smallest non-zero eigenvalue of U_F^T D_S U_F.
SamplingSet greedy_max_lambda_min(const BandBasis& band, Eigen::Index m);

/// Uniform m-subset, redrawn up to 100 times until recoverable.
SamplingSet random_sampling(const BandBasis& band, Eigen::Index m, std::uint64_t seed);

/// (0, 2 / lambda_max(U_F^T D_S U_F)).
StepRange stable_step_range(const BandBasis& band, const SamplingSet& s);

namespace detail {

/// Smallest eigenvalue of diag(eigenvalues) + z z^T. `eigenvalues` ascending.
double min_eig_rank_one_update(const Vector& eigenvalues, const Vector& z);

/// Smallest eigenvalue of [[diag(eigenvalues), y], [y^T, c]]. `eigenvalues` ascending.
double min_eig_bordered(const Vector& eigenvalues, const Vector& y, double c);

}  // namespace detail

}  // namespace gsp
