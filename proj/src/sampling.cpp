#include "gsp/sampling.hpp"

#include "gsp/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gsp {

SamplingSet::SamplingSet(std::vector<Eigen::Index> indices, Eigen::Index n) : indices_(std::move(indices)), n_(n) {
    require(n >= 0, "sampling set: negative node count");
    std::sort(indices_.begin(), indices_.end());
    require(std::adjacent_find(indices_.begin(), indices_.end()) == indices_.end(),
            "sampling set: duplicate node index");
    require(indices_.empty() || (indices_.front() >= 0 && indices_.back() < n),
            "sampling set: node index out of range");
}

SamplingSet SamplingSet::all(Eigen::Index n) {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    return SamplingSet(std::move(idx), n);
}

bool SamplingSet::contains(Eigen::Index i) const { return std::binary_search(indices_.begin(), indices_.end(), i); }

Vector SamplingSet::mask() const {
    Vector m = Vector::Zero(n_);
    for (auto i : indices_) m(i) = 1.0;
    return m;
}

Vector apply_sampling(const SamplingSet& s, const Vector& x) {
    require(x.size() == s.n(), "apply_sampling: vector length does not match node count");
    Vector out = Vector::Zero(x.size());
    for (auto i : s.indices()) out(i) = x(i);
    return out;
}

Matrix sampled_gram(const BandBasis& band, const SamplingSet& s) {
    require(s.n() == band.n(), "sampled_gram: sampling set and basis disagree on N");
    const Matrix rows = band.u_f(s.indices(), Eigen::all);
    return rows.transpose() * rows;
}

namespace {

Vector gram_eigenvalues(const BandBasis& band, const SamplingSet& s) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sampled_gram(band, s), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) fail(ErrorKind::numerical, "sampling: eigensolver did not converge");
    return solver.eigenvalues();
}

}  // namespace

Recoverability check_recoverability(const BandBasis& band, const SamplingSet& s) {
    const double lmin = gram_eigenvalues(band, s)(0);
    return {lmin > recoverability_tolerance, lmin};
}

namespace detail {

double min_eig_rank_one_update(const Vector& eigenvalues, const Vector& z) {
    const auto k = eigenvalues.size();
    double lo = eigenvalues(0);
    double hi = lo + z.squaredNorm();
    if (k > 1) hi = std::min(hi, eigenvalues(1));
    // 1 + sum z_i^2 / (l_i - x) increases from -inf on (l_0, l_1); root is the new minimum.
    for (int it = 0; it < 400 && hi > lo; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        double f = 1.0;
        for (Eigen::Index i = 0; i < k; ++i) f += z(i) * z(i) / (eigenvalues(i) - mid);
        if (f < 0) lo = mid;
        else hi = mid;
    }
    return lo;
}

double min_eig_bordered(const Vector& eigenvalues, const Vector& y, double c) {
    const auto k = eigenvalues.size();
    if (k == 0) return c;
    double hi = eigenvalues(0);
    double lo = std::min(hi, c) - y.norm();
    // c - x - sum y_i^2 / (l_i - x) decreases on (-inf, l_0).
    for (int it = 0; it < 400 && hi > lo; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        double g = c - mid;
        for (Eigen::Index i = 0; i < k; ++i) g -= y(i) * y(i) / (eigenvalues(i) - mid);
        if (g > 0) lo = mid;
        else hi = mid;
    }
    return hi;
}

}  // namespace detail

SamplingSet greedy_max_lambda_min(const BandBasis& band, Eigen::Index m) {
    const auto n = band.n();
    const auto f = band.f;
    require(m >= f && m <= n, "greedy_max_lambda_min: target size must satisfy F <= m <= N");

    // Row Gram U_F U_F^T: while |S| <= F the non-zero spectrum of U_F^T D_S U_F equals that of R(S, S).
    const Matrix row_gram = band.u_f * band.u_f.transpose();

    std::vector<Eigen::Index> selected;
    std::vector<Eigen::Index> remaining(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) remaining[static_cast<std::size_t>(i)] = i;
    selected.reserve(static_cast<std::size_t>(m));

    while (static_cast<Eigen::Index>(selected.size()) < m) {
        const auto k = static_cast<Eigen::Index>(selected.size());
        std::vector<double> score(remaining.size());

        if (k + 1 <= f) {
            Vector evals;
            Matrix coupling;  // V^T R(S, j) for every candidate j
            if (k > 0) {
                Eigen::SelfAdjointEigenSolver<Matrix> solver(row_gram(selected, selected));
                if (solver.info() != Eigen::Success) fail(ErrorKind::numerical, "greedy: eigensolver failed");
                evals = solver.eigenvalues();
                coupling = solver.eigenvectors().transpose() * row_gram(selected, remaining);
            }
            for (std::size_t c = 0; c < remaining.size(); ++c) {
                const auto j = remaining[c];
                score[c] = k == 0 ? row_gram(j, j)
                                  : detail::min_eig_bordered(evals, coupling.col(static_cast<Eigen::Index>(c)),
                                                             row_gram(j, j));
            }
        } else {
            const Matrix rows = band.u_f(selected, Eigen::all);
            Eigen::SelfAdjointEigenSolver<Matrix> solver(rows.transpose() * rows);
            if (solver.info() != Eigen::Success) fail(ErrorKind::numerical, "greedy: eigensolver failed");
            const Matrix z = solver.eigenvectors().transpose() *
                             band.u_f(remaining, Eigen::all).transpose();
            for (std::size_t c = 0; c < remaining.size(); ++c)
                score[c] = detail::min_eig_rank_one_update(solver.eigenvalues(), z.col(static_cast<Eigen::Index>(c)));
        }

        // remaining is ascending, so strict > keeps the lowest index among equal scores
        std::size_t best = 0;
        for (std::size_t c = 1; c < score.size(); ++c)
            if (score[c] > score[best]) best = c;
        selected.push_back(remaining[best]);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return SamplingSet(std::move(selected), n);
}

SamplingSet random_sampling(const BandBasis& band, Eigen::Index m, std::uint64_t seed) {
    const auto n = band.n();
    require(m >= band.f && m <= n, "random_sampling: target size must satisfy F <= m <= N");
    std::mt19937_64 rng(seed);
    std::vector<Eigen::Index> pool(static_cast<std::size_t>(n));
    for (int attempt = 0; attempt < 100; ++attempt) {
        for (Eigen::Index i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
        // partial Fisher-Yates
        for (Eigen::Index i = 0; i < m; ++i) {
            std::uniform_int_distribution<Eigen::Index> pick(i, n - 1);
            std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
        }
        SamplingSet s(std::vector<Eigen::Index>(pool.begin(), pool.begin() + m), n);
        if (check_recoverability(band, s).ok) return s;
    }
    fail(ErrorKind::numerical, "random_sampling: no recoverable set of size " + std::to_string(m) +
                                   " found in 100 attempts");
}

StepRange stable_step_range(const BandBasis& band, const SamplingSet& s) {
    const Vector evals = gram_eigenvalues(band, s);
    if (evals(0) <= recoverability_tolerance)
        fail(ErrorKind::invalid_argument, "stable_step_range: sampling set is not recoverable");
    return {0.0, 2.0 / evals(evals.size() - 1)};
}

}  // namespace gsp
