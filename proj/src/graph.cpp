#include "gsp/graph.hpp"

#include "gsp/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <unordered_set>

namespace gsp {

void StationTable::validate() const {
    const auto n = ids.size();
    require(lat.size() == n && lon.size() == n && signal.size() == n,
            "station table: column lengths differ");
    require(n >= 2, "station table: need at least 2 stations");
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < n; ++i) {
        require(seen.insert(ids[i]).second, "station table: duplicate id '" + ids[i] + "'");
        require(std::isfinite(lat[i]) && std::isfinite(lon[i]) && std::isfinite(signal[i]),
                "station table: non-finite value for station '" + ids[i] + "'");
    }
}

std::size_t Graph::edge_count() const {
    std::size_t edges = 0;
    for (Eigen::Index i = 0; i < n(); ++i)
        for (Eigen::Index j = i + 1; j < n(); ++j)
            if (adjacency(i, j) != 0.0) ++edges;
    return edges;
}

Vector Graph::degrees() const { return adjacency.rowwise().sum(); }

double haversine(double lat1, double lon1, double lat2, double lon2) {
    constexpr double deg = std::numbers::pi / 180.0;
    const double dlat = (lat2 - lat1) * deg;
    const double dlon = (lon2 - lon1) * deg;
    const double h = std::sin(dlat / 2) * std::sin(dlat / 2) +
                     std::cos(lat1 * deg) * std::cos(lat2 * deg) * std::sin(dlon / 2) * std::sin(dlon / 2);
    return 2.0 * std::asin(std::min(1.0, std::sqrt(h)));
}

Graph build_knn_graph(const StationTable& stations, int k) {
    stations.validate();
    const auto n = static_cast<Eigen::Index>(stations.size());
    require(k >= 1 && k < n, "build_knn_graph: k must satisfy 1 <= k < N (k=" + std::to_string(k) +
                                 ", N=" + std::to_string(n) + ")");

    Graph g{Matrix::Zero(n, n)};
    std::vector<std::pair<double, Eigen::Index>> dist;
    dist.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        dist.clear();
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            dist.emplace_back(haversine(stations.lat[i], stations.lon[i], stations.lat[j], stations.lon[j]), j);
        }
        // pair ordering breaks distance ties on the lower index
        std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
        for (int r = 0; r < k; ++r) {
            const auto j = dist[static_cast<std::size_t>(r)].second;
            g.adjacency(i, j) = 1.0;
            g.adjacency(j, i) = 1.0;
        }
    }
    return g;
}

Matrix laplacian(const Graph& g) {
    Matrix l = -g.adjacency;
    l.diagonal() = g.degrees();
    return l;
}

GftBasis gft_basis(const Matrix& l) {
    require(l.rows() == l.cols() && l.rows() > 0, "gft_basis: matrix must be square and non-empty");
    const double scale = std::max(1.0, l.cwiseAbs().maxCoeff());
    require((l - l.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale, "gft_basis: matrix is not symmetric");

    Eigen::SelfAdjointEigenSolver<Matrix> solver(l);
    if (solver.info() != Eigen::Success) fail(ErrorKind::numerical, "gft_basis: eigensolver did not converge");

    GftBasis basis{solver.eigenvalues(), solver.eigenvectors()};
    for (Eigen::Index c = 0; c < basis.vectors.cols(); ++c) {
        auto col = basis.vectors.col(c);
        for (Eigen::Index r = 0; r < col.size(); ++r) {
            if (std::abs(col(r)) > 1e-9) {
                if (col(r) < 0) col = -col;
                break;
            }
        }
    }
    return basis;
}

BandBasis band_select(const GftBasis& basis, Eigen::Index f) {
    const auto n = basis.vectors.cols();
    require(f >= 1 && f <= n, "band_select: bandwidth must satisfy 1 <= F <= N (F=" + std::to_string(f) +
                                  ", N=" + std::to_string(n) + ")");
    return BandBasis{f, basis.vectors.leftCols(f)};
}

Projection project_bandlimited(const BandBasis& band, const Vector& x) {
    require(x.size() == band.n(), "project_bandlimited: signal length does not match basis");
    require(x.allFinite(), "project_bandlimited: signal has non-finite entries");
    Vector s_f = band.u_f.transpose() * x;
    Vector x_o = band.u_f * s_f;
    return {std::move(s_f), std::move(x_o)};
}

}  // namespace gsp
