#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace gsp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raw station data: one node per station, coordinates in degrees.
struct StationTable {
    std::vector<std::string> ids;
    std::vector<double> lat;
    std::vector<double> lon;
    std::vector<double> signal;

    std::size_t size() const noexcept { return ids.size(); }

    /// Throws if ids repeat, lengths disagree, N < 2 or any value is non-finite.
    void validate() const;
};

/// Undirected graph with binary symmetric adjacency.
struct Graph {
    Matrix adjacency;

    Eigen::Index n() const noexcept { return adjacency.rows(); }
    std::size_t edge_count() const;
    Vector degrees() const;
};

/// Full spectral decomposition of a graph Laplacian, eigenvalues ascending.
struct GftBasis {
    Vector eigenvalues;
    Matrix vectors;
};

/// The lowest-frequency F columns of a GftBasis.
struct BandBasis {
    Eigen::Index f = 0;
    Matrix u_f;

    Eigen::Index n() const noexcept { return u_f.rows(); }
};

struct Projection {
    Vector s_f;
    Vector x_o;
};

/// Great-circle distance on the unit sphere between two (lat, lon) points in degrees.
double haversine(double lat1, double lon1, double lat2, double lon2);

/// Union-symmetrized k-nearest-neighbor graph. Equal distances prefer the lower node index.
Graph build_knn_graph(const StationTable& stations, int k);

/// Combinatorial Laplacian D - W.
Matrix laplacian(const Graph& g);

/// Eigendecomposition of a symmetric matrix. Each eigenvector's first entry with
/// magnitude above 1e-9 is made positive so that the basis is reproducible.
GftBasis gft_basis(const Matrix& l);

BandBasis band_select(const GftBasis& basis, Eigen::Index f);

/// s_f = U_F^T x and x_o = U_F s_f.
Projection project_bandlimited(const BandBasis& band, const Vector& x);

}  // namespace gsp
