#ifndef LPM_NEIGHBORHOODS_HPP
#define LPM_NEIGHBORHOODS_HPP

#include "lpm/common.hpp"

namespace lpm {

/// Neighbor structure over a point set. `neighbors[i]` never contains i
/// itself; the center is prepended when the neighborhood is materialized as a
/// matrix (see neighborhood_matrix). r(i) is the distance from x_i to its
/// farthest listed neighbor.
struct NeighborhoodGraph {
    Index n = 0;
    std::vector<std::vector<Index>> neighbors;
    std::vector<double> radii;
    double r_max = 0.0;

    /// Center followed by its neighbors: the index rows of X_i.
    std::vector<Index> members(Index i) const {
        std::vector<Index> m;
        m.reserve(neighbors[i].size() + 1);
        m.push_back(i);
        m.insert(m.end(), neighbors[i].begin(), neighbors[i].end());
        return m;
    }

    /// Connected components of the undirected neighbor relation.
    std::vector<std::vector<Index>> connected_components() const;
};

/// k-nearest-neighbor graph in the Euclidean metric, ties broken by lower
/// index. Uses a kd-tree for large inputs; the result is identical to the
/// brute-force reference either way.
NeighborhoodGraph knn_graph(const Matrix& x, Index k);

/// Brute-force O(n^2) reference used by tests to pin the kd-tree path.
NeighborhoodGraph knn_graph_brute_force(const Matrix& x, Index k);

/// eps-ball graph: neighbors(i) = { j != i : |x_j - x_i| <= eps }.
/// Throws IsolatedPoints listing every index with an empty neighbor set.
NeighborhoodGraph eps_graph(const Matrix& x, double eps);

/// The (k(i)+1) x q matrix X_i: row 0 is x_i, then its neighbors in stored order.
Matrix neighborhood_matrix(const Matrix& x, const NeighborhoodGraph& g, Index i);

struct DensityReport {
    double r_max = 0.0;
    double r_mean = 0.0;
    std::vector<Index> histogram;   // counts of r(i) per bin
    std::vector<double> bin_edges;  // histogram.size() + 1 edges
};

/// Descriptive statistics of the neighborhood radii. The density condition
/// r_max < s0 cannot be checked for real data (s0 is unknown), so only r_max
/// and the spread are reported.
DensityReport density_report(const NeighborhoodGraph& g, Index bins = 10);

std::string graph_to_json(const NeighborhoodGraph& g);
NeighborhoodGraph graph_from_json(const std::string& text);

}  // namespace lpm

#endif
