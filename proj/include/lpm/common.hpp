#ifndef LPM_COMMON_HPP
#define LPM_COMMON_HPP

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Index = Eigen::Index;

/// Thrown when an operation receives arguments that violate its preconditions
/// (dimension mismatches, non-finite entries, out-of-range indices).
class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown by eps_graph when one or more points have no neighbor within eps.
class IsolatedPoints : public std::runtime_error {
public:
    IsolatedPoints(std::string what, std::vector<Index> idx)
        : std::runtime_error(std::move(what)), indices(std::move(idx)) {}
    std::vector<Index> indices;
};

/// Thrown when the conjugate-gradient solve fails to reach the requested
/// residual within the iteration budget.
class SolverDiverged : public std::runtime_error {
public:
    SolverDiverged(std::string what, double res)
        : std::runtime_error(std::move(what)), residual(res) {}
    double residual;
};

/// Thrown by the conformal fit when the embedding neighborhood is a single
/// repeated point (HY = 0), so no scale can be determined.
class DegenerateEmbedding : public std::runtime_error {
public:
    explicit DegenerateEmbedding(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown by the normalized measures when every neighborhood is degenerate.
class DegenerateInput : public std::runtime_error {
public:
    explicit DegenerateInput(const std::string& what) : std::runtime_error(what) {}
};

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

inline void require_finite(const Matrix& m, const char* name) {
    if (!m.allFinite())
        throw InvalidInput(std::string(name) + " contains non-finite entries");
}

// Worker-pool size used by the parallel loops in knn construction and
// measure evaluation. 0 means hardware concurrency.
void set_thread_count(int n);
int thread_count();

// Runs fn(i) for i in [begin, end). Results must be written to per-index
// slots; the loop gives no ordering guarantee across indices.
void parallel_for(Index begin, Index end, const std::function<void(Index)>& fn);

}  // namespace lpm

#endif
