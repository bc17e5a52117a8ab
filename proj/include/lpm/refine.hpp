#ifndef LPM_REFINE_HPP
#define LPM_REFINE_HPP

#include "lpm/neighborhoods.hpp"

namespace lpm {

/// Iterative post-processing: alternate per-neighborhood Procrustes rotations
/// with closed-form translation and point updates to decrease R(X, Y) from
/// any starting embedding.
struct RefineIteration {
    Index iter = 0;
    double r = 0.0;
    double r_n = 0.0;
    double max_displacement = 0.0;
};

enum class RefineStop { converged, max_iters, non_decreasing };

struct RefineTrace {
    std::vector<RefineIteration> iterations;
    RefineStop stop_reason = RefineStop::converged;
};

struct RefineResult {
    Matrix y;
    RefineTrace trace;
    std::vector<Index> uncovered;  // points in no neighborhood, left untouched
};

/// One Jacobi-style sweep: all rotations A_i and translations b_i are computed
/// from the old Y, then every point is moved to the mean of A_i'(x_j - b_i)
/// over the neighborhoods containing it. Points covered by no neighborhood
/// keep their coordinates.
Matrix refine_step(const Matrix& x, const Matrix& y, const NeighborhoodGraph& g);

/// Iterates refine_step, tracking the best Y seen by R. Stops when the
/// relative improvement drops below rel_tol, when R increases (returning the
/// pre-increase Y: the update is not exactly monotone), or at max_iters.
/// Guarantees R(result) <= R(y0).
RefineResult refine(const Matrix& x, const Matrix& y0, const NeighborhoodGraph& g,
                    double rel_tol = 1e-6, Index max_iters = 200);

}  // namespace lpm

#endif
