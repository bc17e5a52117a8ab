#ifndef LPM_NUMERICS_HPP
#define LPM_NUMERICS_HPP

#include "lpm/common.hpp"
#include "lpm/rng.hpp"

namespace lpm {

struct SvdResult {
    Matrix U;        // columns-orthonormal
    Vector values;   // non-negative, non-increasing
    Matrix V;        // orthogonal
};

struct CenterResult {
    Matrix centered;
    RowVector mean;
};

/// Subtracts the column means: centered = H M with H = I - (1/k)11'.
CenterResult center(const Matrix& m);

/// Thin SVD, M = U diag(values) V'.
SvdResult thin_svd(const Matrix& m);

struct PcaResult {
    Matrix projection;    // cols(m) x d, columns-orthonormal
    Vector eigenvalues;   // top-d eigenvalues of (HM)'(HM)/rows, non-increasing
};

/// Top-d principal directions of the centered data. Sign convention: in each
/// column the entry of largest absolute value is positive (ties: lowest row
/// index wins), so outputs are reproducible across SVD backends.
PcaResult pca_projection(const Matrix& m, Index d);

/// Haar-uniform element of SO(d): QR of a Gaussian matrix with the R-diagonal
/// sign correction, then one column negated if the determinant is -1.
Matrix random_rotation(Index d, RngStream& rng);

/// Haar-uniform element of O(d) (rotations and reflections equally likely).
Matrix random_orthogonal(Index d, RngStream& rng);

using LinearOperator = std::function<Matrix(const Matrix&)>;

/// Conjugate gradients for operators of the form B -> (sum_i H_i) B, which are
/// symmetric positive semidefinite with the all-ones vector (per connected
/// component) spanning the nullspace. `components` lists the row indices of
/// each component; iterates and right-hand sides are deflated against the
/// component-wise constant vectors, so the returned solution has zero mean on
/// every component (the minimum-norm solution).
///
/// Throws SolverDiverged if the relative residual does not reach tol within
/// max_iters (default 10 * rows).
Matrix solve_centered_spd(const LinearOperator& apply, const Matrix& rhs,
                          const std::vector<std::vector<Index>>& components,
                          double tol = 1e-8, Index max_iters = -1);

/// Single-component convenience overload.
Matrix solve_centered_spd(const LinearOperator& apply, const Matrix& rhs,
                          double tol = 1e-8, Index max_iters = -1);

}  // namespace lpm

#endif
