#ifndef LPM_PROCRUSTES_HPP
#define LPM_PROCRUSTES_HPP

#include "lpm/common.hpp"

namespace lpm {

/// Closed-form orthogonal Procrustes fit: the columns-orthogonal A (q x d),
/// translation b and optional scale c minimizing sum_j |x_j - c A y_j - b|^2.
/// Reflections are allowed: A'A = I is the only constraint on A.
struct ProcrustesFit {
    Matrix rotation;     // q x d, columns-orthogonal
    Vector translation;  // q
    double scale = 1.0;  // 1 for the rigid fit
    double residual = 0.0;
};

/// Rigid fit (c = 1). A = UV' from the SVD of X'HY, b = mean(X) - A mean(Y).
/// The residual is evaluated by the trace identity
///   G = |HX|_F^2 + |HY|_F^2 - 2 tr(L),
/// clamped at zero against round-off.
ProcrustesFit fit(const Matrix& x, const Matrix& y);

/// Conformal fit: additionally scales Y by c = tr(L) / |HY|_F^2 >= 0.
/// Note the denominator uses the centered Y (tr(Y'HY)), matching the centered
/// objective. Throws DegenerateEmbedding when HY = 0.
ProcrustesFit fit_conformal(const Matrix& x, const Matrix& y);

/// Materializes rows c A y_j + b.
Matrix apply(const ProcrustesFit& f, const Matrix& y);

}  // namespace lpm

#endif
