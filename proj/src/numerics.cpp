#include "lpm/numerics.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

namespace lpm {

CenterResult center(const Matrix& m) {
    if (m.rows() < 1) throw InvalidInput("center: matrix must have at least one row");
    require_finite(m, "center: input");
    CenterResult out;
    out.mean = m.colwise().mean();
    out.centered = m.rowwise() - out.mean;
    return out;
}

SvdResult thin_svd(const Matrix& m) {
    require_finite(m, "thin_svd: input");
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return SvdResult{svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

PcaResult pca_projection(const Matrix& m, Index d) {
    if (d > m.cols()) throw InvalidInput("pca_projection: d exceeds column count");
    if (m.rows() < 2) throw InvalidInput("pca_projection: need at least 2 rows");
    if (d < 1) throw InvalidInput("pca_projection: d must be positive");
    // SVD of the centered data matrix rather than an explicit covariance.
    const Matrix hm = center(m).centered;
    Eigen::JacobiSVD<Matrix> svd(hm, Eigen::ComputeThinV);
    PcaResult out;
    out.projection = svd.matrixV().leftCols(d);
    const Vector sv = svd.singularValues();
    out.eigenvalues.resize(d);
    for (Index j = 0; j < d; ++j) {
        const double s = j < sv.size() ? sv[j] : 0.0;
        out.eigenvalues[j] = s * s / static_cast<double>(m.rows());
    }
    // Sign convention: largest-|entry| coordinate positive, ties to lowest index.
    for (Index j = 0; j < d; ++j) {
        Index argmax = 0;
        double best = -1.0;
        for (Index i = 0; i < out.projection.rows(); ++i) {
            const double a = std::abs(out.projection(i, j));
            if (a > best + 1e-15) {
                best = a;
                argmax = i;
            }
        }
        if (out.projection(argmax, j) < 0.0) out.projection.col(j) = -out.projection.col(j);
    }
    return out;
}

Matrix random_orthogonal(Index d, RngStream& rng) {
    if (d < 1) throw InvalidInput("random_orthogonal: d must be positive");
    Matrix g(d, d);
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) g(i, j) = rng.normal();
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fixing the signs of R's diagonal makes the factorization unique and the
    // resulting Q Haar-distributed (Mezzadri 2007).
    for (Index j = 0; j < d; ++j)
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    return q;
}

Matrix random_rotation(Index d, RngStream& rng) {
    Matrix q = random_orthogonal(d, rng);
    if (q.determinant() < 0.0) q.col(d - 1) = -q.col(d - 1);
    return q;
}

namespace {

void deflate(Matrix& m, const std::vector<std::vector<Index>>& components) {
    for (const auto& comp : components) {
        if (comp.empty()) continue;
        RowVector mean = RowVector::Zero(m.cols());
        for (Index i : comp) mean += m.row(i);
        mean /= static_cast<double>(comp.size());
        for (Index i : comp) m.row(i) -= mean;
    }
}

}  // namespace

Matrix solve_centered_spd(const LinearOperator& apply, const Matrix& rhs,
                          const std::vector<std::vector<Index>>& components,
                          double tol, Index max_iters) {
    require_finite(rhs, "solve_centered_spd: rhs");
    const Index n = rhs.rows();
    if (max_iters < 0) max_iters = 10 * n;

    Matrix b = rhs;
    deflate(b, components);
    const double bnorm = b.norm();
    Matrix x = Matrix::Zero(n, rhs.cols());
    if (bnorm == 0.0) return x;

    Matrix r = b;
    Matrix p = r;
    double rs_old = r.squaredNorm();
    double res = std::sqrt(rs_old) / bnorm;
    for (Index it = 0; it < max_iters && res > tol; ++it) {
        Matrix ap = apply(p);
        deflate(ap, components);
        const double pap = (p.array() * ap.array()).sum();
        if (pap <= 0.0) break;  // nullspace direction after deflation: stuck
        const double alpha = rs_old / pap;
        x += alpha * p;
        r -= alpha * ap;
        deflate(r, components);
        const double rs_new = r.squaredNorm();
        p = r + (rs_new / rs_old) * p;
        rs_old = rs_new;
        res = std::sqrt(rs_new) / bnorm;
    }
    if (res > tol)
        throw SolverDiverged("solve_centered_spd: CG did not converge, relative residual " +
                                 std::to_string(res),
                             res);
    deflate(x, components);
    return x;
}

Matrix solve_centered_spd(const LinearOperator& apply, const Matrix& rhs, double tol,
                          Index max_iters) {
    std::vector<Index> all(rhs.rows());
    for (Index i = 0; i < rhs.rows(); ++i) all[i] = i;
    return solve_centered_spd(apply, rhs, {all}, tol, max_iters);
}

}  // namespace lpm
