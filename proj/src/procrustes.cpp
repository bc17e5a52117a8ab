#include "lpm/procrustes.hpp"

#include "lpm/numerics.hpp"

namespace lpm {

namespace {

struct CrossCov {
    Matrix hx, hy;       // centered copies
    RowVector mx, my;    // means
    double sx = 0.0;     // |HX|_F^2
    double sy = 0.0;     // |HY|_F^2
    Matrix rotation;     // UV'
    double trace_l = 0.0;
};

CrossCov cross_covariance(const Matrix& x, const Matrix& y) {
    if (x.rows() != y.rows()) throw InvalidInput("procrustes: row counts differ");
    if (x.rows() < 1) throw InvalidInput("procrustes: empty point sets");
    if (y.cols() > x.cols()) throw InvalidInput("procrustes: embedding dimension exceeds input dimension");
    require_finite(x, "procrustes: X");
    require_finite(y, "procrustes: Y");
    CrossCov c;
    auto cx = center(x);
    auto cy = center(y);
    c.hx = std::move(cx.centered);
    c.hy = std::move(cy.centered);
    c.mx = cx.mean;
    c.my = cy.mean;
    c.sx = c.hx.squaredNorm();
    c.sy = c.hy.squaredNorm();
    const Matrix z = c.hx.transpose() * c.hy;  // X'HY, q x d
    const auto svd = thin_svd(z);
    c.rotation = svd.U * svd.V.transpose();
    c.trace_l = svd.values.sum();
    return c;
}

}  // namespace

ProcrustesFit fit(const Matrix& x, const Matrix& y) {
    const CrossCov c = cross_covariance(x, y);
    ProcrustesFit f;
    f.rotation = c.rotation;
    f.scale = 1.0;
    f.translation = c.mx.transpose() - f.rotation * c.my.transpose();
    f.residual = std::max(0.0, c.sx + c.sy - 2.0 * c.trace_l);
    return f;
}

ProcrustesFit fit_conformal(const Matrix& x, const Matrix& y) {
    const CrossCov c = cross_covariance(x, y);
    if (c.sy < 1e-300)
        throw DegenerateEmbedding("fit_conformal: Y neighborhood is a single repeated point");
    ProcrustesFit f;
    f.rotation = c.rotation;
    f.scale = std::max(0.0, c.trace_l / c.sy);
    f.translation = c.mx.transpose() - f.scale * (f.rotation * c.my.transpose());
    f.residual = std::max(0.0, c.sx - c.trace_l * c.trace_l / c.sy);
    return f;
}

Matrix apply(const ProcrustesFit& f, const Matrix& y) {
    if (y.cols() != f.rotation.cols())
        throw InvalidInput("apply: Y column count does not match the fit dimension");
    Matrix out = f.scale * (y * f.rotation.transpose());
    out.rowwise() += f.translation.transpose();
    return out;
}

}  // namespace lpm
