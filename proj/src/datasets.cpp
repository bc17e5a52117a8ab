#include "lpm/datasets.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "lpm/numerics.hpp"

namespace lpm {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kRollTMin = 2.5 * kPi;
constexpr double kRollTMax = 5.5 * kPi;
constexpr double kRollHeight = 16.0;
constexpr double kCylinderHeight = 2.0 * kPi * 0.4;

// Arc length of the spiral t -> (t cos t, t sin t) from 0: integral of
// sqrt(1 + u^2) du.
double spiral_arc_length(double t) {
    return 0.5 * (t * std::sqrt(1.0 + t * t) + std::asinh(t));
}

// Inverse of spiral_arc_length by Newton iteration (the integrand is
// monotone, so convergence from t ~ sqrt(2 s) is immediate).
double spiral_parameter(double s) {
    double t = std::sqrt(2.0 * s);
    for (int it = 0; it < 64; ++it) {
        const double f = spiral_arc_length(t) - s;
        const double step = f / std::sqrt(1.0 + t * t);
        t -= step;
        if (std::abs(step) < 1e-14 * (1.0 + std::abs(t))) break;
    }
    return t;
}

}  // namespace

std::string kind_name(DatasetKind kind) {
    switch (kind) {
        case DatasetKind::swissroll: return "swissroll";
        case DatasetKind::hemisphere: return "hemisphere";
        case DatasetKind::cylinder: return "cylinder";
    }
    return "unknown";
}

DatasetKind kind_from_name(const std::string& name) {
    if (name == "swissroll") return DatasetKind::swissroll;
    if (name == "hemisphere") return DatasetKind::hemisphere;
    if (name == "cylinder") return DatasetKind::cylinder;
    throw InvalidInput("unknown dataset kind: " + name);
}

SyntheticDataset gen_swissroll(Index n, double noise_sigma, RngStream& rng) {
    if (n < 1) throw InvalidInput("gen_swissroll: n must be positive");
    if (noise_sigma < 0.0) throw InvalidInput("gen_swissroll: noise_sigma must be >= 0");
    SyntheticDataset ds;
    ds.kind = DatasetKind::swissroll;
    ds.noise_sigma = noise_sigma;
    ds.x.resize(n, 3);
    ds.z.resize(n, 2);
    ds.jacobians.resize(n);

    const double s_lo = spiral_arc_length(kRollTMin);
    const double s_hi = spiral_arc_length(kRollTMax);
    for (Index i = 0; i < n; ++i) {
        const double s = rng.uniform(s_lo, s_hi);
        const double h = rng.uniform(0.0, kRollHeight);
        const double t = spiral_parameter(s);
        ds.z(i, 0) = s;
        ds.z(i, 1) = h;
        ds.x(i, 0) = t * std::cos(t);
        ds.x(i, 1) = h;
        ds.x(i, 2) = t * std::sin(t);
        // d(phi)/ds = d(phi)/dt / sqrt(1 + t^2): a unit vector, so the chart
        // is an exact isometry.
        const double norm = std::sqrt(1.0 + t * t);
        Matrix j(3, 2);
        j << (std::cos(t) - t * std::sin(t)) / norm, 0.0,
             0.0, 1.0,
             (std::sin(t) + t * std::cos(t)) / norm, 0.0;
        ds.jacobians[i] = j;
    }
    if (noise_sigma > 0.0)
        for (Index i = 0; i < n; ++i)
            for (Index c = 0; c < 3; ++c) ds.x(i, c) += noise_sigma * rng.normal();
    return ds;
}

SyntheticDataset gen_hemisphere(Index n, RngStream& rng) {
    if (n < 1) throw InvalidInput("gen_hemisphere: n must be positive");
    SyntheticDataset ds;
    ds.kind = DatasetKind::hemisphere;
    ds.x.resize(n, 3);
    ds.z.resize(n, 2);
    ds.jacobians.resize(n);
    for (Index i = 0; i < n; ++i) {
        // Area-uniform: the axis coordinate is uniform on [0, 1] (Archimedes).
        const double w = rng.uniform();
        const double phi = rng.uniform(0.0, 2.0 * kPi);
        const double rho = std::sqrt(std::max(0.0, 1.0 - w * w));
        ds.x(i, 0) = rho * std::cos(phi);
        ds.x(i, 1) = rho * std::sin(phi);
        ds.x(i, 2) = w;
        const double theta = std::acos(std::min(1.0, std::max(-1.0, w)));  // polar angle
        ds.z(i, 0) = theta * std::cos(phi);
        ds.z(i, 1) = theta * std::sin(phi);
        // Orthonormal tangent frame (e_theta, e_phi); the chart itself is not
        // isometric, the frame is only the tangent-plane basis.
        Matrix j(3, 2);
        j << w * std::cos(phi), -std::sin(phi),
             w * std::sin(phi), std::cos(phi),
             -rho, 0.0;
        ds.jacobians[i] = j;
    }
    return ds;
}

SyntheticDataset gen_cylinder(Index n, RngStream& rng) {
    if (n < 1) throw InvalidInput("gen_cylinder: n must be positive");
    SyntheticDataset ds;
    ds.kind = DatasetKind::cylinder;
    ds.x.resize(n, 3);
    ds.z.resize(n, 2);
    ds.jacobians.resize(n);
    for (Index i = 0; i < n; ++i) {
        const double angle = rng.uniform(0.0, 2.0 * kPi);
        const double h = rng.uniform(0.0, kCylinderHeight);
        ds.x(i, 0) = std::cos(angle);
        ds.x(i, 1) = std::sin(angle);
        ds.x(i, 2) = h;
        ds.z(i, 0) = angle;  // radius 1: arc length equals the angle
        ds.z(i, 1) = h;
        Matrix j(3, 2);
        j << -std::sin(angle), 0.0,
             std::cos(angle), 0.0,
             0.0, 1.0;
        ds.jacobians[i] = j;
    }
    return ds;
}

Vector subspace_angles(const Matrix& p, const Matrix& j) {
    if (p.rows() != j.rows() || p.cols() != j.cols())
        throw InvalidInput("subspace_angles: frame shapes differ");
    const Index d = p.cols();
    const auto check = [d](const Matrix& m, const char* name) {
        if ((m.transpose() * m - Matrix::Identity(d, d)).norm() > 1e-8)
            throw InvalidInput(std::string("subspace_angles: ") + name + " is not columns-orthonormal");
    };
    check(p, "P");
    check(j, "J");
    Eigen::JacobiSVD<Matrix> svd(Matrix(j.transpose() * p));
    Vector angles(d);
    for (Index i = 0; i < d; ++i) {
        const double c = std::min(1.0, std::max(0.0, svd.singularValues()[i]));
        angles[i] = std::acos(c);
    }
    return angles;  // singular values non-increasing => angles non-decreasing
}

TangencyReport tangency_report(const SyntheticDataset& ds, const NeighborhoodGraph& g) {
    if (ds.jacobians.empty() || static_cast<Index>(ds.jacobians.size()) != g.n)
        throw InvalidInput("tangency_report: dataset is missing per-point jacobians");
    TangencyReport rep;
    rep.max_angle.resize(g.n);
    rep.pca_deficit.resize(g.n);
    rep.r_max = g.r_max;
    parallel_for(0, g.n, [&](Index i) {
        const Matrix xi = neighborhood_matrix(ds.x, g, i);
        const Index d = ds.jacobians[i].cols();
        const Matrix p = pca_projection(xi, d).projection;
        rep.max_angle[i] = subspace_angles(p, ds.jacobians[i]).maxCoeff();
        const RowVector mean = xi.colwise().mean();
        const Matrix hx = xi.rowwise() - mean;
        rep.pca_deficit[i] =
            std::max(0.0, hx.squaredNorm() - (hx * ds.jacobians[i]).squaredNorm());
    });
    return rep;
}

}  // namespace lpm
