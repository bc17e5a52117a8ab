#ifndef LPM_DATASETS_HPP
#define LPM_DATASETS_HPP

#include "lpm/neighborhoods.hpp"
#include "lpm/rng.hpp"

namespace lpm {

enum class DatasetKind { swissroll, hemisphere, cylinder };

std::string kind_name(DatasetKind kind);
DatasetKind kind_from_name(const std::string& name);

/// Synthetic sample with ground-truth low-dimensional coordinates and
/// analytic tangent frames, for rate tests and diagnostics.
struct SyntheticDataset {
    Matrix x;  // n x 3 sample
    Matrix z;  // n x 2 chart coordinates
    DatasetKind kind = DatasetKind::swissroll;
    double noise_sigma = 0.0;
    std::vector<Matrix> jacobians;  // per-point 3 x 2 tangent frame
};

/// Swissroll reparameterized by arc length in the spiral direction, so the
/// chart (s, h) -> R^3 is an exact isometry and J'J = I everywhere. The
/// common (t cos t, h, t sin t) chart is NOT isometric in t. t spans
/// [2.5pi, 5.5pi], h spans [0, 16]; sampling is uniform in (s, h); Gaussian
/// noise of sd noise_sigma is added to X only.
SyntheticDataset gen_swissroll(Index n, double noise_sigma, RngStream& rng);

/// Area-uniform sample of the unit upper hemisphere. No isometric chart
/// exists; Z holds azimuthal-equidistant coordinates as a plotting reference
/// only. The jacobians are orthonormal tangent frames at each point.
SyntheticDataset gen_hemisphere(Index n, RngStream& rng);

/// Radius-1 cylinder of height 2*pi*0.4 (circumference:height = 2pi : 2pi*0.4,
/// a fixed convention). Z = (angle * radius, height): the locally isometric
/// chart with a seam at angle 0.
SyntheticDataset gen_cylinder(Index n, RngStream& rng);

/// Principal angles between the column spans of two columns-orthonormal
/// frames: arccos of the singular values of J'P, non-decreasing, in radians.
Vector subspace_angles(const Matrix& p, const Matrix& j);

struct TangencyReport {
    std::vector<double> max_angle;    // per point, PCA frame vs analytic frame
    std::vector<double> pca_deficit;  // sum |x - xbar|^2 - sum |J'(x - xbar)|^2
    double r_max = 0.0;
};

/// Diagnostic comparing each neighborhood's PCA frame with the analytic
/// tangent frame. Requires the dataset to carry jacobians.
TangencyReport tangency_report(const SyntheticDataset& ds, const NeighborhoodGraph& g);

}  // namespace lpm

#endif
