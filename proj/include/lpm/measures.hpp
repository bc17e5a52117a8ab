#ifndef LPM_MEASURES_HPP
#define LPM_MEASURES_HPP

#include "lpm/neighborhoods.hpp"

namespace lpm {

/// Per-neighborhood Procrustes residuals and the four aggregate quality
/// measures. Degenerate neighborhoods (|HX_i|_F^2 < 1e-14) are skipped with a
/// flag; the normalized aggregates average over the unskipped ones only.
/// R and R_PCA are plain means over all neighborhoods.
struct NeighborhoodScore {
    Index index = 0;
    double g = 0.0;          // Procrustes residual G(X_i, Y_i)
    double g_pca = 0.0;      // G(X_i P_i, Y_i)
    double g_conformal = 0.0;
    double normalizer = 0.0;  // |HX_i|_F^2
    double pca_deficit = 0.0; // rank-d reconstruction residual of HX_i
    bool skipped = false;
};

struct MeasureReport {
    std::vector<NeighborhoodScore> per_neighborhood;
    double r = 0.0;
    double r_n = 0.0;
    double r_pca = 0.0;
    double r_c = 0.0;
    double lower_bound_n = 0.0;
    Index skipped = 0;
    std::string neighborhood_param;  // "k=12" or "eps=0.5", informational

    std::string to_json() const;
    static MeasureReport from_json(const std::string& text);
    /// One-line summary: "R= R_N= R_PCA= R_C= LB= skipped=".
    std::string summary() const;
};

struct MeasureOptions {
    bool with_pca = true;  // R_PCA and the lower bound need a per-neighborhood SVD of HX_i
    std::string neighborhood_param;
};

/// Single pass over the neighborhoods computing every measure; the per-i SVDs
/// are shared between R_PCA and the PCA lower bound.
MeasureReport measure_report(const Matrix& x, const Matrix& y, const NeighborhoodGraph& g,
                             const MeasureOptions& options = {});

double measure_R(const Matrix& x, const Matrix& y, const NeighborhoodGraph& g);
double measure_RN(const Matrix& x, const Matrix& y, const NeighborhoodGraph& g);
double measure_RPCA(const Matrix& x, const Matrix& y, const NeighborhoodGraph& g);
double measure_RC(const Matrix& x, const Matrix& y, const NeighborhoodGraph& g);

/// Mean normalized rank-d PCA reconstruction residual: no embedding can score
/// a smaller R_N than this.
double lower_bound_N(const Matrix& x, const NeighborhoodGraph& g, Index d);

}  // namespace lpm

#endif
