#include "lpm/measures.hpp"

#include <Eigen/SVD>
#include <nlohmann/json.hpp>
#include <sstream>

namespace lpm {

namespace {

constexpr double kDegenerate = 1e-14;

void validate(const Matrix& x, const Matrix& y, const NeighborhoodGraph& g) {
    if (x.rows() != y.rows()) throw InvalidInput("measures: X and Y row counts differ");
    if (x.rows() != g.n) throw InvalidInput("measures: graph size does not match point count");
    if (y.cols() > x.cols()) throw InvalidInput("measures: embedding dimension exceeds input dimension");
    require_finite(x, "measures: X");
    require_finite(y, "measures: Y");
}

Matrix gather_centered(const Matrix& m, const std::vector<Index>& rows) {
    Matrix out(static_cast<Index>(rows.size()), m.cols());
    for (size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Index>(r)) = m.row(rows[r]);
    out.rowwise() -= out.colwise().mean().eval();
    return out;
}

}  // namespace

MeasureReport measure_report(const Matrix& x, const Matrix& y, const NeighborhoodGraph& g,
                             const MeasureOptions& options) {
    validate(x, y, g);
    const Index n = g.n;
    const Index d = y.cols();

    MeasureReport rep;
    rep.per_neighborhood.resize(n);
    rep.neighborhood_param = options.neighborhood_param;

    parallel_for(0, n, [&](Index i) {
        NeighborhoodScore& s = rep.per_neighborhood[i];
        s.index = i;
        const auto members = g.members(i);
        const Matrix hx = gather_centered(x, members);
        const Matrix hy = gather_centered(y, members);
        const double sx = hx.squaredNorm();
        const double sy = hy.squaredNorm();
        s.normalizer = sx;
        s.skipped = sx < kDegenerate;

        const Matrix z = hx.transpose() * hy;  // q x d
        Eigen::JacobiSVD<Matrix> zsvd(z);
        const double tr_l = zsvd.singularValues().sum();
        s.g = std::max(0.0, sx + sy - 2.0 * tr_l);
        // Collapsed embedding (HY = 0): the optimal conformal scale is 0 and
        // the residual is all of |HX|^2.
        s.g_conformal = sy < 1e-300 ? sx : std::max(0.0, sx - tr_l * tr_l / sy);

        if (options.with_pca) {
            Eigen::JacobiSVD<Matrix> xsvd(hx, Eigen::ComputeThinV);
            const Vector sv = xsvd.singularValues();
            double top = 0.0;
            for (Index p = 0; p < std::min(d, sv.size()); ++p) top += sv[p] * sv[p];
            s.pca_deficit = std::max(0.0, sx - top);
            const Matrix p_i = xsvd.matrixV().leftCols(std::min(d, xsvd.matrixV().cols()));
            // G((X_i P_i), Y_i): H(X_i P_i) = (HX_i) P_i, so only the d x d
            // cross-covariance P_i' Z is needed. G is invariant to the PCA
            // sign convention (any orthogonal factor is absorbed into A).
            Eigen::JacobiSVD<Matrix> z2svd(Matrix(p_i.transpose() * z));
            const double tr_l2 = z2svd.singularValues().sum();
            s.g_pca = std::max(0.0, top + sy - 2.0 * tr_l2);
        }
    });

    // Fixed-order reduction so parallel and serial runs agree bit for bit.
    double sum_g = 0.0, sum_gn = 0.0, sum_gpca = 0.0, sum_gc = 0.0, sum_lb = 0.0;
    Index unskipped = 0;
    for (const auto& s : rep.per_neighborhood) {
        sum_g += s.g;
        sum_gpca += s.g_pca;
        if (s.skipped) continue;
        ++unskipped;
        sum_gn += s.g / s.normalizer;
        sum_gc += s.g_conformal / s.normalizer;
        sum_lb += s.pca_deficit / s.normalizer;
    }
    rep.skipped = n - unskipped;
    if (unskipped == 0) throw DegenerateInput("measures: every neighborhood is degenerate");
    rep.r = sum_g / static_cast<double>(n);
    rep.r_pca = sum_gpca / static_cast<double>(n);
    rep.r_n = sum_gn / static_cast<double>(unskipped);
    rep.r_c = sum_gc / static_cast<double>(unskipped);
    rep.lower_bound_n = sum_lb / static_cast<double>(unskipped);
    return rep;
}

double measure_R(const Matrix& x, const Matrix& y, const NeighborhoodGraph& g) {
    MeasureOptions opt;
    opt.with_pca = false;
    return measure_report(x, y, g, opt).r;
}

double measure_RN(const Matrix& x, const Matrix& y, const NeighborhoodGraph& g) {
    MeasureOptions opt;
    opt.with_pca = false;
    return measure_report(x, y, g, opt).r_n;
}

double measure_RPCA(const Matrix& x, const Matrix& y, const NeighborhoodGraph& g) {
    return measure_report(x, y, g).r_pca;
}

double measure_RC(const Matrix& x, const Matrix& y, const NeighborhoodGraph& g) {
    MeasureOptions opt;
    opt.with_pca = false;
    return measure_report(x, y, g, opt).r_c;
}

double lower_bound_N(const Matrix& x, const NeighborhoodGraph& g, Index d) {
    if (d > x.cols()) throw InvalidInput("lower_bound_N: d exceeds input dimension");
    if (x.rows() != g.n) throw InvalidInput("lower_bound_N: graph size mismatch");
    const Index n = g.n;
    std::vector<double> term(n, 0.0);
    std::vector<char> skip(n, 0);
    parallel_for(0, n, [&](Index i) {
        const Matrix hx = gather_centered(x, g.members(i));
        const double sx = hx.squaredNorm();
        if (sx < kDegenerate) {
            skip[i] = 1;
            return;
        }
        Eigen::JacobiSVD<Matrix> svd(hx);
        const Vector sv = svd.singularValues();
        double top = 0.0;
        for (Index p = 0; p < std::min(d, sv.size()); ++p) top += sv[p] * sv[p];
        term[i] = std::max(0.0, sx - top) / sx;
    });
    double sum = 0.0;
    Index count = 0;
    for (Index i = 0; i < n; ++i) {
        if (skip[i]) continue;
        sum += term[i];
        ++count;
    }
    if (count == 0) throw DegenerateInput("lower_bound_N: every neighborhood is degenerate");
    return sum / static_cast<double>(count);
}

std::string MeasureReport::to_json() const {
    nlohmann::json j;
    j["R"] = r;
    j["R_N"] = r_n;
    j["R_PCA"] = r_pca;
    j["R_C"] = r_c;
    j["lower_bound_N"] = lower_bound_n;
    j["skipped"] = skipped;
    j["neighborhood_param"] = neighborhood_param;
    auto& per = j["per_neighborhood"] = nlohmann::json::array();
    for (const auto& s : per_neighborhood) {
        per.push_back({{"index", s.index},
                       {"G", s.g},
                       {"G_pca", s.g_pca},
                       {"G_conformal", s.g_conformal},
                       {"normalizer", s.normalizer},
                       {"pca_deficit", s.pca_deficit},
                       {"skipped", s.skipped}});
    }
    return j.dump();
}

MeasureReport MeasureReport::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    MeasureReport rep;
    rep.r = j.at("R").get<double>();
    rep.r_n = j.at("R_N").get<double>();
    rep.r_pca = j.at("R_PCA").get<double>();
    rep.r_c = j.at("R_C").get<double>();
    rep.lower_bound_n = j.at("lower_bound_N").get<double>();
    rep.skipped = j.at("skipped").get<Index>();
    rep.neighborhood_param = j.at("neighborhood_param").get<std::string>();
    for (const auto& e : j.at("per_neighborhood")) {
        NeighborhoodScore s;
        s.index = e.at("index").get<Index>();
        s.g = e.at("G").get<double>();
        s.g_pca = e.at("G_pca").get<double>();
        s.g_conformal = e.at("G_conformal").get<double>();
        s.normalizer = e.at("normalizer").get<double>();
        s.pca_deficit = e.at("pca_deficit").get<double>();
        s.skipped = e.at("skipped").get<bool>();
        rep.per_neighborhood.push_back(s);
    }
    return rep;
}

std::string MeasureReport::summary() const {
    std::ostringstream os;
    os.precision(6);
    os << "R=" << r << " R_N=" << r_n << " R_PCA=" << r_pca << " R_C=" << r_c
       << " LB=" << lower_bound_n << " skipped=" << skipped;
    return os.str();
}

}  // namespace lpm
