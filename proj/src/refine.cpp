#include "lpm/refine.hpp"

#include "lpm/measures.hpp"
#include "lpm/procrustes.hpp"

namespace lpm {

Matrix refine_step(const Matrix& x, const Matrix& y, const NeighborhoodGraph& g) {
    const Index n = x.rows();
    if (y.rows() != n || g.n != n) throw InvalidInput("refine_step: dimension mismatch");
    const Index d = y.cols();

    std::vector<Matrix> rotations(n);
    std::vector<Vector> translations(n);
    parallel_for(0, n, [&](Index i) {
        const auto members = g.members(i);
        if (members.size() < 2) return;  // a singleton constrains nothing
        Matrix xi(static_cast<Index>(members.size()), x.cols());
        Matrix yi(static_cast<Index>(members.size()), d);
        for (size_t r = 0; r < members.size(); ++r) {
            xi.row(static_cast<Index>(r)) = x.row(members[r]);
            yi.row(static_cast<Index>(r)) = y.row(members[r]);
        }
        const ProcrustesFit f = fit(xi, yi);
        rotations[i] = f.rotation;
        // b_i is the mean of x_j - A_i y_j over the neighborhood, which the
        // closed-form fit translation already equals.
        translations[i] = f.translation;
    });

    Matrix y_new = Matrix::Zero(n, d);
    std::vector<Index> coverage(n, 0);
    for (Index i = 0; i < n; ++i) {
        if (g.neighbors[i].empty()) continue;
        for (Index j : g.members(i)) {
            y_new.row(j) +=
                (rotations[i].transpose() * (x.row(j).transpose() - translations[i])).transpose();
            ++coverage[j];
        }
    }
    for (Index j = 0; j < n; ++j) {
        if (coverage[j] > 0)
            y_new.row(j) /= static_cast<double>(coverage[j]);
        else
            y_new.row(j) = y.row(j);
    }
    return y_new;
}

RefineResult refine(const Matrix& x, const Matrix& y0, const NeighborhoodGraph& g, double rel_tol,
                    Index max_iters) {
    RefineResult result;
    result.y = y0;

    // With the center-included neighborhood convention every point covers
    // itself, so `uncovered` can only be non-empty for externally supplied
    // graphs with empty neighborhoods.
    for (Index j = 0; j < g.n; ++j)
        if (g.neighbors[j].empty()) {
            bool covered = false;
            for (Index i = 0; i < g.n && !covered; ++i)
                for (Index m : g.neighbors[i])
                    if (m == j) {
                        covered = true;
                        break;
                    }
            if (!covered) result.uncovered.push_back(j);
        }

    Matrix best = y0;
    MeasureOptions opt;
    opt.with_pca = false;
    MeasureReport rep = measure_report(x, y0, g, opt);
    double best_r = rep.r;
    double prev_r = rep.r;
    result.trace.iterations.push_back({0, rep.r, rep.r_n, 0.0});
    result.trace.stop_reason = RefineStop::max_iters;

    Matrix y = y0;
    for (Index it = 1; it <= max_iters; ++it) {
        const Matrix y_next = refine_step(x, y, g);
        const double disp = (y_next - y).rowwise().norm().maxCoeff();
        rep = measure_report(x, y_next, g, opt);
        result.trace.iterations.push_back({it, rep.r, rep.r_n, disp});
        y = y_next;
        if (rep.r < best_r) {
            best_r = rep.r;
            best = y;
        }
        if (rep.r > prev_r) {
            result.trace.stop_reason = RefineStop::non_decreasing;
            break;
        }
        if ((prev_r - rep.r) / std::max(prev_r, 1e-300) < rel_tol) {
            result.trace.stop_reason = RefineStop::converged;
            break;
        }
        prev_r = rep.r;
    }
    result.y = best;
    return result;
}

}  // namespace lpm
