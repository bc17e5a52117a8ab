#include "lpm/embed_gp.hpp"

#include <queue>

#include "lpm/numerics.hpp"
#include "lpm/procrustes.hpp"

namespace lpm {

namespace {

Index closest_to_centroid(const Matrix& x, const std::vector<Index>& candidates) {
    RowVector centroid = RowVector::Zero(x.cols());
    for (Index i : candidates) centroid += x.row(i);
    centroid /= static_cast<double>(candidates.size());
    Index best = candidates.front();
    double best_d = (x.row(best) - centroid).squaredNorm();
    for (Index i : candidates) {
        const double d = (x.row(i) - centroid).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

}  // namespace

GpResult embed_gp(const Matrix& x, const NeighborhoodGraph& g, Index d, const GpOptions& options,
                  RngStream& rng) {
    const Index n = x.rows();
    if (g.n != n) throw InvalidInput("embed_gp: graph size does not match point count");
    if (d < 1 || d > x.cols()) throw InvalidInput("embed_gp: invalid output dimension");
    require_finite(x, "embed_gp: X");

    GpResult result;
    result.y = Matrix::Zero(n, d);
    result.components = 0;

    std::vector<char> embedded(n, 0);
    Index embedded_count = 0;
    double bbox_max0 = 0.0;  // running max of the first output coordinate

    // Reverse adjacency: who lists m as a neighbor.
    std::vector<std::vector<Index>> rev(n);
    for (Index i = 0; i < n; ++i)
        for (Index j : g.neighbors[i]) rev[j].push_back(i);

    std::vector<Index> counts(n, 0);
    // Lazy max-heap keyed by (embedded-neighbor count, lowest index first).
    using Entry = std::pair<Index, Index>;  // (count, -index)
    std::priority_queue<Entry> frontier;

    auto place = [&](Index m, const RowVector& coords) {
        result.y.row(m) = coords;
        embedded[m] = 1;
        ++embedded_count;
        bbox_max0 = embedded_count == 1 ? coords[0] : std::max(bbox_max0, coords[0]);
        for (Index p : rev[m]) {
            if (embedded[p]) continue;
            ++counts[p];
            frontier.emplace(counts[p], -p);
        }
    };

    auto seed_component = [&](Index i) {
        const auto members = g.members(i);
        Matrix xi = neighborhood_matrix(x, g, i);
        const RowVector mean = xi.colwise().mean();
        xi.rowwise() -= mean;
        const Matrix p = pca_projection(neighborhood_matrix(x, g, i), d).projection;
        Matrix yi = xi * p;
        if (result.components > 0) {
            // Later components stand 2 r_max beyond the existing output.
            const double offset = bbox_max0 + 2.0 * g.r_max - yi.col(0).minCoeff();
            yi.col(0).array() += offset;
        }
        ++result.components;
        for (size_t r = 0; r < members.size(); ++r)
            if (!embedded[members[r]]) place(members[r], yi.row(static_cast<Index>(r)));
    };

    // First seed: centroid-closest point by default for reproducibility.
    Index seed;
    if (options.seed_index >= 0) {
        if (options.seed_index >= n) throw InvalidInput("embed_gp: seed index out of range");
        seed = options.seed_index;
    } else if (options.random_seed) {
        seed = static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
    } else {
        std::vector<Index> all(n);
        for (Index i = 0; i < n; ++i) all[i] = i;
        seed = closest_to_centroid(x, all);
    }
    seed_component(seed);

    bool warned_underdetermined = false;
    while (embedded_count < n) {
        // Pop the best live candidate; stale entries are discarded.
        Index j = -1;
        while (!frontier.empty()) {
            const auto [c, neg] = frontier.top();
            const Index p = -neg;
            frontier.pop();
            if (embedded[p] || counts[p] != c) continue;
            j = p;
            break;
        }
        if (j < 0) {
            // Disconnected graph: seed a fresh PCA component.
            std::vector<Index> rest;
            for (Index i = 0; i < n; ++i)
                if (!embedded[i]) rest.push_back(i);
            result.warnings.push_back("ComponentWarning: disconnected graph, new component seeded at index " +
                                      std::to_string(closest_to_centroid(x, rest)));
            seed_component(closest_to_centroid(x, rest));
            continue;
        }

        std::vector<Index> overlap, fresh;
        fresh.push_back(j);
        for (Index m : g.neighbors[j])
            (embedded[m] ? overlap : fresh).push_back(m);

        if (static_cast<Index>(overlap.size()) < d + 1 && !warned_underdetermined) {
            // The frontier top is the global argmax, so every remaining
            // candidate is underdetermined; proceed with what there is.
            result.warnings.push_back("UnderdeterminedStep: overlap of " +
                                      std::to_string(overlap.size()) + " point(s) at index " +
                                      std::to_string(j));
            warned_underdetermined = true;
        }

        Matrix x_bar(static_cast<Index>(overlap.size()), x.cols());
        Matrix y_bar(static_cast<Index>(overlap.size()), d);
        for (size_t r = 0; r < overlap.size(); ++r) {
            x_bar.row(static_cast<Index>(r)) = x.row(overlap[r]);
            y_bar.row(static_cast<Index>(r)) = result.y.row(overlap[r]);
        }
        // A maps the low-d overlap onto the high-d one (x ~ A y + b); new
        // low-d coordinates come from the left inverse, y = A'(x - b).
        const ProcrustesFit f = fit(x_bar, y_bar);
        for (Index m : fresh) {
            const Vector ym = f.rotation.transpose() * (x.row(m).transpose() - f.translation);
            place(m, ym.transpose());
        }
    }
    return result;
}

}  // namespace lpm
