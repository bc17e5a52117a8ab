#include "lpm/embed_psa.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "lpm/embed_gp.hpp"
#include "lpm/measures.hpp"
#include "lpm/numerics.hpp"
#include "lpm/procrustes.hpp"

namespace lpm {

namespace {

void validate_field(const FrameField& field, const NeighborhoodGraph& g) {
    if (static_cast<Index>(field.frames.size()) != g.n)
        throw InvalidInput("frame field size does not match the graph");
    for (const auto& a : field.frames) {
        const Matrix gram = a.transpose() * a;
        if ((gram - Matrix::Identity(a.cols(), a.cols())).norm() > 1e-6)
            throw InvalidInput("frame field contains a non-orthonormal frame");
    }
}

Matrix gather_centered(const Matrix& m, const std::vector<Index>& rows) {
    Matrix out(static_cast<Index>(rows.size()), m.cols());
    for (size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Index>(r)) = m.row(rows[r]);
    out.rowwise() -= out.colwise().mean().eval();
    return out;
}

Matrix reorthonormalize(const Matrix& a) {
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.matrixU() * svd.matrixV().transpose();
}

// Tempered proposal in O(d): a rotation in a random 2-plane with angle scaled
// by the cooling progress, composed with a single-column reflection half the
// time. The reflections keep the full orthogonal group reachable (the PCA
// frames carry arbitrary column signs); the angle tempering keeps late-stage
// moves small so acceptance does not stall.
Matrix proposal_rotation(Index d, double temp_fraction, RngStream& rng) {
    Matrix o = Matrix::Identity(d, d);
    if (d >= 2) {
        const Index p = static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(d)));
        Index q = static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(d - 1)));
        if (q >= p) ++q;
        const double scale = std::max(temp_fraction, 0.02);
        const double theta = rng.uniform(-M_PI, M_PI) * scale;
        const double c = std::cos(theta), s = std::sin(theta);
        o(p, p) = c;
        o(q, q) = c;
        o(p, q) = -s;
        o(q, p) = s;
    }
    if (rng.uniform() < 0.5) {
        const Index col = static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(d)));
        o.col(col) = -o.col(col);
    }
    return o;
}

struct Annealer {
    const NeighborhoodGraph& g;
    const SaSchedule& sched;
    std::vector<std::vector<Index>> rev;
    std::vector<Matrix> frames;
    double f_cur = 0.0;
    std::vector<Matrix> best_frames;
    double best_f = 0.0;

    Annealer(const FrameField& init, const NeighborhoodGraph& graph, const SaSchedule& schedule)
        : g(graph), sched(schedule), rev(graph.n), frames(init.frames) {
        for (Index i = 0; i < g.n; ++i)
            for (Index j : g.neighbors[i]) rev[j].push_back(i);
        f_cur = objective();
        best_frames = frames;
        best_f = f_cur;
    }

    double objective() const {
        double f = 0.0;
        for (Index i = 0; i < g.n; ++i)
            for (Index j : g.neighbors[i]) f += (frames[i] - frames[j]).squaredNorm();
        return f;
    }

    // Change in f when frame i is replaced: both edge directions touch i.
    double delta(Index i, const Matrix& candidate) const {
        double d = 0.0;
        for (Index j : g.neighbors[i])
            d += (candidate - frames[j]).squaredNorm() - (frames[i] - frames[j]).squaredNorm();
        for (Index p : rev[i])
            d += (frames[p] - candidate).squaredNorm() - (frames[p] - frames[i]).squaredNorm();
        return d;
    }

    void snapshot_if_better() {
        if (f_cur < best_f - 1e-15) {
            best_f = f_cur;
            best_frames = frames;
        }
    }

    void restore_best() {
        frames = best_frames;
        f_cur = best_f;
    }

    // One full annealing run proposing moves only for `subset`.
    void run(const std::vector<Index>& subset, RngStream& rng) {
        if (subset.empty()) return;
        const Index d = frames[0].cols();

        // Probe uphill moves to calibrate the initial temperature.
        double uphill_sum = 0.0;
        Index uphill_count = 0;
        for (int probe = 0; probe < 100; ++probe) {
            const Index i = subset[rng.uniform_index(subset.size())];
            const Matrix cand = frames[i] * proposal_rotation(d, 1.0, rng);
            const double df = delta(i, cand);
            if (df > 0.0) {
                uphill_sum += df;
                ++uphill_count;
            }
        }
        double t_init = uphill_count > 0
                            ? (uphill_sum / uphill_count) / std::log(1.0 / sched.initial_acceptance)
                            : 1e-3 * (1.0 + std::abs(f_cur));
        const double t_min = sched.t_min_factor * t_init;
        const Index steps = sched.steps_per_temp > 0
                                ? sched.steps_per_temp
                                : 20 * static_cast<Index>(subset.size());

        Index accepted_since_fix = 0;
        for (double temp = t_init; temp > t_min; temp *= sched.alpha) {
            for (Index s = 0; s < steps; ++s) {
                const Index i = subset[rng.uniform_index(subset.size())];
                const Matrix cand = frames[i] * proposal_rotation(d, temp / t_init, rng);
                const double df = delta(i, cand);
                if (df < 0.0 || rng.uniform() < std::exp(-df / temp)) {
                    frames[i] = cand;
                    f_cur += df;
                    snapshot_if_better();
                    if (++accepted_since_fix >= 10000) {
                        // Stop numerical drift from accumulated products.
                        for (Index p : subset) frames[p] = reorthonormalize(frames[p]);
                        f_cur = objective();
                        snapshot_if_better();
                        accepted_since_fix = 0;
                    }
                }
            }
        }
        restore_best();
    }

    // Largest cluster of mutually aligned frames (BFS over undirected edges).
    std::vector<char> largest_cluster(double tol) const {
        std::vector<std::vector<Index>> und(g.n);
        for (Index i = 0; i < g.n; ++i)
            for (Index j : g.neighbors[i]) {
                und[i].push_back(j);
                und[j].push_back(i);
            }
        std::vector<Index> label(g.n, -1);
        std::vector<Index> sizes;
        for (Index s = 0; s < g.n; ++s) {
            if (label[s] >= 0) continue;
            const Index id = static_cast<Index>(sizes.size());
            Index size = 0;
            std::vector<Index> stack{s};
            label[s] = id;
            while (!stack.empty()) {
                const Index v = stack.back();
                stack.pop_back();
                ++size;
                for (Index w : und[v]) {
                    if (label[w] >= 0) continue;
                    if ((frames[v] - frames[w]).norm() < tol) {
                        label[w] = id;
                        stack.push_back(w);
                    }
                }
            }
            sizes.push_back(size);
        }
        Index best_id = 0;
        for (Index c = 1; c < static_cast<Index>(sizes.size()); ++c)
            if (sizes[c] > sizes[best_id]) best_id = c;
        std::vector<char> in_cluster(g.n, 0);
        for (Index i = 0; i < g.n; ++i) in_cluster[i] = label[i] == best_id;
        return in_cluster;
    }
};

}  // namespace

double alignment_objective(const FrameField& field, const NeighborhoodGraph& g) {
    if (static_cast<Index>(field.frames.size()) != g.n)
        throw InvalidInput("alignment_objective: frame field size mismatch");
    double f = 0.0;
    for (Index i = 0; i < g.n; ++i)
        for (Index j : g.neighbors[i]) f += (field.frames[i] - field.frames[j]).squaredNorm();
    return f;
}

SaResult sa_align(const FrameField& init, const NeighborhoodGraph& g, const SaSchedule& sched,
                  RngStream& rng) {
    validate_field(init, g);
    const Index d = init.frames.empty() ? 0 : init.frames[0].cols();
    const double tol =
        sched.alignment_tol > 0.0 ? sched.alignment_tol : 0.3 * std::sqrt(2.0 * d);

    Annealer ann(init, g, sched);
    SaResult result;
    result.initial_f = ann.f_cur;

    std::vector<Index> all(g.n);
    for (Index i = 0; i < g.n; ++i) all[i] = i;

    std::vector<char> cluster;
    double coverage = 0.0;
    // Short-circuit when the input is already aligned everywhere.
    cluster = ann.largest_cluster(tol);
    coverage = static_cast<double>(std::count(cluster.begin(), cluster.end(), 1)) /
               static_cast<double>(g.n);
    if (coverage < sched.coverage_target || ann.f_cur > 0.0) {
        for (Index outer = 0; outer < sched.max_outer_iters; ++outer) {
            std::vector<Index> subset;
            if (outer == 0) {
                subset = all;
            } else {
                for (Index i = 0; i < g.n; ++i)
                    if (!cluster[i]) subset.push_back(i);
            }
            ann.run(subset, rng);
            ++result.outer_iters;
            cluster = ann.largest_cluster(tol);
            coverage = static_cast<double>(std::count(cluster.begin(), cluster.end(), 1)) /
                       static_cast<double>(g.n);
            if (coverage >= sched.coverage_target) break;
        }
    }
    result.frames.frames = std::move(ann.frames);
    result.final_f = ann.f_cur;
    result.coverage = coverage;
    result.complete = coverage >= sched.coverage_target;
    return result;
}

Matrix solve_embedding(const Matrix& x, const NeighborhoodGraph& g, const FrameField& field,
                       double tol) {
    if (x.rows() != g.n) throw InvalidInput("solve_embedding: graph size mismatch");
    validate_field(field, g);
    const Index n = g.n;
    const Index d = field.frames[0].cols();

    std::vector<std::vector<Index>> members(n);
    for (Index i = 0; i < n; ++i) members[i] = g.members(i);

    Matrix rhs = Matrix::Zero(n, d);
    for (Index i = 0; i < n; ++i) {
        const Matrix contrib = gather_centered(x, members[i]) * field.frames[i];
        for (size_t r = 0; r < members[i].size(); ++r)
            rhs.row(members[i][r]) += contrib.row(static_cast<Index>(r));
    }

    const auto apply = [&](const Matrix& b) {
        Matrix out = Matrix::Zero(n, b.cols());
        for (Index i = 0; i < n; ++i) {
            const Matrix centered = gather_centered(b, members[i]);
            for (size_t r = 0; r < members[i].size(); ++r)
                out.row(members[i][r]) += centered.row(static_cast<Index>(r));
        }
        return out;
    };

    return solve_centered_spd(apply, rhs, g.connected_components(), tol);
}

PsaResult embed_psa(const Matrix& x, const NeighborhoodGraph& g, Index d,
                    const PsaOptions& options, RngStream& rng) {
    if (d < 1 || d > x.cols()) throw InvalidInput("embed_psa: invalid output dimension");
    const Index n = x.rows();
    if (g.n != n) throw InvalidInput("embed_psa: graph size mismatch");

    std::vector<Matrix> pca_frames(n);
    for (Index i = 0; i < n; ++i)
        pca_frames[i] = pca_projection(neighborhood_matrix(x, g, i), d).projection;

    FrameField init;
    init.frames.resize(n);
    if (options.init_from_gp) {
        RngStream gp_rng = rng.split(0x67700);
        const GpResult gp = embed_gp(x, g, d, GpOptions{}, gp_rng);
        for (Index i = 0; i < n; ++i) {
            const Matrix xi = neighborhood_matrix(x, g, i);
            Matrix yi(xi.rows(), d);
            const auto m = g.members(i);
            for (size_t r = 0; r < m.size(); ++r) yi.row(static_cast<Index>(r)) = gp.y.row(m[r]);
            init.frames[i] = fit(xi, yi).rotation;
        }
    } else {
        for (Index i = 0; i < n; ++i) init.frames[i] = pca_frames[i] * random_orthogonal(d, rng);
    }

    // Chains explore different basins: chain 0 anneals the configured init,
    // later chains restart from fresh random rotations of the PCA frames. The
    // winner is the chain whose solved embedding scores best; a lower final f
    // does not imply a better embedding, so f is not the selection criterion.
    SaResult best;
    Matrix best_y;
    double best_rn = 0.0;
    bool have_best = false;
    for (Index c = 0; c < std::max<Index>(1, options.chains); ++c) {
        FrameField chain_init = init;
        if (c > 0) {
            RngStream init_rng = rng.split(0x171700 + static_cast<std::uint64_t>(c));
            for (Index i = 0; i < n; ++i)
                chain_init.frames[i] = pca_frames[i] * random_orthogonal(d, init_rng);
        }
        RngStream chain_rng = rng.split(static_cast<std::uint64_t>(c) + 1);
        SaResult r = sa_align(chain_init, g, options.schedule, chain_rng);
        Matrix y = solve_embedding(x, g, r.frames);
        const double rn = measure_RN(x, y, g);
        if (!have_best || rn < best_rn) {
            best = std::move(r);
            best_y = std::move(y);
            best_rn = rn;
            have_best = true;
        }
    }

    PsaResult result;
    result.final_f = best.final_f;
    result.coverage = best.coverage;
    result.alignment_complete = best.complete;
    if (!best.complete)
        result.warnings.push_back("AlignmentIncomplete: largest aligned cluster covers " +
                                  std::to_string(best.coverage * 100.0) + "% of points");

    result.y = std::move(best_y);

    // Lay out disconnected components side by side, 2 r_max apart.
    const auto components = g.connected_components();
    if (components.size() > 1) {
        double running_max = 0.0;
        bool first = true;
        for (const auto& comp : components) {
            double lo = result.y(comp[0], 0), hi = lo;
            for (Index i : comp) {
                lo = std::min(lo, result.y(i, 0));
                hi = std::max(hi, result.y(i, 0));
            }
            if (!first) {
                const double offset = running_max + 2.0 * g.r_max - lo;
                for (Index i : comp) result.y(i, 0) += offset;
                hi += offset;
            }
            running_max = first ? hi : std::max(running_max, hi);
            first = false;
        }
    }
    return result;
}

}  // namespace lpm
