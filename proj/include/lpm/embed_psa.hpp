#ifndef LPM_EMBED_PSA_HPP
#define LPM_EMBED_PSA_HPP

#include "lpm/neighborhoods.hpp"
#include "lpm/rng.hpp"

namespace lpm {

/// A columns-orthonormal q x d tangent-frame guess per point, aligned over a
/// neighborhood graph.
struct FrameField {
    std::vector<Matrix> frames;
};

/// Annealing schedule for the frame alignment. The initial temperature is
/// calibrated so roughly 80% of uphill probe moves would be accepted; cooling
/// is geometric.
struct SaSchedule {
    double initial_acceptance = 0.8;
    double alpha = 0.95;           // geometric cooling factor
    Index steps_per_temp = 0;      // 0: 20 * (number of annealed frames)
    double t_min_factor = 1e-4;    // t_min = t_min_factor * t_init
    Index max_outer_iters = 30;
    double coverage_target = 0.99; // stop once the aligned cluster covers this
    double alignment_tol = 0.0;    // 0: 0.3 * sqrt(2 d)
};

/// f(A_1..A_n) = sum_i sum_{j in Neighbors(i)} |A_i - A_j|_F^2.
double alignment_objective(const FrameField& field, const NeighborhoodGraph& g);

struct SaResult {
    FrameField frames;
    double final_f = 0.0;
    double initial_f = 0.0;
    double coverage = 0.0;    // fraction of points in the largest aligned cluster
    bool complete = false;    // coverage target reached
    Index outer_iters = 0;
};

/// Metropolis annealing of the frame rotations (and reflections). Outer
/// iterations re-anneal only the frames outside the largest aligned cluster,
/// found by BFS with the |A_i - A_j|_F < tol criterion. Returns the best
/// configuration seen, so final_f <= initial_f always. An incomplete
/// alignment is reported through `complete`, not an exception: the caller may
/// still solve for an embedding with the best frames found.
SaResult sa_align(const FrameField& init, const NeighborhoodGraph& g, const SaSchedule& sched,
                  RngStream& rng);

/// Least-squares embedding given aligned frames:
///   Y = (sum_i H_i)^+ sum_i H_i X A_i,
/// solved by deflated conjugate gradients per connected component. The result
/// has zero mean on every component.
Matrix solve_embedding(const Matrix& x, const NeighborhoodGraph& g, const FrameField& field,
                       double tol = 1e-8);

struct PsaOptions {
    SaSchedule schedule;
    Index chains = 1;          // independent SA chains, lowest solved R_N wins
    bool init_from_gp = true;  // false: random rotations of the PCA frames
};

struct PsaResult {
    Matrix y;
    double final_f = 0.0;
    double coverage = 0.0;
    bool alignment_complete = false;
    std::vector<std::string> warnings;
};

/// Full pipeline: per-neighborhood PCA frames, SA alignment (initialized from
/// a GP run by default), then the global least-squares solve. Disconnected
/// components are solved separately and laid out 2 r_max apart.
PsaResult embed_psa(const Matrix& x, const NeighborhoodGraph& g, Index d,
                    const PsaOptions& options, RngStream& rng);

}  // namespace lpm

#endif
