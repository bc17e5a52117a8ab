#ifndef LPM_EMBED_GP_HPP
#define LPM_EMBED_GP_HPP

#include "lpm/neighborhoods.hpp"
#include "lpm/rng.hpp"

namespace lpm {

/// Greedy Procrustes embedding (one neighborhood at a time). The first
/// neighborhood is embedded by local PCA; every later step picks the
/// unembedded point with the most already-embedded neighbors, fits the
/// embedded overlap by Procrustes and places the new points through the
/// inverse map. Embedded points are never moved.
struct GpOptions {
    Index seed_index = -1;  // -1: the point closest to the data centroid
    bool random_seed = false;
};

struct GpResult {
    Matrix y;  // n x d
    std::vector<std::string> warnings;
    Index components = 1;
};

GpResult embed_gp(const Matrix& x, const NeighborhoodGraph& g, Index d, const GpOptions& options,
                  RngStream& rng);

}  // namespace lpm

#endif
