#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "fcalign/common.hpp"
#include "fcalign/data_model.hpp"
#include "fcalign/warping.hpp"

namespace fcalign {

struct ClusterConfig {
    std::size_t k = 2;
    int it_max = 100;
    int n_init = 10;
    double epsilon = 1e-9;
    std::uint64_t seed = 0;

    void validate(std::size_t n_entities) const;
};

// What happened inside one initialization.
struct InitTrace {
    std::vector<std::size_t> initial_centroids;
    // Accepted total costs, strictly decreasing by more than epsilon.
    std::vector<double> costs;
    // Cost of the final assignment to the final centroids (<= costs.back()).
    double final_cost = 0.0;
    int iterations = 0;
    // False when it_max was reached before the cost stopped decreasing.
    bool converged = false;
};

// Labels are 0-based cluster indices; warps[i] is the step aligning entity i
// to its centroid (entity first, centroid second).
struct ClusteringResult {
    std::vector<std::size_t> centroids;
    std::vector<int> labels;
    std::vector<int> warps;
    double total_cost = 0.0;
    std::vector<InitTrace> inits;
    std::size_t best_init = 0;
};

// Per-initialization generator, independent of the order in which
// initializations are evaluated.
std::mt19937_64 init_rng(std::uint64_t seed, std::size_t init_index);

// k-means++ seeding on a dissimilarity that is already squared: each new
// centroid is drawn with probability proportional to its dissimilarity to the
// nearest chosen one. When no remaining entity has positive mass the draw falls
// back to uniform among the unchosen entities.
std::vector<std::size_t> kmeanspp_init(std::size_t n, std::size_t k,
                                       const std::function<double(std::size_t, std::size_t)>& dissimilarity,
                                       std::mt19937_64& rng);
std::vector<std::size_t> kmeanspp_init(const RealMatrix& dissimilarity, std::size_t k, std::mt19937_64& rng);

// Sum over entities of owd[i][centroid of i].
double total_cost(const RealMatrix& owd, std::span<const int> labels, std::span<const std::size_t> centroids);

// Mean silhouette; singletons contribute 0. Throws SingleCluster with fewer
// than two distinct labels.
double silhouette(const RealMatrix& owd, std::span<const int> labels);

// Joint clustering and alignment on precomputed OWD / OW matrices.
ClusteringResult cluster_fast(const OWDMatrices& matrices, const ClusterConfig& cfg);

// Same procedure evaluating every warped dissimilarity on demand. Produces
// the same result as cluster_fast(build_owd_ow(set, spec), cfg).
ClusteringResult cluster_classic(const FoldChangeSet& set, const WarpSpec& spec, const ClusterConfig& cfg);

}  // namespace fcalign
