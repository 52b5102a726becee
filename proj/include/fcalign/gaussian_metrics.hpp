#pragma once

#include <cstddef>
#include <string>

#include "fcalign/common.hpp"
#include "fcalign/data_model.hpp"

namespace fcalign {

// Expected squared Euclidean distance E|X - Y|^2 between two jointly Gaussian
// fold-change estimators, using the pair's cross-covariances.
double d2_squared(const FoldChangeSet& set, std::size_t i, std::size_t j);

// Squared 2-Wasserstein distance between the marginals (diagonal covariances).
double wasserstein_sq(const FoldChange& a, const FoldChange& b);

// Squared Hellinger distance between the marginals; in [0, 1].
// Throws NonPositiveVariance if any variance is not strictly positive.
double hellinger_sq(const FoldChange& a, const FoldChange& b);

enum class Metric { L2, Wasserstein, Hellinger };

Metric parse_metric(const std::string& name);
const char* metric_name(Metric metric);

// Symmetric matrix of pairwise squared dissimilarities, zero diagonal.
RealMatrix pairwise_matrix(const FoldChangeSet& set, Metric metric);

}  // namespace fcalign
