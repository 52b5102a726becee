#pragma once

#include <string>
#include <vector>

#include "fcalign/data_model.hpp"

namespace fcalign {

// Stages run in order: standard-deviation scaling, then norm scaling. With
// scale_by_norm alone the norm is taken on the unscaled estimator.
struct PreprocessOptions {
    bool scale_by_std = false;
    bool scale_by_norm = false;
};

// Difference of condition means, sum of unbiased per-condition variances and
// sum of per-condition sample cross-covariances, at every time point.
FoldChangeSet estimate(const ReplicateDataset& dataset);

struct DegenerateCell {
    std::string entity;
    double time;
};

// Entity-time cells whose estimated variance is exactly zero.
std::vector<DegenerateCell> degenerate_variances(const FoldChangeSet& set);

// sqrt(|mean|^2 + trace of the covariance).
double fc_norm(const FoldChange& fc);

FoldChangeSet preprocess(const FoldChangeSet& set, const PreprocessOptions& opts);

}  // namespace fcalign
