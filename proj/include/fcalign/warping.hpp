#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "fcalign/common.hpp"
#include "fcalign/data_model.hpp"

namespace fcalign {

// Allowed warp steps are {-s_max, ..., s_max}. lambda weights the sign penalty.
struct WarpSpec {
    int s_max = 1;
    double lambda = 0.0;
    bool normalize_by_length = true;

    // Throws InvalidArgument unless 0 <= s_max <= p - 2 and lambda >= 0.
    void validate(std::size_t n_times) const;
};

// Pairwise optimal warped dissimilarities and the steps achieving them.
// owd is symmetric with a zero diagonal, ow antisymmetric.
struct OWDMatrices {
    RealMatrix owd;
    IntMatrix ow;
};

// Index shift by step over n time points: for step > 0 the first vector keeps
// t_1..t_{n-step} and the second t_{1+step}..t_n; step < 0 is the mirror image.
// Throws StepTooLarge if |step| >= n. A single point remains when |step| = n - 1.
std::pair<std::vector<double>, std::vector<double>> warp_time(const TimeVector& t, int step);

// Warped dissimilarity of the pair (i, j) under a given step: position l of i is
// compared with position l + step of j. Cross-covariances enter at the time
// points t_{1+|step|}..t_{n-|step|}. With normalize_by_length the value is divided by
// the overlap length n - |step|; lambda * sign_penalty is added afterwards.
// Symmetric in the sense diss(i, j, step) == diss(j, i, -step), bit for bit.
double diss(const FoldChangeSet& set, std::size_t i, std::size_t j, int step, const WarpSpec& spec);

// Fraction of aligned positions whose means have strictly opposite signs.
double sign_penalty(const FoldChangeSet& set, std::size_t i, std::size_t j, int step);

struct OptimalWarp {
    double value = 0.0;
    int step = 0;
};

// Minimum of diss over the allowed steps. Ties go to the smallest |step|; a tie
// between +step and -step goes to +step when i < j and to -step when i > j, which keeps the
// result antisymmetric in (i, j).
OptimalWarp optimal_warp(const FoldChangeSet& set, std::size_t i, std::size_t j, const WarpSpec& spec);

// Fills the upper triangle with optimal_warp and mirrors it (negating steps).
OWDMatrices build_owd_ow(const FoldChangeSet& set, const WarpSpec& spec);

// Wraps a plain dissimilarity matrix as OWD matrices with all steps zero.
OWDMatrices unwarped(RealMatrix dissimilarity);

}  // namespace fcalign
