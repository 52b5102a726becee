#pragma once

#include <span>

namespace fcalign {

// Hubert-Arabie adjusted Rand index. When the chance-corrected denominator
// vanishes the result is 1 for identical partitions and 0 otherwise.
double ari(std::span<const int> truth, std::span<const int> pred);

// Harmonic mean of homogeneity and completeness (beta = 1).
double v_measure(std::span<const int> truth, std::span<const int> pred);

}  // namespace fcalign
