#include "fcalign/gaussian_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fcalign {

double d2_squared(const FoldChangeSet& set, std::size_t i, std::size_t j) {
    if (i == j) return 0.0;
    const auto mi = set.mean(i), mj = set.mean(j);
    const auto vi = set.var(i), vj = set.var(j);
    double sq = 0.0, var_i = 0.0, var_j = 0.0, cross = 0.0;
    for (std::size_t t = 0; t < set.n_times(); ++t) {
        const double d = mi[t] - mj[t];
        sq += d * d;
        var_i += vi[t];
        var_j += vj[t];
        cross += set.rho(i, j, t);
    }
    return sq + (var_i + var_j) - 2.0 * cross;
}

double wasserstein_sq(const FoldChange& a, const FoldChange& b) {
    if (a.mean.size() != b.mean.size()) throw Error(ErrorCode::LengthMismatch, "fold changes differ in length");
    double total = 0.0;
    for (std::size_t t = 0; t < a.mean.size(); ++t) {
        const double dm = a.mean[t] - b.mean[t];
        const double ds = std::sqrt(a.var[t]) - std::sqrt(b.var[t]);
        total += dm * dm + ds * ds;
    }
    return total;
}

double hellinger_sq(const FoldChange& a, const FoldChange& b) {
    if (a.mean.size() != b.mean.size()) throw Error(ErrorCode::LengthMismatch, "fold changes differ in length");
    // Bhattacharyya coefficient of two diagonal Gaussians, accumulated in log space.
    double log_bc = 0.0;
    for (std::size_t t = 0; t < a.mean.size(); ++t) {
        const double va = a.var[t], vb = b.var[t];
        if (!(va > 0.0) || !(vb > 0.0)) {
            throw Error(ErrorCode::NonPositiveVariance, "Hellinger distance needs strictly positive variances");
        }
        const double sum = va + vb;
        const double dm = a.mean[t] - b.mean[t];
        log_bc += 0.5 * std::log(2.0 * std::sqrt(va * vb) / sum) - 0.25 * dm * dm / sum;
    }
    return std::clamp(-std::expm1(log_bc), 0.0, 1.0);
}

Metric parse_metric(const std::string& name) {
    if (name == "l2") return Metric::L2;
    if (name == "wasserstein") return Metric::Wasserstein;
    if (name == "hellinger") return Metric::Hellinger;
    throw Error(ErrorCode::InvalidArgument, "unknown metric '" + name + "' (expected l2, wasserstein or hellinger)");
}

const char* metric_name(Metric metric) {
    switch (metric) {
        case Metric::L2: return "l2";
        case Metric::Wasserstein: return "wasserstein";
        case Metric::Hellinger: return "hellinger";
    }
    return "unknown";
}

RealMatrix pairwise_matrix(const FoldChangeSet& set, Metric metric) {
    const std::size_t n = set.size();
    RealMatrix out(n, 0.0);
    if (metric == Metric::Hellinger) {
        for (const auto& fc : set.items()) {
            for (double v : fc.var) {
                if (!(v > 0.0)) {
                    throw Error(ErrorCode::NonPositiveVariance, "Hellinger distance needs strictly positive variances");
                }
            }
        }
    }
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(n); ++si) {
        const auto i = static_cast<std::size_t>(si);
        for (std::size_t j = i + 1; j < n; ++j) {
            double d = 0.0;
            switch (metric) {
                case Metric::L2: d = d2_squared(set, i, j); break;
                case Metric::Wasserstein: d = wasserstein_sq(set.item(i), set.item(j)); break;
                case Metric::Hellinger: d = hellinger_sq(set.item(i), set.item(j)); break;
            }
            out(i, j) = d;
            out(j, i) = d;
        }
    }
    return out;
}

}  // namespace fcalign
