#include "fcalign/fold_change.hpp"

#include <cmath>

namespace fcalign {

FoldChangeSet estimate(const ReplicateDataset& dataset) {
    const std::size_t n = dataset.n_entities();
    const std::size_t n_pts = dataset.n_times();
    const std::size_t nr = dataset.n_replicates();
    if (nr < 2) throw Error(ErrorCode::InvalidArgument, "at least two replicates are required");
    const double inv_nr = 1.0 / static_cast<double>(nr);
    const double inv_dof = 1.0 / static_cast<double>(nr - 1);

    // Replicate means per (entity, condition, time).
    std::vector<double> cond_mean(n * 2 * n_pts, 0.0);
    auto cm = [&](std::size_t i, int k, std::size_t t) -> double& { return cond_mean[(i * 2 + k) * n_pts + t]; };
    for (std::size_t i = 0; i < n; ++i) {
        for (int k = 0; k < 2; ++k) {
            for (std::size_t t = 0; t < n_pts; ++t) {
                double sum = 0.0;
                for (std::size_t j = 0; j < nr; ++j) sum += dataset.at(i, k, j, t);
                cm(i, k, t) = sum * inv_nr;
            }
        }
    }

    std::vector<FoldChange> items(n);
    for (std::size_t i = 0; i < n; ++i) {
        items[i].mean.resize(n_pts);
        items[i].var.resize(n_pts);
        for (std::size_t t = 0; t < n_pts; ++t) {
            double var = 0.0;
            for (int k = 0; k < 2; ++k) {
                double ss = 0.0;
                for (std::size_t j = 0; j < nr; ++j) {
                    const double d = dataset.at(i, k, j, t) - cm(i, k, t);
                    ss += d * d;
                }
                var += ss * inv_dof;
            }
            items[i].mean[t] = cm(i, kCase, t) - cm(i, kControl, t);
            items[i].var[t] = var;
        }
    }

    FoldChangeSet out(dataset.time(), dataset.entities(), std::move(items));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            for (std::size_t t = 0; t < n_pts; ++t) {
                double cov = 0.0;
                for (int k = 0; k < 2; ++k) {
                    double sp = 0.0;
                    for (std::size_t j = 0; j < nr; ++j) {
                        sp += (dataset.at(a, k, j, t) - cm(a, k, t)) * (dataset.at(b, k, j, t) - cm(b, k, t));
                    }
                    cov += sp * inv_dof;
                }
                out.set_rho(a, b, t, cov);
            }
        }
    }
    return out;
}

std::vector<DegenerateCell> degenerate_variances(const FoldChangeSet& set) {
    std::vector<DegenerateCell> cells;
    for (std::size_t i = 0; i < set.size(); ++i) {
        for (std::size_t t = 0; t < set.n_times(); ++t) {
            if (set.var(i)[t] == 0.0) cells.push_back({set.ids()[i], set.time()[t]});
        }
    }
    return cells;
}

double fc_norm(const FoldChange& fc) {
    double sq = 0.0;
    for (double m : fc.mean) sq += m * m;
    for (double v : fc.var) sq += v;
    return std::sqrt(sq);
}

FoldChangeSet preprocess(const FoldChangeSet& set, const PreprocessOptions& opts) {
    const std::size_t n = set.size();
    const std::size_t n_pts = set.n_times();
    if (!opts.scale_by_std && !opts.scale_by_norm) return set;

    std::vector<FoldChange> items = set.items();
    // Per-entity, per-time divisor applied to the means; cross-covariances are
    // divided by the product of the two entities' divisors.
    std::vector<double> scale(n * n_pts, 1.0);

    if (opts.scale_by_std) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t t = 0; t < n_pts; ++t) {
                const double v = items[i].var[t];
                if (!(v > 0.0)) {
                    throw Error(ErrorCode::ZeroVariance, "entity '" + set.ids()[i] + "' has zero variance at time " +
                                                             std::to_string(set.time()[t]));
                }
                const double sd = std::sqrt(v);
                items[i].mean[t] /= sd;
                items[i].var[t] = 1.0;
                scale[i * n_pts + t] = sd;
            }
        }
    }

    if (opts.scale_by_norm) {
        for (std::size_t i = 0; i < n; ++i) {
            const double norm = fc_norm(items[i]);
            if (!(norm > 0.0)) {
                throw Error(ErrorCode::ZeroNorm, "entity '" + set.ids()[i] + "' has a zero fold-change norm");
            }
            const double norm_sq = norm * norm;
            for (std::size_t t = 0; t < n_pts; ++t) {
                items[i].mean[t] /= norm;
                items[i].var[t] /= norm_sq;
                scale[i * n_pts + t] *= norm;
            }
        }
    }

    FoldChangeSet out(set.time(), set.ids(), std::move(items));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            for (std::size_t t = 0; t < n_pts; ++t) {
                out.set_rho(a, b, t, set.rho(a, b, t) / (scale[a * n_pts + t] * scale[b * n_pts + t]));
            }
        }
    }
    return out;
}

}  // namespace fcalign
