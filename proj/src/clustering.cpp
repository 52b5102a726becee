#include "fcalign/clustering.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <string>

namespace fcalign {

void ClusterConfig::validate(std::size_t n_entities) const {
    if (k < 1 || k > n_entities) {
        throw Error(ErrorCode::InvalidArgument,
                    "K = " + std::to_string(k) + " must lie in [1, " + std::to_string(n_entities) + "]");
    }
    if (it_max < 1) throw Error(ErrorCode::InvalidArgument, "it_max must be at least 1");
    if (n_init < 1) throw Error(ErrorCode::InvalidArgument, "n_init must be at least 1");
    if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
}

std::mt19937_64 init_rng(std::uint64_t seed, std::size_t init_index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(init_index), static_cast<std::uint32_t>(init_index >> 32)};
    return std::mt19937_64(seq);
}

std::vector<std::size_t> kmeanspp_init(std::size_t n, std::size_t k,
                                       const std::function<double(std::size_t, std::size_t)>& dissimilarity,
                                       std::mt19937_64& rng) {
    if (k < 1 || k > n) throw Error(ErrorCode::InvalidArgument, "k-means++ needs 1 <= K <= n");
    std::vector<std::size_t> chosen;
    chosen.reserve(k);
    std::vector<char> taken(n, 0);
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());

    auto take = [&](std::size_t c) {
        chosen.push_back(c);
        taken[c] = 1;
        for (std::size_t i = 0; i < n; ++i) {
            if (!taken[i]) nearest[i] = std::min(nearest[i], std::max(0.0, dissimilarity(i, c)));
        }
    };

    take(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
    while (chosen.size() < k) {
        double mass = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!taken[i]) mass += nearest[i];
        }
        if (mass > 0.0) {
            const double u = std::uniform_real_distribution<double>(0.0, mass)(rng);
            double acc = 0.0;
            std::size_t pick = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (taken[i] || nearest[i] <= 0.0) continue;
                acc += nearest[i];
                pick = i;
                if (u < acc) break;
            }
            take(pick);
        } else {
            // Every remaining entity coincides with a chosen centroid.
            std::vector<std::size_t> rest;
            for (std::size_t i = 0; i < n; ++i) {
                if (!taken[i]) rest.push_back(i);
            }
            take(rest[std::uniform_int_distribution<std::size_t>(0, rest.size() - 1)(rng)]);
        }
    }
    return chosen;
}

std::vector<std::size_t> kmeanspp_init(const RealMatrix& dissimilarity, std::size_t k, std::mt19937_64& rng) {
    return kmeanspp_init(
        dissimilarity.size(), k, [&](std::size_t i, std::size_t j) { return dissimilarity(i, j); }, rng);
}

double total_cost(const RealMatrix& owd, std::span<const int> labels, std::span<const std::size_t> centroids) {
    if (labels.size() != owd.size()) throw Error(ErrorCode::LengthMismatch, "one label per entity is required");
    double tc = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        tc += owd(i, centroids[static_cast<std::size_t>(labels[i])]);
    }
    return tc;
}

double silhouette(const RealMatrix& owd, std::span<const int> labels) {
    const std::size_t n = labels.size();
    if (n != owd.size()) throw Error(ErrorCode::LengthMismatch, "one label per entity is required");
    std::map<int, std::size_t> cluster_index;
    for (int l : labels) cluster_index.emplace(l, 0);
    if (cluster_index.size() < 2) throw Error(ErrorCode::SingleCluster, "silhouette needs at least two clusters");
    std::size_t next = 0;
    for (auto& [label, idx] : cluster_index) idx = next++;

    std::vector<std::size_t> cluster(n), sizes(cluster_index.size(), 0);
    for (std::size_t i = 0; i < n; ++i) {
        cluster[i] = cluster_index[labels[i]];
        ++sizes[cluster[i]];
    }

    double total = 0.0;
    std::vector<double> sums(sizes.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (sizes[cluster[i]] < 2) continue;
        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) sums[cluster[j]] += owd(i, j);
        }
        const double a = sums[cluster[i]] / static_cast<double>(sizes[cluster[i]] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < sizes.size(); ++c) {
            if (c != cluster[i]) b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
        }
        const double denom = std::max(a, b);
        if (denom > 0.0) total += (b - a) / denom;
    }
    return total / static_cast<double>(n);
}

namespace {

std::vector<int> centroid_slots(std::size_t n, std::span<const std::size_t> centroids) {
    std::vector<int> slot(n, -1);
    for (std::size_t k = 0; k < centroids.size(); ++k) slot[centroids[k]] = static_cast<int>(k);
    return slot;
}

std::vector<std::vector<std::size_t>> members_of(std::span<const int> labels, std::size_t k) {
    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < labels.size(); ++i) members[static_cast<std::size_t>(labels[i])].push_back(i);
    return members;
}

// Lowest final cost wins; ties keep the earliest initialization.
std::size_t best_of(const std::vector<InitTrace>& inits) {
    std::size_t best = 0;
    for (std::size_t r = 1; r < inits.size(); ++r) {
        if (inits[r].final_cost < inits[best].final_cost) best = r;
    }
    return best;
}

struct InitOutcome {
    InitTrace trace;
    std::vector<std::size_t> centroids;
    std::vector<int> labels;
};

// Centroids always belong to their own cluster, so no cluster can empty.
std::vector<int> assign_fast(const RealMatrix& owd, std::span<const std::size_t> centroids) {
    const std::size_t n = owd.size();
    const auto slot = centroid_slots(n, centroids);
    std::vector<int> labels(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (slot[i] >= 0) {
            labels[i] = slot[i];
            continue;
        }
        const double* row = owd.row(i);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < centroids.size(); ++k) {
            if (row[centroids[k]] < best) {
                best = row[centroids[k]];
                labels[i] = static_cast<int>(k);
            }
        }
    }
    return labels;
}

InitOutcome run_fast(const OWDMatrices& m, const ClusterConfig& cfg, std::size_t init_index) {
    const RealMatrix& owd = m.owd;
    auto rng = init_rng(cfg.seed, init_index);
    InitOutcome out;
    out.centroids = kmeanspp_init(owd, cfg.k, rng);
    out.trace.initial_centroids = out.centroids;

    double current = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> next(cfg.k);
    while (out.trace.iterations < cfg.it_max) {
        ++out.trace.iterations;
        const auto labels = assign_fast(owd, out.centroids);
        const auto members = members_of(labels, cfg.k);

        double proposed = 0.0;
        for (std::size_t k = 0; k < cfg.k; ++k) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t candidate : members[k]) {
                const double* row = owd.row(candidate);
                double sum = 0.0;
                for (std::size_t other : members[k]) sum += row[other];
                if (sum < best) {
                    best = sum;
                    next[k] = candidate;
                }
            }
            proposed += best;
        }

        if (current - proposed > cfg.epsilon) {
            out.centroids = next;
            current = proposed;
            out.trace.costs.push_back(proposed);
        } else {
            out.trace.converged = true;
            break;
        }
    }
    out.labels = assign_fast(owd, out.centroids);
    out.trace.final_cost = total_cost(owd, out.labels, out.centroids);
    return out;
}

// On-demand evaluation: every dissimilarity is minimised over the warp set when needed.
struct OnDemand {
    const FoldChangeSet& set;
    const WarpSpec& spec;

    OptimalWarp operator()(std::size_t i, std::size_t j) const { return optimal_warp(set, i, j, spec); }
};

std::vector<int> assign_classic(const OnDemand& align, std::size_t n, std::span<const std::size_t> centroids) {
    const auto slot = centroid_slots(n, centroids);
    std::vector<int> labels(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (slot[i] >= 0) {
            labels[i] = slot[i];
            continue;
        }
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < centroids.size(); ++k) {
            const double d = align(i, centroids[k]).value;
            if (d < best) {
                best = d;
                labels[i] = static_cast<int>(k);
            }
        }
    }
    return labels;
}

InitOutcome run_classic(const OnDemand& align, std::size_t n, const ClusterConfig& cfg, std::size_t init_index) {
    auto rng = init_rng(cfg.seed, init_index);
    InitOutcome out;
    out.centroids = kmeanspp_init(
        n, cfg.k, [&](std::size_t i, std::size_t j) { return align(i, j).value; }, rng);
    out.trace.initial_centroids = out.centroids;

    double current = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> next(cfg.k);
    while (out.trace.iterations < cfg.it_max) {
        ++out.trace.iterations;
        const auto labels = assign_classic(align, n, out.centroids);
        const auto members = members_of(labels, cfg.k);

        double proposed = 0.0;
        for (std::size_t k = 0; k < cfg.k; ++k) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t candidate : members[k]) {
                double sum = 0.0;
                for (std::size_t other : members[k]) sum += align(other, candidate).value;
                if (sum < best) {
                    best = sum;
                    next[k] = candidate;
                }
            }
            proposed += best;
        }

        if (current - proposed > cfg.epsilon) {
            out.centroids = next;
            current = proposed;
            out.trace.costs.push_back(proposed);
        } else {
            out.trace.converged = true;
            break;
        }
    }
    out.labels = assign_classic(align, n, out.centroids);
    double tc = 0.0;
    for (std::size_t i = 0; i < n; ++i) tc += align(i, out.centroids[static_cast<std::size_t>(out.labels[i])]).value;
    out.trace.final_cost = tc;
    return out;
}

template <typename RunInit>
ClusteringResult run_all(const ClusterConfig& cfg, RunInit&& run_init) {
    std::vector<InitOutcome> outcomes(static_cast<std::size_t>(cfg.n_init));
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < cfg.n_init; ++r) {
        outcomes[static_cast<std::size_t>(r)] = run_init(static_cast<std::size_t>(r));
    }
    ClusteringResult result;
    for (auto& o : outcomes) result.inits.push_back(o.trace);
    result.best_init = best_of(result.inits);
    InitOutcome& best = outcomes[result.best_init];
    result.centroids = std::move(best.centroids);
    result.labels = std::move(best.labels);
    result.total_cost = best.trace.final_cost;
    return result;
}

}  // namespace

ClusteringResult cluster_fast(const OWDMatrices& matrices, const ClusterConfig& cfg) {
    const std::size_t n = matrices.owd.size();
    if (matrices.ow.size() != n) throw Error(ErrorCode::LengthMismatch, "OWD and OW sizes differ");
    cfg.validate(n);
    ClusteringResult result = run_all(cfg, [&](std::size_t r) { return run_fast(matrices, cfg, r); });
    result.warps.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        result.warps[i] = matrices.ow(i, result.centroids[static_cast<std::size_t>(result.labels[i])]);
    }
    return result;
}

ClusteringResult cluster_classic(const FoldChangeSet& set, const WarpSpec& spec, const ClusterConfig& cfg) {
    const std::size_t n = set.size();
    spec.validate(set.n_times());
    cfg.validate(n);
    const OnDemand align{set, spec};
    ClusteringResult result = run_all(cfg, [&](std::size_t r) { return run_classic(align, n, cfg, r); });
    result.warps.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        result.warps[i] = align(i, result.centroids[static_cast<std::size_t>(result.labels[i])]).step;
    }
    return result;
}

}  // namespace fcalign
