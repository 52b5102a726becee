#include "fcalign/warping.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace fcalign {

void WarpSpec::validate(std::size_t n_times) const {
    if (s_max < 0) throw Error(ErrorCode::InvalidArgument, "s_max must be nonnegative");
    if (static_cast<std::size_t>(s_max) + 2 > n_times) {
        throw Error(ErrorCode::InvalidArgument, "s_max = " + std::to_string(s_max) +
                                                    " leaves fewer than two overlapping time points (n_pts = " +
                                                    std::to_string(n_times) + ")");
    }
    if (!(lambda >= 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be nonnegative");
}

namespace {

void check_step(std::size_t n_pts, int step) {
    if (static_cast<std::size_t>(std::abs(step)) >= n_pts) {
        throw Error(ErrorCode::StepTooLarge,
                    "warp step " + std::to_string(step) + " needs more than " + std::to_string(n_pts) + " time points");
    }
}

// Index range [begin, end) of the first fold change that has a partner at l + step.
struct Overlap {
    std::size_t begin;
    std::size_t end;
};

Overlap overlap(std::size_t n_pts, int step) {
    if (step >= 0) return {0, n_pts - static_cast<std::size_t>(step)};
    return {static_cast<std::size_t>(-step), n_pts};
}

std::size_t partner(std::size_t l, int step) {
    return static_cast<std::size_t>(static_cast<std::ptrdiff_t>(l) + step);
}

std::size_t opposite_signs(const FoldChangeSet& set, std::size_t i, std::size_t j, int step) {
    const auto mi = set.mean(i), mj = set.mean(j);
    const auto [begin, end] = overlap(set.n_times(), step);
    std::size_t count = 0;
    for (std::size_t l = begin; l < end; ++l) {
        if (mi[l] * mj[partner(l, step)] < 0.0) ++count;
    }
    return count;
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> warp_time(const TimeVector& t, int step) {
    const std::size_t n_pts = t.size();
    check_step(n_pts, step);
    const auto& pts = t.points();
    const auto keep = static_cast<std::ptrdiff_t>(n_pts - static_cast<std::size_t>(std::abs(step)));
    std::vector<double> head(pts.begin(), pts.begin() + keep);
    std::vector<double> tail(pts.end() - keep, pts.end());
    if (step >= 0) return {std::move(head), std::move(tail)};
    return {std::move(tail), std::move(head)};
}

double diss(const FoldChangeSet& set, std::size_t i, std::size_t j, int step, const WarpSpec& spec) {
    const std::size_t n_pts = set.n_times();
    check_step(n_pts, step);
    const auto mi = set.mean(i), mj = set.mean(j);
    const auto vi = set.var(i), vj = set.var(j);
    const auto [begin, end] = overlap(n_pts, step);

    double sq = 0.0, var_i = 0.0, var_j = 0.0;
    for (std::size_t l = begin; l < end; ++l) {
        const std::size_t m = partner(l, step);
        const double d = mi[l] - mj[m];
        sq += d * d;
        var_i += vi[l];
        var_j += vj[m];
    }
    const auto shift = static_cast<std::size_t>(std::abs(step));
    double cross = 0.0;
    for (std::size_t l = shift; l + shift < n_pts; ++l) cross += set.rho(i, j, l);

    // var_i + var_j is commutative in IEEE arithmetic, which keeps
    // diss(i, j, step) and diss(j, i, -step) bit-identical.
    double value = sq + (var_i + var_j) - 2.0 * cross;
    const double length = static_cast<double>(n_pts - shift);
    if (spec.normalize_by_length) value /= length;
    if (spec.lambda > 0.0) value += spec.lambda * (static_cast<double>(opposite_signs(set, i, j, step)) / length);
    return value;
}

double sign_penalty(const FoldChangeSet& set, std::size_t i, std::size_t j, int step) {
    const std::size_t n_pts = set.n_times();
    check_step(n_pts, step);
    return static_cast<double>(opposite_signs(set, i, j, step)) /
           static_cast<double>(n_pts - static_cast<std::size_t>(std::abs(step)));
}

OptimalWarp optimal_warp(const FoldChangeSet& set, std::size_t i, std::size_t j, const WarpSpec& spec) {
    if (i == j) return {0.0, 0};
    OptimalWarp best{diss(set, i, j, 0, spec), 0};
    const int preferred = i < j ? 1 : -1;
    for (int m = 1; m <= spec.s_max; ++m) {
        for (int step : {preferred * m, -preferred * m}) {
            const double d = diss(set, i, j, step, spec);
            if (d < best.value) best = {d, step};
        }
    }
    return best;
}

OWDMatrices build_owd_ow(const FoldChangeSet& set, const WarpSpec& spec) {
    spec.validate(set.n_times());
    const std::size_t n = set.size();
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "at least two fold changes are required");
    OWDMatrices out{RealMatrix(n, 0.0), IntMatrix(n, 0)};
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(n); ++si) {
        const auto i = static_cast<std::size_t>(si);
        for (std::size_t j = i + 1; j < n; ++j) {
            const OptimalWarp w = optimal_warp(set, i, j, spec);
            out.owd(i, j) = w.value;
            out.owd(j, i) = w.value;
            out.ow(i, j) = w.step;
            out.ow(j, i) = -w.step;
        }
    }
    return out;
}

OWDMatrices unwarped(RealMatrix dissimilarity) {
    const std::size_t n = dissimilarity.size();
    return {std::move(dissimilarity), IntMatrix(n, 0)};
}

}  // namespace fcalign
