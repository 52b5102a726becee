#include "fcalign/data_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace fcalign {

TimeVector::TimeVector(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "a time vector needs at least two points");
    }
    for (std::size_t l = 0; l < points_.size(); ++l) {
        if (!std::isfinite(points_[l])) {
            throw Error(ErrorCode::InvalidArgument, "time points must be finite");
        }
        if (l > 0 && !(points_[l - 1] < points_[l])) {
            throw Error(ErrorCode::InvalidArgument, "time points must be strictly increasing");
        }
    }
}

ReplicateDataset::ReplicateDataset(std::vector<std::string> entities, TimeVector time, std::size_t n_replicates)
    : entities_(std::move(entities)), time_(std::move(time)), n_replicates_(n_replicates) {
    if (n_replicates_ < 2) {
        throw Error(ErrorCode::InvalidArgument, "at least two replicates are required");
    }
    values_.assign(entities_.size() * 2 * n_replicates_ * time_.size(), std::numeric_limits<double>::quiet_NaN());
}

bool ReplicateDataset::entity_complete(std::size_t entity) const noexcept {
    const std::size_t block = 2 * n_replicates_ * time_.size();
    const auto first = values_.begin() + static_cast<std::ptrdiff_t>(entity * block);
    return std::all_of(first, first + static_cast<std::ptrdiff_t>(block), [](double v) { return std::isfinite(v); });
}

ReplicateDataset ReplicateDataset::subset(std::span<const std::size_t> keep) const {
    std::vector<std::string> names;
    names.reserve(keep.size());
    for (std::size_t i : keep) names.push_back(entities_[i]);
    ReplicateDataset out(std::move(names), time_, n_replicates_);
    const std::size_t block = 2 * n_replicates_ * time_.size();
    for (std::size_t k = 0; k < keep.size(); ++k) {
        std::copy_n(values_.begin() + static_cast<std::ptrdiff_t>(keep[k] * block), block,
                    out.values_.begin() + static_cast<std::ptrdiff_t>(k * block));
    }
    return out;
}

FoldChangeSet::FoldChangeSet(TimeVector time, std::vector<std::string> ids, std::vector<FoldChange> items)
    : time_(std::move(time)), ids_(std::move(ids)), items_(std::move(items)) {
    if (ids_.size() != items_.size()) {
        throw Error(ErrorCode::LengthMismatch, "one identifier per fold change is required");
    }
    const std::size_t n_pts = time_.size();
    for (const auto& fc : items_) {
        if (fc.mean.size() != n_pts || fc.var.size() != n_pts) {
            throw Error(ErrorCode::LengthMismatch, "fold change length differs from the time vector");
        }
        for (double v : fc.var) {
            if (!(v >= 0.0)) throw Error(ErrorCode::InvalidArgument, "variances must be nonnegative");
        }
    }
    const std::size_t n = items_.size();
    cross_.assign(n < 2 ? 0 : n * (n - 1) / 2 * n_pts, 0.0);
}

void FoldChangeSet::set_rho(std::size_t i, std::size_t j, std::size_t t, double value) {
    if (i == j) throw Error(ErrorCode::InvalidArgument, "self cross-covariance is the variance");
    cross_[pair_offset(i, j) + t] = value;
}

double FoldChangeSet::min_block_eigenvalue() const {
    double lowest = std::numeric_limits<double>::infinity();
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (std::size_t t = 0; t < n_times(); ++t) {
                const double a = items_[i].var[t];
                const double d = items_[j].var[t];
                const double b = rho(i, j, t);
                const double half_trace = 0.5 * (a + d);
                const double radius = std::hypot(0.5 * (a - d), b);
                lowest = std::min(lowest, half_trace - radius);
            }
        }
    }
    return lowest;
}

FoldChangeSet FoldChangeSet::subset(std::span<const std::size_t> keep) const {
    std::vector<std::string> ids;
    std::vector<FoldChange> items;
    for (std::size_t i : keep) {
        ids.push_back(ids_[i]);
        items.push_back(items_[i]);
    }
    FoldChangeSet out(time_, std::move(ids), std::move(items));
    for (std::size_t a = 0; a < keep.size(); ++a) {
        for (std::size_t b = a + 1; b < keep.size(); ++b) {
            for (std::size_t t = 0; t < n_times(); ++t) out.set_rho(a, b, t, rho(keep[a], keep[b], t));
        }
    }
    return out;
}

ValidationReport validate_dataset(const ReplicateDataset& raw) {
    const std::size_t n_pts = raw.n_times();
    const std::size_t nr = raw.n_replicates();

    // A time column with no observation at all means the entity was sampled on
    // a different grid; partially observed columns are missing replicates.
    for (std::size_t i = 0; i < raw.n_entities(); ++i) {
        for (std::size_t t = 0; t < n_pts; ++t) {
            bool any = false;
            for (int k = 0; k < 2 && !any; ++k) {
                for (std::size_t j = 0; j < nr && !any; ++j) any = std::isfinite(raw.at(i, k, j, t));
            }
            if (!any) {
                throw Error(ErrorCode::InconsistentTimeGrid,
                            "entity '" + raw.entities()[i] + "' has no observation at time " +
                                std::to_string(raw.time()[t]));
            }
        }
    }

    std::vector<std::size_t> keep;
    ValidationReport report;
    for (std::size_t i = 0; i < raw.n_entities(); ++i) {
        if (raw.entity_complete(i)) {
            keep.push_back(i);
        } else {
            report.dropped.push_back(raw.entities()[i]);
        }
    }
    if (keep.empty()) {
        throw Error(ErrorCode::EmptyAfterFiltering, "no entity has a complete replicate block");
    }
    report.dataset = raw.subset(keep);
    return report;
}

}  // namespace fcalign
