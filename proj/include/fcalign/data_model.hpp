#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fcalign/common.hpp"

namespace fcalign {

// Strictly increasing sampling times shared by every entity, at least two points.
class TimeVector {
public:
    TimeVector() = default;
    explicit TimeVector(std::vector<double> points);

    std::size_t size() const noexcept { return points_.size(); }
    double operator[](std::size_t l) const noexcept { return points_[l]; }
    const std::vector<double>& points() const noexcept { return points_; }

    bool operator==(const TimeVector&) const = default;

private:
    std::vector<double> points_;
};

enum Condition : int { kControl = 0, kCase = 1 };

// Raw responses Y(entity, condition, replicate, time). Missing cells are NaN
// until validate_dataset() removes the affected entities.
class ReplicateDataset {
public:
    ReplicateDataset() = default;
    ReplicateDataset(std::vector<std::string> entities, TimeVector time, std::size_t n_replicates);

    std::size_t n_entities() const noexcept { return entities_.size(); }
    std::size_t n_replicates() const noexcept { return n_replicates_; }
    std::size_t n_times() const noexcept { return time_.size(); }
    const std::vector<std::string>& entities() const noexcept { return entities_; }
    const TimeVector& time() const noexcept { return time_; }

    double& at(std::size_t entity, int condition, std::size_t replicate, std::size_t t) noexcept {
        return values_[index(entity, condition, replicate, t)];
    }
    double at(std::size_t entity, int condition, std::size_t replicate, std::size_t t) const noexcept {
        return values_[index(entity, condition, replicate, t)];
    }

    // True when every replicate of every (condition, time) cell is finite.
    bool entity_complete(std::size_t entity) const noexcept;

    // Copy restricted to the given entities, in the given order.
    ReplicateDataset subset(std::span<const std::size_t> keep) const;

private:
    std::size_t index(std::size_t entity, int condition, std::size_t replicate, std::size_t t) const noexcept {
        return ((entity * 2 + static_cast<std::size_t>(condition)) * n_replicates_ + replicate) * time_.size() + t;
    }

    std::vector<std::string> entities_;
    TimeVector time_;
    std::size_t n_replicates_ = 0;
    std::vector<double> values_;
};

// Marginal Gaussian estimator of one entity's fold change: mean vector and the
// diagonal of its covariance.
struct FoldChange {
    std::vector<double> mean;
    std::vector<double> var;
};

// Fold-change estimators of all entities together with the per-time
// cross-covariances of every pair. Cross-covariances are stored for i < j only;
// rho(i, i, t) returns the variance.
class FoldChangeSet {
public:
    FoldChangeSet() = default;
    FoldChangeSet(TimeVector time, std::vector<std::string> ids, std::vector<FoldChange> items);

    std::size_t size() const noexcept { return items_.size(); }
    std::size_t n_times() const noexcept { return time_.size(); }
    const TimeVector& time() const noexcept { return time_; }
    const std::vector<std::string>& ids() const noexcept { return ids_; }
    const FoldChange& item(std::size_t i) const noexcept { return items_[i]; }
    const std::vector<FoldChange>& items() const noexcept { return items_; }

    std::span<const double> mean(std::size_t i) const noexcept { return items_[i].mean; }
    std::span<const double> var(std::size_t i) const noexcept { return items_[i].var; }

    double rho(std::size_t i, std::size_t j, std::size_t t) const noexcept {
        if (i == j) return items_[i].var[t];
        return cross_[pair_offset(i, j) + t];
    }
    void set_rho(std::size_t i, std::size_t j, std::size_t t, double value);

    // Packed storage of the i < j cross-covariances, p values per pair.
    const std::vector<double>& cross_data() const noexcept { return cross_; }

    // Smallest eigenvalue of the per-time block [[var_i, rho], [rho, var_j]],
    // minimised over all pairs and times.
    double min_block_eigenvalue() const;

    FoldChangeSet subset(std::span<const std::size_t> keep) const;

private:
    std::size_t pair_offset(std::size_t i, std::size_t j) const noexcept {
        if (i > j) std::swap(i, j);
        const std::size_t n = items_.size();
        return (i * n - i * (i + 1) / 2 + (j - i - 1)) * time_.size();
    }

    TimeVector time_;
    std::vector<std::string> ids_;
    std::vector<FoldChange> items_;
    std::vector<double> cross_;
};

struct ValidationReport {
    ReplicateDataset dataset;
    std::vector<std::string> dropped;
};

// Drops entities with any missing replicate cell. Throws InconsistentTimeGrid
// when an entity has no observation at all at a time point the others share,
// and EmptyAfterFiltering when nothing survives.
ValidationReport validate_dataset(const ReplicateDataset& raw);

}  // namespace fcalign
