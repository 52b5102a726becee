#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fcalign/clustering.hpp"
#include "fcalign/data_model.hpp"

namespace fcalign::io {

namespace fs = std::filesystem;

// Long-format replicate table with header entity,condition,replicate,time,value.
// Entities keep their order of first appearance, times are sorted, and
// replicate labels are shared across entities (numeric order when every label
// is an integer, lexicographic otherwise). Cells absent from the file stay NaN.
ReplicateDataset ingest_csv(const fs::path& path, bool log_transform = false);

// fold_changes.csv: entity,time,mean,var
// cross_cov.csv:    entity_a,entity_b,time,cov   (nonzero entries, a before b)
void write_fold_changes(const fs::path& dir, const FoldChangeSet& set);
// The cross-covariance file is optional; when missing all pairs are independent.
FoldChangeSet read_fold_changes(const fs::path& dir);

// Tab-separated square matrix with entity identifiers as header row and column.
void write_matrix(const fs::path& path, const std::vector<std::string>& ids, const RealMatrix& m);
void write_matrix(const fs::path& path, const std::vector<std::string>& ids, const IntMatrix& m);

struct NamedMatrix {
    std::vector<std::string> ids;
    RealMatrix values;
};
NamedMatrix read_matrix(const fs::path& path);

// truth.csv: entity,label[,shift]
void write_truth(const fs::path& path, const std::vector<std::string>& ids, const std::vector<int>& labels,
                 const std::vector<double>& shifts);
// Labels reordered to match ids. Throws SchemaError for an entity without a label.
std::vector<int> read_truth(const fs::path& path, const std::vector<std::string>& ids);

// clusters.csv: entity,label,warp,is_centroid with 1-based labels.
void write_clusters(const fs::path& path, const std::vector<std::string>& ids, const ClusteringResult& result);

struct ClusterAssignment {
    std::vector<std::string> ids;
    std::vector<int> labels;
    std::vector<int> warps;
};
ClusterAssignment read_clusters(const fs::path& path);

// One tidy CSV per cluster under dir: cluster_<label>.csv with columns
// entity,time,value,aligned. Unaligned rows use the entity's own times; aligned
// rows place position l of an entity at the centroid's time index l + warp.
void write_plotdata(const fs::path& dir, const FoldChangeSet& set, const ClusteringResult& result);

// 17 significant digits, used by every writer.
std::string format_double(double x);

// Writes the whole content at once via a temporary file and rename.
void write_text(const fs::path& path, const std::string& content);

}  // namespace fcalign::io
