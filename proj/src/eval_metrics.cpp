#include "fcalign/eval_metrics.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "fcalign/common.hpp"

namespace fcalign {

namespace {

struct Contingency {
    std::vector<std::vector<std::int64_t>> table;  // [truth class][pred cluster]
    std::vector<std::int64_t> rows, cols;
    std::int64_t n = 0;
};

std::vector<std::size_t> dense(std::span<const int> labels, std::size_t& count) {
    std::map<int, std::size_t> ids;
    for (int l : labels) ids.emplace(l, 0);
    std::size_t next = 0;
    for (auto& [label, id] : ids) id = next++;
    count = next;
    std::vector<std::size_t> out;
    out.reserve(labels.size());
    for (int l : labels) out.push_back(ids[l]);
    return out;
}

Contingency contingency(std::span<const int> truth, std::span<const int> pred) {
    if (truth.size() != pred.size()) throw Error(ErrorCode::LengthMismatch, "label vectors differ in length");
    std::size_t n_classes = 0, n_clusters = 0;
    const auto t = dense(truth, n_classes);
    const auto p = dense(pred, n_clusters);
    Contingency c;
    c.table.assign(n_classes, std::vector<std::int64_t>(n_clusters, 0));
    c.rows.assign(n_classes, 0);
    c.cols.assign(n_clusters, 0);
    for (std::size_t i = 0; i < t.size(); ++i) {
        ++c.table[t[i]][p[i]];
        ++c.rows[t[i]];
        ++c.cols[p[i]];
    }
    c.n = static_cast<std::int64_t>(t.size());
    return c;
}

std::int64_t pairs(std::int64_t m) { return m * (m - 1) / 2; }

// Entropy of a count vector, natural log.
double entropy(const std::vector<std::int64_t>& counts, std::int64_t n) {
    double h = 0.0;
    for (std::int64_t c : counts) {
        if (c > 0) {
            const double q = static_cast<double>(c) / static_cast<double>(n);
            h -= q * std::log(q);
        }
    }
    return h;
}

}  // namespace

double ari(std::span<const int> truth, std::span<const int> pred) {
    const Contingency c = contingency(truth, pred);
    std::int64_t both = 0, sum_rows = 0, sum_cols = 0;
    for (const auto& row : c.table) {
        for (std::int64_t v : row) both += pairs(v);
    }
    for (std::int64_t r : c.rows) sum_rows += pairs(r);
    for (std::int64_t k : c.cols) sum_cols += pairs(k);
    const std::int64_t total = pairs(c.n);

    // (index - expected) / (max - expected), scaled by 2 * total to stay integral.
    const std::int64_t numerator = 2 * (total * both - sum_rows * sum_cols);
    const std::int64_t denominator = total * (sum_rows + sum_cols) - 2 * sum_rows * sum_cols;
    if (denominator == 0) {
        // Both partitions are trivial (all-in-one or all-singletons).
        return (sum_rows == sum_cols && both == sum_rows) ? 1.0 : 0.0;
    }
    return static_cast<double>(numerator) / static_cast<double>(denominator);
}

double v_measure(std::span<const int> truth, std::span<const int> pred) {
    const Contingency c = contingency(truth, pred);
    if (c.n == 0) return 1.0;
    const double h_classes = entropy(c.rows, c.n);
    const double h_clusters = entropy(c.cols, c.n);

    // Conditional entropies H(classes | clusters) and H(clusters | classes).
    double h_c_given_k = 0.0, h_k_given_c = 0.0;
    const auto n = static_cast<double>(c.n);
    for (std::size_t a = 0; a < c.table.size(); ++a) {
        for (std::size_t b = 0; b < c.cols.size(); ++b) {
            const std::int64_t v = c.table[a][b];
            if (v == 0) continue;
            const double joint = static_cast<double>(v) / n;
            h_c_given_k -= joint * std::log(static_cast<double>(v) / static_cast<double>(c.cols[b]));
            h_k_given_c -= joint * std::log(static_cast<double>(v) / static_cast<double>(c.rows[a]));
        }
    }
    const double homogeneity = h_classes > 0.0 ? 1.0 - h_c_given_k / h_classes : 1.0;
    const double completeness = h_clusters > 0.0 ? 1.0 - h_k_given_c / h_clusters : 1.0;
    if (homogeneity + completeness <= 0.0) return 0.0;
    return 2.0 * homogeneity * completeness / (homogeneity + completeness);
}

}  // namespace fcalign
