#include "fcalign/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "fcalign/common.hpp"

namespace fcalign::io {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    s = s.substr(b, e - b);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return std::string(s);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(trim(std::string_view(line).substr(start, pos == std::string::npos ? pos : pos - start)));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string where(const fs::path& path, std::size_t line) {
    return path.string() + ":" + std::to_string(line);
}

double parse_double(const std::string& s, const fs::path& path, std::size_t line) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (s.empty() || ec != std::errc() || ptr != last) {
        // from_chars rejects "inf"/"nan" spellings written by other tools.
        if (s == "nan" || s == "NaN" || s == "NA" || s == "") return std::numeric_limits<double>::quiet_NaN();
        throw Error(ErrorCode::ParseError, where(path, line) + ": not a number: '" + s + "'");
    }
    return v;
}

long long parse_int(const std::string& s, const fs::path& path, std::size_t line) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw Error(ErrorCode::ParseError, where(path, line) + ": not an integer: '" + s + "'");
    }
    return v;
}

std::ifstream open_in(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    return in;
}

// Reads the header and checks it matches `expected` (optionally followed by `optional_tail`).
std::vector<std::string> read_header(std::istream& in, const fs::path& path, const std::vector<std::string>& expected,
                                     const std::vector<std::string>& optional_tail = {}) {
    std::string line;
    if (!std::getline(in, line) || trim(line).empty()) {
        throw Error(ErrorCode::SchemaError, path.string() + ": empty file, expected header");
    }
    auto cols = split(line, ',');
    std::vector<std::string> full = expected;
    full.insert(full.end(), optional_tail.begin(), optional_tail.end());
    const bool ok = cols.size() >= expected.size() && cols.size() <= full.size() &&
                    std::equal(cols.begin(), cols.end(), full.begin());
    if (!ok) {
        std::string want;
        for (const auto& c : expected) want += (want.empty() ? "" : ",") + c;
        throw Error(ErrorCode::SchemaError, path.string() + ": header must be '" + want + "'");
    }
    return cols;
}

template <typename Fn>
void for_each_row(std::istream& in, const fs::path& path, std::size_t n_cols, Fn&& fn) {
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split(line, ',');
        if (fields.size() != n_cols) {
            throw Error(ErrorCode::ParseError, where(path, line_no) + ": expected " + std::to_string(n_cols) +
                                                   " fields, found " + std::to_string(fields.size()));
        }
        fn(fields, line_no);
    }
}

template <typename T>
void write_matrix_impl(const fs::path& path, const std::vector<std::string>& ids, const SquareMatrix<T>& m) {
    if (ids.size() != m.size()) throw Error(ErrorCode::LengthMismatch, "matrix and identifiers differ in size");
    std::string out = "entity";
    for (const auto& id : ids) out += '\t' + id;
    out += '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
        out += ids[i];
        for (std::size_t j = 0; j < m.size(); ++j) {
            out += '\t';
            if constexpr (std::is_floating_point_v<T>) {
                out += format_double(m(i, j));
            } else {
                out += std::to_string(m(i, j));
            }
        }
        out += '\n';
    }
    write_text(path, out);
}

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_text(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
        out << content;
        if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot rename into " + path.string() + ": " + ec.message());
}

ReplicateDataset ingest_csv(const fs::path& path, bool log_transform) {
    auto in = open_in(path);
    read_header(in, path, {"entity", "condition", "replicate", "time", "value"});

    struct Record {
        std::size_t entity;
        int condition;
        std::string replicate;
        double time;
        double value;
    };
    std::vector<Record> records;
    std::vector<std::string> entities;
    std::unordered_map<std::string, std::size_t> entity_index;
    std::set<double> times;
    std::set<std::string> replicate_labels;
    std::map<std::tuple<std::size_t, int, std::string, double>, std::size_t> seen;

    for_each_row(in, path, 5, [&](const std::vector<std::string>& f, std::size_t line) {
        if (f[0].empty()) throw Error(ErrorCode::ParseError, where(path, line) + ": empty entity identifier");
        const long long cond = parse_int(f[1], path, line);
        if (cond != 0 && cond != 1) {
            throw Error(ErrorCode::ParseError, where(path, line) + ": condition must be 0 or 1, got " + f[1]);
        }
        const double time = parse_double(f[3], path, line);
        if (!std::isfinite(time)) throw Error(ErrorCode::ParseError, where(path, line) + ": time must be finite");
        double value = parse_double(f[4], path, line);
        if (log_transform && !std::isnan(value)) {
            if (!(value > 0.0)) {
                throw Error(ErrorCode::NonPositiveValue,
                            where(path, line) + ": log-transform needs positive values, got " + f[4]);
            }
            value = std::log(value);
        }
        auto [it, fresh] = entity_index.emplace(f[0], entities.size());
        if (fresh) entities.push_back(f[0]);
        const auto key = std::make_tuple(it->second, static_cast<int>(cond), f[2], time);
        if (!seen.emplace(key, line).second) {
            throw Error(ErrorCode::ParseError, where(path, line) + ": duplicate key (entity=" + f[0] +
                                                   ", condition=" + f[1] + ", replicate=" + f[2] +
                                                   ", time=" + f[3] + "), first seen on line " +
                                                   std::to_string(seen[key]));
        }
        times.insert(time);
        replicate_labels.insert(f[2]);
        records.push_back({it->second, static_cast<int>(cond), f[2], time, value});
    });
    if (records.empty()) throw Error(ErrorCode::SchemaError, path.string() + ": no data rows");
    if (times.size() < 2) throw Error(ErrorCode::SchemaError, path.string() + ": need at least two time points");

    std::vector<std::string> labels(replicate_labels.begin(), replicate_labels.end());
    const bool numeric = std::all_of(labels.begin(), labels.end(), [](const std::string& s) {
        long long v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        return ec == std::errc() && ptr == s.data() + s.size();
    });
    if (numeric) {
        std::sort(labels.begin(), labels.end(),
                  [](const std::string& a, const std::string& b) { return std::stoll(a) < std::stoll(b); });
    }
    std::unordered_map<std::string, std::size_t> replicate_index;
    for (std::size_t r = 0; r < labels.size(); ++r) replicate_index[labels[r]] = r;

    const std::vector<double> grid(times.begin(), times.end());
    ReplicateDataset data(entities, TimeVector(grid), labels.size());
    for (const auto& r : records) {
        const auto t = static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), r.time) - grid.begin());
        data.at(r.entity, r.condition, replicate_index[r.replicate], t) = r.value;
    }
    return data;
}

void write_fold_changes(const fs::path& dir, const FoldChangeSet& set) {
    std::string fc = "entity,time,mean,var\n";
    for (std::size_t i = 0; i < set.size(); ++i) {
        for (std::size_t t = 0; t < set.n_times(); ++t) {
            fc += set.ids()[i] + ',' + format_double(set.time()[t]) + ',' + format_double(set.mean(i)[t]) + ',' +
                  format_double(set.var(i)[t]) + '\n';
        }
    }
    std::string cross = "entity_a,entity_b,time,cov\n";
    for (std::size_t i = 0; i < set.size(); ++i) {
        for (std::size_t j = i + 1; j < set.size(); ++j) {
            for (std::size_t t = 0; t < set.n_times(); ++t) {
                const double r = set.rho(i, j, t);
                if (r == 0.0) continue;
                cross += set.ids()[i] + ',' + set.ids()[j] + ',' + format_double(set.time()[t]) + ',' +
                         format_double(r) + '\n';
            }
        }
    }
    write_text(dir / "fold_changes.csv", fc);
    write_text(dir / "cross_cov.csv", cross);
}

FoldChangeSet read_fold_changes(const fs::path& dir) {
    const fs::path fc_path = dir / "fold_changes.csv";
    auto in = open_in(fc_path);
    read_header(in, fc_path, {"entity", "time", "mean", "var"});

    std::vector<std::string> ids;
    std::unordered_map<std::string, std::size_t> index;
    std::vector<std::vector<std::tuple<double, double, double>>> rows;
    for_each_row(in, fc_path, 4, [&](const std::vector<std::string>& f, std::size_t line) {
        auto [it, fresh] = index.emplace(f[0], ids.size());
        if (fresh) {
            ids.push_back(f[0]);
            rows.emplace_back();
        }
        rows[it->second].emplace_back(parse_double(f[1], fc_path, line), parse_double(f[2], fc_path, line),
                                      parse_double(f[3], fc_path, line));
    });
    if (ids.empty()) throw Error(ErrorCode::SchemaError, fc_path.string() + ": no data rows");

    std::vector<double> grid;
    for (const auto& [t, m, v] : rows[0]) grid.push_back(t);
    std::sort(grid.begin(), grid.end());
    std::vector<FoldChange> items(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        auto& r = rows[i];
        std::sort(r.begin(), r.end());
        if (r.size() != grid.size()) {
            throw Error(ErrorCode::InconsistentTimeGrid, "entity " + ids[i] + " has " + std::to_string(r.size()) +
                                                             " time points, expected " + std::to_string(grid.size()));
        }
        for (std::size_t t = 0; t < r.size(); ++t) {
            const auto [time, mean, var] = r[t];
            if (time != grid[t]) throw Error(ErrorCode::InconsistentTimeGrid, "entity " + ids[i] + " uses another time grid");
            items[i].mean.push_back(mean);
            items[i].var.push_back(var);
        }
    }
    FoldChangeSet set(TimeVector(grid), ids, std::move(items));

    const fs::path cross_path = dir / "cross_cov.csv";
    if (!fs::exists(cross_path)) return set;
    auto cin = open_in(cross_path);
    read_header(cin, cross_path, {"entity_a", "entity_b", "time", "cov"});
    for_each_row(cin, cross_path, 4, [&](const std::vector<std::string>& f, std::size_t line) {
        const auto a = index.find(f[0]);
        const auto b = index.find(f[1]);
        if (a == index.end() || b == index.end()) {
            throw Error(ErrorCode::SchemaError, where(cross_path, line) + ": unknown entity");
        }
        if (a->second == b->second) throw Error(ErrorCode::SchemaError, where(cross_path, line) + ": self pair");
        const double time = parse_double(f[2], cross_path, line);
        const auto pos = std::lower_bound(grid.begin(), grid.end(), time);
        if (pos == grid.end() || *pos != time) {
            throw Error(ErrorCode::InconsistentTimeGrid, where(cross_path, line) + ": time not on the grid");
        }
        set.set_rho(a->second, b->second, static_cast<std::size_t>(pos - grid.begin()),
                    parse_double(f[3], cross_path, line));
    });
    return set;
}

void write_matrix(const fs::path& path, const std::vector<std::string>& ids, const RealMatrix& m) {
    write_matrix_impl(path, ids, m);
}

void write_matrix(const fs::path& path, const std::vector<std::string>& ids, const IntMatrix& m) {
    write_matrix_impl(path, ids, m);
}

NamedMatrix read_matrix(const fs::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || trim(line).empty()) throw Error(ErrorCode::SchemaError, path.string() + ": empty file");
    auto header = split(line, '\t');
    NamedMatrix out;
    out.ids.assign(header.begin() + 1, header.end());
    const std::size_t n = out.ids.size();
    out.values = RealMatrix(n);
    std::size_t row = 0, line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto f = split(line, '\t');
        if (f.size() != n + 1) throw Error(ErrorCode::ParseError, where(path, line_no) + ": wrong number of fields");
        if (row >= n) throw Error(ErrorCode::SchemaError, where(path, line_no) + ": more rows than columns");
        if (f[0] != out.ids[row]) throw Error(ErrorCode::SchemaError, where(path, line_no) + ": row label mismatch");
        for (std::size_t j = 0; j < n; ++j) out.values(row, j) = parse_double(f[j + 1], path, line_no);
        ++row;
    }
    if (row != n) throw Error(ErrorCode::SchemaError, path.string() + ": matrix is not square");
    return out;
}

void write_truth(const fs::path& path, const std::vector<std::string>& ids, const std::vector<int>& labels,
                 const std::vector<double>& shifts) {
    std::string out = "entity,label,shift\n";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out += ids[i] + ',' + std::to_string(labels[i]) + ',' + format_double(i < shifts.size() ? shifts[i] : 0.0) + '\n';
    }
    write_text(path, out);
}

std::vector<int> read_truth(const fs::path& path, const std::vector<std::string>& ids) {
    auto in = open_in(path);
    const auto cols = read_header(in, path, {"entity", "label"}, {"shift"});
    std::unordered_map<std::string, int> labels;
    for_each_row(in, path, cols.size(), [&](const std::vector<std::string>& f, std::size_t line) {
        if (!labels.emplace(f[0], static_cast<int>(parse_int(f[1], path, line))).second) {
            throw Error(ErrorCode::ParseError, where(path, line) + ": duplicate entity " + f[0]);
        }
    });
    std::vector<int> out;
    out.reserve(ids.size());
    for (const auto& id : ids) {
        const auto it = labels.find(id);
        if (it == labels.end()) throw Error(ErrorCode::SchemaError, path.string() + ": no label for entity " + id);
        out.push_back(it->second);
    }
    return out;
}

void write_clusters(const fs::path& path, const std::vector<std::string>& ids, const ClusteringResult& result) {
    std::vector<bool> is_centroid(ids.size(), false);
    for (auto c : result.centroids) is_centroid[c] = true;
    std::string out = "entity,label,warp,is_centroid\n";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out += ids[i] + ',' + std::to_string(result.labels[i] + 1) + ',' + std::to_string(result.warps[i]) + ',' +
               (is_centroid[i] ? "1" : "0") + '\n';
    }
    write_text(path, out);
}

ClusterAssignment read_clusters(const fs::path& path) {
    auto in = open_in(path);
    read_header(in, path, {"entity", "label", "warp", "is_centroid"});
    ClusterAssignment out;
    for_each_row(in, path, 4, [&](const std::vector<std::string>& f, std::size_t line) {
        out.ids.push_back(f[0]);
        out.labels.push_back(static_cast<int>(parse_int(f[1], path, line)));
        out.warps.push_back(static_cast<int>(parse_int(f[2], path, line)));
    });
    if (out.ids.empty()) throw Error(ErrorCode::SchemaError, path.string() + ": no data rows");
    return out;
}

void write_plotdata(const fs::path& dir, const FoldChangeSet& set, const ClusteringResult& result) {
    const std::size_t n_pts = set.n_times();
    for (std::size_t c = 0; c < result.centroids.size(); ++c) {
        std::string out = "entity,time,value,aligned\n";
        for (std::size_t i = 0; i < set.size(); ++i) {
            if (result.labels[i] != static_cast<int>(c)) continue;
            const auto mean = set.mean(i);
            for (std::size_t l = 0; l < n_pts; ++l) {
                out += set.ids()[i] + ',' + format_double(set.time()[l]) + ',' + format_double(mean[l]) + ",0\n";
            }
            const auto w = static_cast<std::ptrdiff_t>(result.warps[i]);
            for (std::size_t l = 0; l < n_pts; ++l) {
                const std::ptrdiff_t target = static_cast<std::ptrdiff_t>(l) + w;
                if (target < 0 || target >= static_cast<std::ptrdiff_t>(n_pts)) continue;
                out += set.ids()[i] + ',' + format_double(set.time()[static_cast<std::size_t>(target)]) + ',' +
                       format_double(mean[l]) + ",1\n";
            }
        }
        write_text(dir / ("cluster_" + std::to_string(c + 1) + ".csv"), out);
    }
}

}  // namespace fcalign::io
