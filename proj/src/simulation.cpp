#include "fcalign/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "fcalign/common.hpp"

namespace fcalign {

namespace {

std::mt19937_64 stream(std::uint64_t seed, std::uint32_t purpose, std::size_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), purpose,
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

class Draw {
public:
    explicit Draw(std::mt19937_64& rng) : rng_(rng) {}

    double normal(double mean, double sd) { return std::normal_distribution<double>(mean, sd)(rng_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int label(int k) { return std::uniform_int_distribution<int>(1, k)(rng_); }

private:
    std::mt19937_64& rng_;
};

using Template = std::function<double(double)>;

// Cubic with extrema near first_turn and second_turn, shared by templates 2 and 3.
Template cubic(double lead, double first_turn, double second_turn, double tilt, double offset) {
    return [=](double x) {
        return lead / 3.0 * x * x * x - lead * (first_turn + second_turn) / 2.0 * x * x +
               (lead * first_turn * second_turn + tilt) * x + offset;
    };
}

Template m1_template(int cluster, Draw& g) {
    switch (cluster) {
        case 1: {
            const double lead = g.normal(0.05, 0.005);
            const double lead_ref = g.normal(0.05, 0.005);
            const double slope = g.normal(-10.0 * lead_ref, 2.0 * std::abs(lead_ref));
            const double offset = g.normal(2.0, 1.0);
            return [=](double x) { return lead / 2.0 * x * x + slope * x + offset; };
        }
        case 2:
        case 3: {
            const double center = cluster == 2 ? -0.01 : 0.01;
            const double lead = g.normal(center, 0.001);
            const double lead_ref = g.normal(center, 0.001);
            const double first_turn = g.normal(5.0, 1.0);
            const double second_turn = g.normal(15.0, 1.0);
            const double tilt = g.normal(6.0 * lead_ref, 2.0 * std::abs(lead_ref));
            const double offset = g.normal(3.0, 1.0);
            return cubic(lead, first_turn, second_turn, tilt, offset);
        }
        default: {
            const double lead = g.normal(5e-3, 5e-5);
            const double t1 = g.normal(2.0, 0.2);
            const double t2 = g.normal(10.0, 0.5);
            const double t3 = g.normal(18.0, 0.2);
            const double tilt = g.uniform(-0.05, 0.05);
            const double offset = g.normal(2.0, 0.5);
            // Antiderivative of lead (x - t1)(x - t2)(x - t3), minus a small linear tilt.
            return [=](double x) {
                const double x2 = x * x;
                return lead / 4.0 * x2 * x2 - lead * (t1 + t2 + t3) / 3.0 * x2 * x +
                       lead * (t1 * t2 + t3 * (t1 + t2)) / 2.0 * x2 - (lead * t1 * t2 * t3 + tilt) * x + offset;
            };
        }
    }
}

Template m2_template(int cluster, Draw& g, double& shift) {
    switch (cluster) {
        case 1: {
            shift = g.uniform(-10.0, 10.0);
            const double lead = g.normal(0.05, 0.002);
            const double lead_ref = g.normal(0.05, 0.002);
            const double slope = g.normal(-11.0 * lead_ref, 2.0 * std::abs(lead_ref));
            const double offset = g.normal(2.0, 0.5);
            return [=](double x) { return lead / 2.0 * x * x + slope * x + offset; };
        }
        case 2:
        case 3: {
            shift = g.uniform(-10.0, 10.0);
            const double center = cluster == 2 ? -0.003 : 0.003;
            const double lead = g.normal(center, 1e-5);
            const double lead_ref = g.normal(center, 1e-5);
            const double first_turn = g.normal(8.0, 1.0);
            const double second_turn = g.normal(12.0, 1.0);
            const double tilt = g.normal(6.0 * lead_ref, 2.0 * std::abs(lead_ref));
            const double offset = g.normal(cluster == 2 ? 3.0 : 2.0, 0.5);
            return cubic(lead, first_turn, second_turn, tilt, offset);
        }
        default: {
            shift = g.uniform(-7.0, 7.0);
            const double amplitude = std::abs(g.normal(2.0, 1.0));
            const double frequency = g.uniform(0.3, 0.5);
            const double offset = g.normal(2.0, 0.5);
            return [=](double x) { return amplitude * std::sin(frequency * x) + offset; };
        }
    }
}

// Within-cluster draw of an off-diagonal entry before scaling; 0 across clusters.
double raw_cross(CovMode mode, int ci, int cj, Draw& g) {
    if (ci != cj) return 0.0;
    switch (mode) {
        case CovMode::C3:
        case CovMode::C4:
            return std::abs(g.normal(0.0, 2.0));
        case CovMode::C5:
        case CovMode::C6:
            return ci == 1 ? g.uniform(0.0, 1.0) : g.uniform(-1.0, 0.0);
        default:
            return 0.0;
    }
}

}  // namespace

std::size_t ScenarioSpec::n_clusters() const {
    if (mean_mode == MeanMode::M2 || cov_mode == CovMode::C1) return 4;
    return 2;
}

TimeVector default_time(MeanMode mode) {
    if (mode == MeanMode::M1) return TimeVector({0.5, 1, 2, 3, 4, 7, 14, 21});
    return TimeVector({0.5, 3, 6, 9, 12, 15, 18, 21});
}

TimeVector ScenarioSpec::resolved_time() const { return time ? *time : default_time(mean_mode); }

std::string ScenarioSpec::name() const {
    if (mean_mode == MeanMode::M2) return "m2";
    return "m1-c" + std::to_string(static_cast<int>(cov_mode) + 1);
}

ScenarioSpec parse_scenario(const std::string& name) {
    ScenarioSpec spec;
    if (name == "m2") {
        spec.mean_mode = MeanMode::M2;
        spec.cov_mode = CovMode::C1;
        return spec;
    }
    if (name.size() == 5 && name.rfind("m1-c", 0) == 0 && name[4] >= '1' && name[4] <= '6') {
        spec.mean_mode = MeanMode::M1;
        spec.cov_mode = static_cast<CovMode>(name[4] - '1');
        return spec;
    }
    throw Error(ErrorCode::InvalidCombination, "unknown scenario '" + name + "' (expected m1-c1..m1-c6 or m2)");
}

SimulatedSet simulate(const ScenarioSpec& spec) {
    if (spec.mean_mode == MeanMode::M2 && spec.cov_mode != CovMode::C1) {
        throw Error(ErrorCode::InvalidCombination, "scenario M2 only uses independent (C1) covariances");
    }
    if (spec.n_entities < 2) throw Error(ErrorCode::InvalidArgument, "at least two entities are required");
    const TimeVector time = spec.resolved_time();
    const std::size_t n = spec.n_entities;
    const std::size_t n_pts = time.size();
    const int k = static_cast<int>(spec.n_clusters());

    SimulatedSet out;
    out.truth.resize(n);
    out.shifts.assign(n, 0.0);
    std::vector<FoldChange> items(n);
    std::vector<std::vector<double>> raw_diag(n, std::vector<double>(n_pts));
    for (std::size_t i = 0; i < n; ++i) {
        auto rng = stream(spec.seed, 1, i);
        Draw g(rng);
        const int cluster = g.label(k);
        out.truth[i] = cluster;
        items[i].mean.resize(n_pts);
        if (spec.mean_mode == MeanMode::M1) {
            const auto f = m1_template(cluster, g);
            for (std::size_t t = 0; t < n_pts; ++t) items[i].mean[t] = f(time[t]);
        } else {
            double shift = 0.0;
            const auto f = m2_template(cluster, g, shift);
            out.shifts[i] = shift;
            for (std::size_t t = 0; t < n_pts; ++t) items[i].mean[t] = f(time[t] - shift);
        }
        for (std::size_t t = 0; t < n_pts; ++t) raw_diag[i][t] = g.normal(0.0, 2.0);
    }

    const bool correlated = spec.cov_mode != CovMode::C1 && spec.cov_mode != CovMode::C2;
    std::vector<double> raw_offdiag;
    double max_offdiag = 0.0;
    if (correlated) {
        raw_offdiag.assign(n * (n - 1) / 2 * n_pts, 0.0);
        std::size_t pos = 0;
        for (std::size_t i = 0; i < n; ++i) {
            auto rng = stream(spec.seed, 2, i);
            Draw g(rng);
            for (std::size_t j = i + 1; j < n; ++j) {
                for (std::size_t t = 0; t < n_pts; ++t, ++pos) {
                    raw_offdiag[pos] = raw_cross(spec.cov_mode, out.truth[i], out.truth[j], g);
                    max_offdiag = std::max(max_offdiag, raw_offdiag[pos]);
                }
            }
        }
    }

    // Variances and cross terms are squared draws over a scenario divisor (1 for C1 and C2).
    double divisor = 1.0;
    switch (spec.cov_mode) {
        case CovMode::C3: divisor = max_offdiag > 0.0 ? max_offdiag : 1.0; break;
        case CovMode::C4: divisor = 20.0; break;
        case CovMode::C5: divisor = 100.0; break;
        case CovMode::C6: divisor = 50.0; break;
        default: break;
    }
    for (std::size_t i = 0; i < n; ++i) {
        items[i].var.resize(n_pts);
        for (std::size_t t = 0; t < n_pts; ++t) items[i].var[t] = raw_diag[i][t] * raw_diag[i][t] / divisor;
    }

    std::vector<std::string> ids(n);
    for (std::size_t i = 0; i < n; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "fc%04zu", i + 1);
        ids[i] = buf;
    }
    out.set = FoldChangeSet(std::move(time), std::move(ids), std::move(items));

    if (correlated) {
        std::size_t pos = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                for (std::size_t t = 0; t < n_pts; ++t, ++pos) {
                    const double x = raw_offdiag[pos];
                    if (x == 0.0) continue;
                    double rho = x * x / divisor;
                    // Keep each per-time 2x2 block positive semidefinite.
                    const double bound = std::sqrt(out.set.var(i)[t] * out.set.var(j)[t]);
                    rho = std::min(rho, bound);
                    out.set.set_rho(i, j, t, rho);
                }
            }
        }
    }
    return out;
}

}  // namespace fcalign
