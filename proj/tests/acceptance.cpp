// One PASS / FAIL / SKIP line per acceptance criterion. Exit status is nonzero
// when a criterion fails unless it is listed with --allow-fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fcalign/clustering.hpp"
#include "fcalign/eval_metrics.hpp"
#include "fcalign/fold_change.hpp"
#include "fcalign/gaussian_metrics.hpp"
#include "fcalign/io.hpp"
#include "fcalign/simulation.hpp"
#include "fcalign/warping.hpp"
#include "oracles.hpp"

using namespace fcalign;
namespace fs = std::filesystem;

namespace {

enum class Outcome { Pass, Fail, Skip };

struct Verdict {
    Outcome outcome;
    std::string detail;
};

Verdict verdict(bool ok, std::string detail) { return {ok ? Outcome::Pass : Outcome::Fail, std::move(detail)}; }

std::string fmt(double v, int digits = 4) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Verdict identity_warp() {
    std::mt19937_64 rng(101);
    double worst = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t p = 2 + rng() % 10;
        const auto s = oracle::random_set(rng, 2, p, 0.1);
        const double got = diss(s, 0, 1, 0, WarpSpec{0, 0.0, false});
        for (double ref : {d2_squared(s, 0, 1), oracle::d2_explicit(s, 0, 1)}) {
            worst = std::max(worst, std::abs(got - ref) / std::max(std::abs(ref), 1e-300));
        }
    }
    return verdict(worst <= 1e-12, "max relative error " + fmt(worst));
}

Verdict owd_symmetry() {
    std::mt19937_64 rng(202);
    const WarpSpec spec{3, 0.0, true};
    std::size_t bad = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const auto s = oracle::random_set(rng, 50, 8);
        const auto m = build_owd_ow(s, spec);
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = i + 1; j < s.size(); ++j) {
                const auto upper = optimal_warp(s, i, j, spec);
                const auto lower = optimal_warp(s, j, i, spec);
                if (upper.value != lower.value || upper.step != -lower.step) ++bad;
                if (m.owd(i, j) != m.owd(j, i) || m.ow(i, j) != -m.ow(j, i)) ++bad;
                if (m.owd(i, j) != upper.value || m.ow(i, j) != upper.step) ++bad;
            }
    }
    return verdict(bad == 0, std::to_string(bad) + " mismatching pairs over 100 sets");
}

struct EquivalenceRuns {
    std::size_t mismatches = 0;
    double worst_tc = 0.0;
    std::vector<InitTrace> traces;
};

const EquivalenceRuns& equivalence_runs() {
    static const EquivalenceRuns runs = [] {
        EquivalenceRuns out;
        std::mt19937_64 rng(303);
        for (int inst = 0; inst < 50; ++inst) {
            const std::size_t n = 20 + rng() % 41;
            const std::size_t k = 2 + static_cast<std::size_t>(inst % 3);
            const auto s = oracle::random_set(rng, n, 7, 0.05);
            const WarpSpec spec{2, (inst % 2) ? 0.5 : 0.0, true};
            const ClusterConfig cfg{k, 100, 5, 1e-9, static_cast<std::uint64_t>(inst)};
            const auto fast = cluster_fast(build_owd_ow(s, spec), cfg);
            const auto classic = cluster_classic(s, spec, cfg);
            if (fast.labels != classic.labels || fast.centroids != classic.centroids || fast.warps != classic.warps) {
                ++out.mismatches;
            }
            out.worst_tc = std::max(out.worst_tc, std::abs(fast.total_cost - classic.total_cost));
            for (const auto* r : {&fast, &classic}) out.traces.insert(out.traces.end(), r->inits.begin(), r->inits.end());
        }
        return out;
    }();
    return runs;
}

Verdict fast_classic_equivalence() {
    const auto& r = equivalence_runs();
    return verdict(r.mismatches == 0 && r.worst_tc <= 1e-10,
                   std::to_string(r.mismatches) + " of 50 instances differ, max |dTC| " + fmt(r.worst_tc));
}

Verdict convergence() {
    const auto& r = equivalence_runs();
    std::size_t increasing = 0, unfinished = 0;
    for (const auto& t : r.traces) {
        for (std::size_t q = 1; q < t.costs.size(); ++q)
            if (t.costs[q] > t.costs[q - 1]) ++increasing;
        if (!t.converged || t.iterations >= 100) ++unfinished;
    }
    return verdict(increasing == 0 && unfinished == 0,
                   std::to_string(r.traces.size()) + " traces, " + std::to_string(increasing) + " increases, " +
                       std::to_string(unfinished) + " hit it_max");
}

Verdict brute_force_medoids() {
    std::mt19937_64 rng(505);
    double worst = 0.0;
    for (int inst = 0; inst < 20; ++inst) {
        const auto s = oracle::random_set(rng, 8, 6);
        const auto m = build_owd_ow(s, WarpSpec{2, 0.0, true});
        const auto r = cluster_fast(m, ClusterConfig{2, 100, 200, 1e-9, static_cast<std::uint64_t>(inst)});
        const double best = oracle::best_medoid_cost(m.owd, 2);
        worst = std::max(worst, std::abs(r.total_cost - best) / std::max(best, 1e-300));
    }
    return verdict(worst <= 1e-12, "max relative gap to exhaustive optimum " + fmt(worst));
}

Verdict m2_alignment_scores() {
    std::vector<double> aligned_ari, aligned_v, plain_ari;
    bool every_seed = true;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        ScenarioSpec spec = parse_scenario("m2");
        spec.seed = seed;
        const auto sim = simulate(spec);
        const ClusterConfig cfg{4, 100, 50, 1e-9, seed};
        const auto with = cluster_fast(build_owd_ow(sim.set, WarpSpec{2, 0.0, true}), cfg);
        const auto without = cluster_fast(build_owd_ow(sim.set, WarpSpec{0, 0.0, true}), cfg);
        aligned_ari.push_back(ari(sim.truth, with.labels));
        aligned_v.push_back(v_measure(sim.truth, with.labels));
        plain_ari.push_back(ari(sim.truth, without.labels));
        every_seed = every_seed && aligned_ari.back() > plain_ari.back();
    }
    const double a = mean_of(aligned_ari), v = mean_of(aligned_v), u = mean_of(plain_ari);
    const bool ok = std::abs(a - 0.61) <= 0.10 && std::abs(v - 0.67) <= 0.10 && std::abs(u - 0.22) <= 0.10 && every_seed;
    return verdict(ok, "aligned ARI " + fmt(a, 3) + " (0.61+-0.10), V " + fmt(v, 3) + " (0.67+-0.10), unaligned ARI " +
                           fmt(u, 3) + " (0.22+-0.10), aligned > unaligned on every seed: " +
                           (every_seed ? "yes" : "no"));
}

Verdict metric_ordering() {
    bool ok = true;
    std::string detail;
    for (const char* name : {"m1-c3", "m1-c4", "m1-c5", "m1-c6"}) {
        std::vector<double> d2, hel, was;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            ScenarioSpec spec = parse_scenario(name);
            spec.seed = seed;
            const auto sim = simulate(spec);
            const ClusterConfig cfg{spec.n_clusters(), 100, 50, 1e-9, seed};
            auto score = [&](Metric m) {
                return ari(sim.truth, cluster_fast(unwarped(pairwise_matrix(sim.set, m)), cfg).labels);
            };
            d2.push_back(score(Metric::L2));
            hel.push_back(score(Metric::Hellinger));
            was.push_back(score(Metric::Wasserstein));
        }
        const double a = mean_of(d2), b = mean_of(hel), c = mean_of(was);
        ok = ok && a >= b && a >= c;
        if (!detail.empty()) detail += "; ";
        detail += std::string(name) + " d2/Hel/Was " + fmt(a, 3) + "/" + fmt(b, 3) + "/" + fmt(c, 3);
    }
    return verdict(ok, "mean ARI " + detail);
}

Verdict speed() {
    ScenarioSpec spec = parse_scenario("m2");
    spec.seed = 1;
    const auto sim = simulate(spec);
    const WarpSpec warp{2, 0.0, true};
    const ClusterConfig cfg{4, 100, 50, 1e-9, 1};
    auto start = std::chrono::steady_clock::now();
    const auto fast = cluster_fast(build_owd_ow(sim.set, warp), cfg);
    const double fast_s = seconds_since(start);
    start = std::chrono::steady_clock::now();
    const auto classic = cluster_classic(sim.set, warp, cfg);
    const double classic_s = seconds_since(start);
    const bool same = fast.labels == classic.labels;
    return verdict(fast_s <= 0.5 * classic_s && same, "fast " + fmt(fast_s, 3) + " s, classic " + fmt(classic_s, 3) +
                                                          " s, ratio " + fmt(fast_s / classic_s, 3));
}

Verdict preprocessing_contract() {
    std::mt19937_64 rng(909);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 5 + rng() % 30, p = 3 + rng() % 6, reps = 2 + rng() % 3;
        std::vector<std::string> ids;
        for (std::size_t i = 0; i < n; ++i) ids.push_back("g" + std::to_string(i));
        std::vector<double> t;
        for (std::size_t l = 0; l < p; ++l) t.push_back(static_cast<double>(l + 1));
        ReplicateDataset d(ids, TimeVector(t), reps);
        std::normal_distribution<double> g(0.0, 1.0);
        std::uniform_real_distribution<double> scale(0.01, 50.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = scale(rng);
            for (int c = 0; c < 2; ++c)
                for (std::size_t r = 0; r < reps; ++r)
                    for (std::size_t l = 0; l < p; ++l) d.at(i, c, r, l) = sc * (g(rng) + c * 3.0);
        }
        const auto set = preprocess(estimate(d), PreprocessOptions{true, true});
        for (std::size_t i = 0; i < set.size(); ++i) worst = std::max(worst, std::abs(fc_norm(set.item(i)) - 1.0));
    }
    return verdict(worst <= 1e-12, "max |norm - 1| " + fmt(worst));
}

Verdict linac(const fs::path& fixtures) {
    const fs::path path = fixtures / "linac.csv";
    if (!fs::exists(path)) return {Outcome::Skip, path.string() + " not present"};
    const auto report = validate_dataset(io::ingest_csv(path, true));
    const auto set = preprocess(estimate(report.dataset), PreprocessOptions{true, true});
    const auto m = build_owd_ow(set, WarpSpec{1, 0.5, true});
    const auto r = cluster_fast(m, ClusterConfig{5, 100, 200, 1e-9, 0});
    const double s = silhouette(m.owd, r.labels);
    return verdict(std::abs(s - 0.36) <= 0.05, "silhouette " + fmt(s, 3) + " (0.36+-0.05)");
}

Verdict metric_oracles() {
    std::mt19937_64 rng(1111);
    std::size_t ari_bad = 0;
    double v_worst = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t n = 1 + rng() % 12;
        std::vector<int> a(n), b(n);
        const int ka = 1 + static_cast<int>(rng() % 5), kb = 1 + static_cast<int>(rng() % 5);
        for (auto& x : a) x = static_cast<int>(rng() % static_cast<unsigned>(ka));
        for (auto& x : b) x = static_cast<int>(rng() % static_cast<unsigned>(kb));
        if (ari(a, b) != oracle::ari_pairs(a, b)) ++ari_bad;
        v_worst = std::max(v_worst, std::abs(v_measure(a, b) - oracle::v_measure_entropy(a, b)));
    }
    return verdict(ari_bad == 0 && v_worst <= 1e-12,
                   "ARI mismatches " + std::to_string(ari_bad) + ", max V-measure difference " + fmt(v_worst));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance checks"};
    std::vector<int> allow_fail, only;
    std::string fixtures = "tests/fixtures";
    app.add_option("--allow-fail", allow_fail, "Criteria whose failure does not affect the exit status");
    app.add_option("--only", only, "Run only these criteria");
    app.add_option("--fixtures", fixtures, "Directory holding optional datasets")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"identity warp equals d2", identity_warp},
        {"owd symmetry and ow antisymmetry", owd_symmetry},
        {"fast and classic clustering agree", fast_classic_equivalence},
        {"total cost sequences converge", convergence},
        {"exhaustive medoid optimum", brute_force_medoids},
        {"M2 alignment benefit", m2_alignment_scores},
        {"d2 beats Hellinger and Wasserstein on correlated noise", metric_ordering},
        {"fast clustering at most half the classic time", speed},
        {"unit norm after preprocessing", preprocessing_contract},
        {"LINAC silhouette", [&] { return linac(fixtures); }},
        {"ARI and V-measure oracles", metric_oracles},
    };

    const std::set<int> allowed(allow_fail.begin(), allow_fail.end()), selected(only.begin(), only.end());
    int status = 0;
    for (std::size_t c = 0; c < criteria.size(); ++c) {
        const int id = static_cast<int>(c + 1);
        if (!selected.empty() && !selected.count(id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Verdict v{Outcome::Fail, ""};
        try {
            v = criteria[c].second();
        } catch (const std::exception& e) {
            v = {Outcome::Fail, std::string("exception: ") + e.what()};
        }
        const char* tag = v.outcome == Outcome::Pass ? "PASS" : v.outcome == Outcome::Skip ? "SKIP" : "FAIL";
        std::string note;
        if (v.outcome == Outcome::Fail && allowed.count(id)) {
            note = " [known failure]";
        } else if (v.outcome == Outcome::Fail) {
            status = 1;
        }
        std::printf("criterion %2d %s  %s: %s (%.1f s)%s\n", id, tag, criteria[c].first.c_str(), v.detail.c_str(),
                    seconds_since(start), note.c_str());
        std::fflush(stdout);
    }
    return status;
}
