#include <doctest.h>

#include <cmath>
#include <set>

#include "fcalign/simulation.hpp"

using namespace fcalign;

namespace {

bool same(const SimulatedSet& a, const SimulatedSet& b) {
    if (a.truth != b.truth || a.shifts != b.shifts || a.set.cross_data() != b.set.cross_data()) return false;
    for (std::size_t i = 0; i < a.set.size(); ++i) {
        if (a.set.item(i).mean != b.set.item(i).mean || a.set.item(i).var != b.set.item(i).var) return false;
    }
    return true;
}

// Signs of successive differences of a mean profile.
std::vector<int> slope_signs(std::span<const double> m) {
    std::vector<int> out;
    for (std::size_t l = 1; l < m.size(); ++l) out.push_back(m[l] > m[l - 1] ? 1 : -1);
    return out;
}

}  // namespace

TEST_SUITE("simulation") {

TEST_CASE("scenario names") {
    CHECK(parse_scenario("m2").mean_mode == MeanMode::M2);
    CHECK(parse_scenario("m1-c4").cov_mode == CovMode::C4);
    CHECK(parse_scenario("m1-c6").name() == "m1-c6");
    CHECK(parse_scenario("m1-c1").n_clusters() == 4);
    CHECK(parse_scenario("m1-c3").n_clusters() == 2);
    CHECK_THROWS_AS(parse_scenario("m3"), Error);
    ScenarioSpec bad = parse_scenario("m2");
    bad.cov_mode = CovMode::C3;
    try {
        simulate(bad);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidCombination);
    }
}

TEST_CASE("default grids") {
    CHECK(default_time(MeanMode::M1).points() == std::vector<double>{0.5, 1, 2, 3, 4, 7, 14, 21});
    CHECK(default_time(MeanMode::M2).points() == std::vector<double>{0.5, 3, 6, 9, 12, 15, 18, 21});
}

TEST_CASE("fixed seed replays bit for bit; another seed differs") {
    for (const char* name : {"m1-c1", "m1-c3", "m1-c5", "m2"}) {
        ScenarioSpec spec = parse_scenario(name);
        spec.n_entities = 60;
        spec.seed = 12;
        const auto a = simulate(spec);
        const auto b = simulate(spec);
        CHECK(same(a, b));
        spec.seed = 13;
        CHECK_FALSE(same(a, simulate(spec)));
    }
}

TEST_CASE("labels, variances and cross-covariance sparsity") {
    for (int mode = 0; mode < 6; ++mode) {
        ScenarioSpec spec;
        spec.cov_mode = static_cast<CovMode>(mode);
        spec.n_entities = 80;
        spec.seed = 3;
        const auto sim = simulate(spec);
        const int k = static_cast<int>(spec.n_clusters());
        for (int label : sim.truth) {
            CHECK(label >= 1);
            CHECK(label <= k);
        }
        for (std::size_t i = 0; i < sim.set.size(); ++i) {
            for (double v : sim.set.var(i)) CHECK(v >= 0.0);
            CHECK(sim.shifts[i] == 0.0);
        }
        CHECK(sim.set.min_block_eigenvalue() >= -1e-10);
        bool any_within = false;
        for (std::size_t i = 0; i < sim.set.size(); ++i)
            for (std::size_t j = i + 1; j < sim.set.size(); ++j)
                for (std::size_t t = 0; t < sim.set.n_times(); ++t) {
                    const double r = sim.set.rho(i, j, t);
                    if (mode < 2 || sim.truth[i] != sim.truth[j]) {
                        CHECK(r == 0.0);
                    } else if (r != 0.0) {
                        any_within = true;
                    }
                    // C5 and C6 square their draws, so cluster 2's negative
                    // entries also become nonnegative covariances.
                    if (mode >= 2) CHECK(r >= 0.0);
                }
        if (mode >= 2) CHECK(any_within);
    }
}

TEST_CASE("scaling constants fix the variance scale") {
    // Same seed means the same diagonal draws; only the divisor changes.
    ScenarioSpec c2 = parse_scenario("m1-c2"), c4 = parse_scenario("m1-c4"), c5 = parse_scenario("m1-c5"),
                 c6 = parse_scenario("m1-c6");
    for (auto* s : {&c2, &c4, &c5, &c6}) s->n_entities = 20, s->seed = 5;
    const auto a = simulate(c2), b = simulate(c4), c = simulate(c5), d = simulate(c6);
    for (std::size_t i = 0; i < 20; ++i)
        for (std::size_t t = 0; t < 8; ++t) {
            const double v = a.set.var(i)[t];
            CHECK(b.set.var(i)[t] == doctest::Approx(v / 20.0).epsilon(1e-15));
            CHECK(c.set.var(i)[t] == doctest::Approx(v / 100.0).epsilon(1e-15));
            CHECK(d.set.var(i)[t] == doctest::Approx(v / 50.0).epsilon(1e-15));
        }
}

TEST_CASE("cluster proportions are close to uniform") {
    ScenarioSpec spec = parse_scenario("m1-c1");
    std::vector<double> counts(4, 0.0);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        spec.seed = seed;
        for (int label : simulate(spec).truth) counts[static_cast<std::size_t>(label - 1)] += 1.0;
    }
    const double expect = 300.0 * 100.0 / 4.0;
    double chi2 = 0.0;
    for (double c : counts) chi2 += (c - expect) * (c - expect) / expect;
    // 3 degrees of freedom, p = 0.001 critical value.
    CHECK(chi2 < 16.27);
}

TEST_CASE("M1 template shapes") {
    ScenarioSpec spec = parse_scenario("m1-c1");
    spec.seed = 8;
    spec.n_entities = 200;
    const auto sim = simulate(spec);
    for (std::size_t i = 0; i < sim.set.size(); ++i) {
        const auto m = sim.set.mean(i);
        const auto sg = slope_signs(m);
        switch (sim.truth[i]) {
            case 1:  // convex with its minimum near x = 10
                CHECK(m[5] < m[0]);
                CHECK(m[7] > m[6]);
                break;
            case 2:  // a < 0: falls first, rises between r1 and r2
                CHECK(sg.front() == -1);
                break;
            case 3:  // mirror image of cluster 2
                CHECK(sg.front() == 1);
                break;
            default:  // quartic: dips to r3, then climbs toward r4
                CHECK(m[2] < m[0]);
                CHECK(m[4] > m[2]);
                CHECK(m[5] > m[3]);
                break;
        }
    }
}

TEST_CASE("M2 shifts follow their ranges") {
    ScenarioSpec spec = parse_scenario("m2");
    spec.seed = 4;
    const auto sim = simulate(spec);
    std::set<int> seen;
    for (std::size_t i = 0; i < sim.set.size(); ++i) {
        seen.insert(sim.truth[i]);
        const double bound = sim.truth[i] == 4 ? 7.0 : 10.0;
        CHECK(std::abs(sim.shifts[i]) <= bound);
        if (sim.truth[i] == 4) {
            // a sin(.) + c stays within c +- a, and a = |N(2,1)| rarely exceeds 6.
            for (double v : sim.set.mean(i)) CHECK(std::abs(v) < 12.0);
        }
    }
    CHECK(seen.size() == 4);
}

}  // TEST_SUITE
