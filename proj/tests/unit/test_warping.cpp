#include <doctest.h>

#include <random>

#include "fcalign/gaussian_metrics.hpp"
#include "fcalign/warping.hpp"
#include "../oracles.hpp"

using namespace fcalign;

namespace {

// Zero-variance pair where the second mean is the first shifted by one index.
FoldChangeSet shifted_pair() {
    const std::vector<double> base{0.0, 1.0, 4.0, 9.0, 16.0, 25.0};
    std::vector<double> later{-1.0};
    later.insert(later.end(), base.begin(), base.end() - 1);
    const std::vector<double> zeros(6, 0.0);
    return FoldChangeSet(TimeVector({1, 2, 3, 4, 5, 6}), {"a", "b"}, {FoldChange{base, zeros}, FoldChange{later, zeros}});
}

}  // namespace

TEST_SUITE("warping") {

TEST_CASE("time warps") {
    const TimeVector t({2, 4, 7, 14, 21});
    const auto [a, b] = warp_time(t, -1);
    CHECK(a == std::vector<double>{4, 7, 14, 21});
    CHECK(b == std::vector<double>{2, 4, 7, 14});
    const auto [c, d] = warp_time(t, 0);
    CHECK(c == t.points());
    CHECK(d == t.points());
    const auto [e, f] = warp_time(TimeVector({1, 2, 3}), 2);
    CHECK(e == std::vector<double>{1});
    CHECK(f == std::vector<double>{3});
    try {
        warp_time(TimeVector({1, 2, 3}), -3);
        FAIL("expected an error");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::StepTooLarge);
    }
}

TEST_CASE("identity warp reduces to d2") {
    std::mt19937_64 rng(1);
    const auto s = oracle::random_set(rng, 6, 5);
    const WarpSpec raw{0, 0.0, false};
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j) CHECK(diss(s, i, j, 0, raw) == d2_squared(s, i, j));
    CHECK(diss(s, 3, 3, 0, WarpSpec{}) == 0.0);
}

TEST_CASE("exact shifted copy re-aligns to zero") {
    const auto s = shifted_pair();
    CHECK(diss(s, 0, 1, 1, WarpSpec{1, 0.0, true}) == 0.0);
    CHECK(diss(s, 1, 0, -1, WarpSpec{1, 0.0, false}) == 0.0);
    const auto m = build_owd_ow(s, WarpSpec{2, 0.0, true});
    CHECK(m.owd(0, 1) == 0.0);
    CHECK(m.ow(0, 1) == 1);
    CHECK(m.ow(1, 0) == -1);
}

TEST_CASE("diss matches the term-by-term warped construction") {
    std::mt19937_64 rng(2);
    const auto s = oracle::random_set(rng, 8, 6);
    for (bool normalize : {false, true})
        for (double lambda : {0.0, 0.7})
            for (int step = -4; step <= 4; ++step)
                for (std::size_t i = 0; i < s.size(); ++i)
                    for (std::size_t j = 0; j < s.size(); ++j) {
                        const WarpSpec spec{4, lambda, normalize};
                        const double got = diss(s, i, j, step, spec);
                        CHECK(got == doctest::Approx(oracle::diss_explicit(s, i, j, step, normalize, lambda))
                                         .epsilon(1e-12)
                                         .scale(1.0));
                        CHECK(got == diss(s, j, i, -step, spec));
                        if (lambda == 0.0) CHECK(got >= -1e-10);
                    }
}

TEST_CASE("sign penalty") {
    const std::vector<double> zeros(4, 0.0);
    auto pair = [&](std::vector<double> a, std::vector<double> b) {
        return FoldChangeSet(TimeVector({1, 2, 3, 4}), {"a", "b"}, {FoldChange{a, zeros}, FoldChange{b, zeros}});
    };
    CHECK(sign_penalty(pair({1, 2, 3, 4}, {1, 1, 1, 1}), 0, 1, 0) == 0.0);
    CHECK(sign_penalty(pair({1, 2, 3, 4}, {-1, -1, -1, -1}), 0, 1, 0) == 1.0);
    CHECK(sign_penalty(pair({1, -2, 3, -4}, {1, 1, 1, 1}), 0, 1, 0) == 0.5);
    // Zero means never count as opposite.
    CHECK(sign_penalty(pair({0, 0, 0, 0}, {-1, 1, -1, 1}), 0, 1, 0) == 0.0);
    std::mt19937_64 rng(3);
    const auto s = oracle::random_set(rng, 5, 6);
    for (int step = -3; step <= 3; ++step) {
        CHECK(sign_penalty(s, 0, 3, step) == sign_penalty(s, 3, 0, -step));
        const double v = sign_penalty(s, 1, 2, step);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("OWD / OW against an exhaustive loop") {
    std::mt19937_64 rng(4);
    const auto s = oracle::random_set(rng, 12, 7);
    const WarpSpec spec{2, 0.3, true};
    const auto m = build_owd_ow(s, spec);
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(m.owd(i, i) == 0.0);
        CHECK(m.ow(i, i) == 0);
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (i == j) continue;
            double best = INFINITY;
            for (int step = -2; step <= 2; ++step) {
                best = std::min(best, oracle::diss_explicit(s, i, j, step, true, 0.3));
            }
            CHECK(m.owd(i, j) == doctest::Approx(best).epsilon(1e-12));
            CHECK(m.owd(i, j) == m.owd(j, i));
            CHECK(m.ow(i, j) == -m.ow(j, i));
            CHECK(std::abs(m.ow(i, j)) <= 2);
            CHECK(diss(s, i, j, m.ow(i, j), spec) == m.owd(i, j));
            const auto w = optimal_warp(s, i, j, spec);
            CHECK(w.value == m.owd(i, j));
            CHECK(w.step == m.ow(i, j));
        }
    }
}

TEST_CASE("ties prefer no warp, then the sign that keeps ow antisymmetric") {
    // Constant means and no variance: every step gives the same value.
    const std::vector<double> ones(5, 1.0), zeros(5, 0.0);
    FoldChangeSet s(TimeVector({1, 2, 3, 4, 5}), {"a", "b", "c"},
                    {FoldChange{ones, zeros}, FoldChange{ones, zeros}, FoldChange{ones, zeros}});
    CHECK(optimal_warp(s, 0, 1, WarpSpec{2, 0.0, true}).step == 0);

    // Symmetric profile: +1 and -1 tie, 0 is worse.
    FoldChangeSet t(TimeVector({1, 2, 3, 4, 5}), {"a", "b"},
                    {FoldChange{{0, 1, 0, 1, 0}, zeros}, FoldChange{{1, 0, 1, 0, 1}, zeros}});
    const WarpSpec spec{1, 0.0, true};
    CHECK(diss(t, 0, 1, 1, spec) == diss(t, 0, 1, -1, spec));
    CHECK(optimal_warp(t, 0, 1, spec).step == 1);
    CHECK(optimal_warp(t, 1, 0, spec).step == -1);
}

TEST_CASE("larger lambda never lowers owd") {
    std::mt19937_64 rng(5);
    const auto s = oracle::random_set(rng, 10, 6);
    const auto lo = build_owd_ow(s, WarpSpec{2, 0.0, true});
    const auto hi = build_owd_ow(s, WarpSpec{2, 1.5, true});
    for (std::size_t k = 0; k < lo.owd.data().size(); ++k) CHECK(hi.owd.data()[k] >= lo.owd.data()[k]);
}

TEST_CASE("s_max zero gives the normalized d2 matrix") {
    std::mt19937_64 rng(6);
    const auto s = oracle::random_set(rng, 6, 4);
    const auto m = build_owd_ow(s, WarpSpec{0, 0.0, true});
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) {
            CHECK(m.owd(i, j) == doctest::Approx(d2_squared(s, i, j) / 4.0).epsilon(1e-14));
            CHECK(m.ow(i, j) == 0);
        }
}

TEST_CASE("warp settings validation") {
    CHECK_NOTHROW((WarpSpec{3, 0.0, true}.validate(5)));
    CHECK_THROWS_AS((WarpSpec{4, 0.0, true}.validate(5)), Error);
    CHECK_THROWS_AS((WarpSpec{-1, 0.0, true}.validate(5)), Error);
    CHECK_THROWS_AS((WarpSpec{1, -0.1, true}.validate(5)), Error);
}

}  // TEST_SUITE
