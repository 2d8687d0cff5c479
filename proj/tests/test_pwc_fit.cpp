#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pwc3d/pwc_fit.hpp"
#include "pwc3d/synthetic.hpp"

using namespace pwc3d;

namespace {

Series make_series(const std::vector<double>& y) {
    Series s;
    for (std::size_t i = 0; i < y.size(); ++i) s.s.push_back(static_cast<double>(i));
    s.y = y;
    return s;
}

double total_cost(const std::vector<LinearSegment>& segs, double eps) {
    double c = 0.0;
    for (const auto& s : segs) c += eps + s.fit_error;
    return c;
}

void check_tiling(const std::vector<LinearSegment>& segs, int n) {
    REQUIRE_FALSE(segs.empty());
    CHECK(segs.front().start_index == 0);
    CHECK(segs.back().end_index == n - 1);
    for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
        CHECK(segs[i].start_index <= segs[i].end_index);
        CHECK(segs[i + 1].start_index == segs[i].end_index + 1);
    }
}

Series random_series(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Series s;
    double x = 0.0;
    for (int i = 0; i < n; ++i) {
        x += 0.2 + u(rng);
        s.s.push_back(x);
        s.y.push_back(4.0 * (u(rng) - 0.5) + (u(rng) < 0.3 ? 3.0 : 0.0));
    }
    return s;
}

}  // namespace

TEST_CASE("segment_dp fits an exact line with one segment") {
    Series s;
    for (int i = 0; i < 25; ++i) {
        s.s.push_back(0.3 * i);
        s.y.push_back(2.0 * (0.3 * i) + 1.0);
    }
    for (double eps : {1e-6, 0.1, 10.0}) {
        const auto segs = segment_dp(s, eps);
        REQUIRE(segs.size() == 1);
        CHECK(segs[0].alpha == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(segs[0].beta == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(segs[0].fit_error < 1e-9);
    }
    CHECK_THROWS_AS(segment_dp(s, -1.0), InvalidInput);
}

TEST_CASE("segment_dp finds a two-line kink") {
    Series s;
    for (int i = 0; i < 30; ++i) {
        const double x = 0.1 * i;
        s.s.push_back(x);
        s.y.push_back(i < 15 ? x : 2.8 - x);  // slope +1 then -1, kink at i=14/15
    }
    const auto segs = segment_dp(s, 1e-4);
    REQUIRE(segs.size() == 2);
    CHECK(std::abs(segs[0].end_index - 14) <= 1);
    CHECK(segs[0].alpha == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(segs[1].alpha == doctest::Approx(-1.0).epsilon(1e-6));

    const auto oracle = brute_force_partition(s, 1e-4);
    CHECK(total_cost(segs, 1e-4) == doctest::Approx(oracle.cost).epsilon(1e-9));
}

TEST_CASE("segment_dp cost equals the exhaustive minimum") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 8 + static_cast<int>(rng() % 23);
        const Series s = random_series(rng, n);
        const double eps = std::uniform_real_distribution<double>(0.0, 50.0)(rng);
        for (FitNorm norm : {FitNorm::l1_of_l2fit, FitNorm::pure_l2}) {
            SegmentationParams params;
            params.norm = norm;
            const auto segs = segment_dp(s, eps, params);
            const auto oracle = brute_force_partition(s, eps, params);
            CHECK(std::abs(total_cost(segs, eps) - oracle.cost) <= 1e-9);
            check_tiling(segs, n);
        }
    }
}

TEST_CASE("raising the penalty never increases the segment count") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 8; ++trial) {
        const Series s = random_series(rng, 40);
        std::size_t prev = std::numeric_limits<std::size_t>::max();
        for (int step = 0; step < 10; ++step) {
            const double eps = 0.01 * std::pow(3.0, step);
            const std::size_t count = segment_dp(s, eps).size();
            CHECK(count <= prev);
            prev = count;
        }
    }
}

TEST_CASE("enforce_continuity moves breakpoints to line intersections") {
    // y = s and y = 2s - 1 intersect at s = 1
    std::vector<LinearSegment> segs(2);
    segs[0] = {0, 11, 1.0, 0.0, 0.0, 0.0, 1.2, false};
    segs[1] = {12, 23, 2.0, -1.0, 0.0, 1.2, 2.4, false};
    std::vector<double> s;
    for (int i = 0; i < 24; ++i) s.push_back(0.1 * i);
    const auto refined = enforce_continuity(segs, s);
    CHECK(refined[0].s_end == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(refined[1].s_start == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(refined[0].eval(1.0) == doctest::Approx(refined[1].eval(1.0)).epsilon(1e-12));

    // already continuous: fixed point
    const auto again = enforce_continuity(refined, s);
    CHECK(again[0].s_end == doctest::Approx(refined[0].s_end).epsilon(1e-12));
    CHECK(again[1].start_index == refined[1].start_index);
}

TEST_CASE("continuity holds across refined noisy segment fits") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g(0.0, 0.02);
    Series s;
    for (int i = 0; i < 90; ++i) {
        const double x = 0.05 * i;
        s.s.push_back(x);
        double y = x < 1.5 ? 0.5 * x : (x < 3.0 ? 1.5 * x - 1.5 : -x + 6.0);
        s.y.push_back(y + g(rng));
    }
    auto segs = segment_dp(s, 0.05);
    segs = enforce_continuity(std::move(segs), s.s);
    segs = merge_overshoot(std::move(segs), s);
    for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
        if (segs[i].parallel_flagged) continue;
        CHECK(std::abs(segs[i].eval(segs[i].s_end) - segs[i + 1].eval(segs[i + 1].s_start)) <
              1e-9);
    }
    check_tiling(segs, 90);
}

TEST_CASE("merge_overshoot merges nearly-parallel pairs with a far intersection") {
    // two slightly different slopes whose intersection is far left of both
    Series s;
    for (int i = 0; i < 30; ++i) {
        const double x = 1.0 + 0.1 * i;
        s.s.push_back(x);
        s.y.push_back(1.0 + 0.5 * x + (i >= 15 ? 0.001 * (x - 2.5) : 0.0));
    }
    std::vector<LinearSegment> segs(2);
    segs[0] = {0, 14, 0.5, 1.0, 0.0, 1.0, 2.45, false};
    segs[1] = {15, 29, 0.51, 0.998, 0.0, 2.45, 3.9, false};  // intersection at s = 0.2
    auto refined = enforce_continuity(segs, s.s);
    const auto merged = merge_overshoot(refined, s);
    CHECK(merged.size() == 1);
    check_tiling(merged, 30);
}

TEST_CASE("merge_overshoot keeps a well-separated kink") {
    Series s;
    for (int i = 0; i < 40; ++i) {
        const double x = 0.1 * i;
        s.s.push_back(x);
        s.y.push_back(i < 20 ? x : 4.0 - x + 2.0 * (x - 2.0));
    }
    auto segs = segment_dp(s, 1e-5);
    segs = enforce_continuity(std::move(segs), s.s);
    const std::size_t before = segs.size();
    const auto after = merge_overshoot(segs, s);
    CHECK(after.size() == before);
}

TEST_CASE("merge_overshoot terminates on fuzzed inputs and preserves tiling") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 12 + static_cast<int>(rng() % 60);
        const Series s = random_series(rng, n);
        const double eps =
            std::uniform_real_distribution<double>(0.0, 2.0)(rng);
        auto segs = segment_dp(s, eps);
        segs = enforce_continuity(std::move(segs), s.s);
        segs = merge_overshoot(std::move(segs), s);
        REQUIRE(segs.size() >= 1);
        check_tiling(segs, n);
    }
}

TEST_CASE("fit_pwc recovers generator parameters") {
    SUBCASE("linear curvature ramp, zero torsion") {
        const Polyline3D curve =
            gen_pwc_curve(PwlProfile{{0.0, 1.0}, {0.1, 0.1 + 0.02 * 10.0}},
                          PwlProfile::constant(0.0), 10.0, 2000);
        const PwcModel model = fit_pwc(curve, 0.5, 0.5);
        REQUIRE(model.kappa_segments.size() == 1);
        CHECK(model.kappa_segments[0].alpha == doctest::Approx(0.02).epsilon(0.05));
        CHECK(model.kappa_segments[0].beta == doctest::Approx(0.1).epsilon(0.05));
    }
    SUBCASE("constant-curvature arc has a flat single segment") {
        const Polyline3D curve = gen_pwc_curve(PwlProfile::constant(0.25),
                                               PwlProfile::constant(0.0), 12.0, 1500);
        const PwcModel model = fit_pwc(curve, 0.5, 0.5);
        REQUIRE(model.kappa_segments.size() == 1);
        CHECK(std::abs(model.kappa_segments[0].alpha) < 1e-3);
        CHECK(model.kappa_segments[0].beta == doctest::Approx(0.25).epsilon(0.02));
    }
}

TEST_CASE("model evaluation clamps outside the fitted range") {
    Series s = make_series({1, 1, 1, 2, 3, 4, 5, 5, 5, 5});
    auto segs = segment_dp(s, 0.01);
    CHECK_NOTHROW(eval_segments(segs, -10.0));
    CHECK_NOTHROW(eval_segments(segs, 100.0));
}
