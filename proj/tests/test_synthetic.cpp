#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pwc3d/frenet.hpp"
#include "pwc3d/synthetic.hpp"
#include "testutil.hpp"

using namespace pwc3d;

TEST_CASE("gen_pwc_curve constant curvature closes a circle of the right radius") {
    // kappa = 0.5 -> radius 2; length 4 pi = circumference
    const Polyline3D circle =
        gen_pwc_curve(PwlProfile::constant(0.5), PwlProfile::constant(0.0), 4 * M_PI, 4000);
    CHECK((circle.points.back() - circle.points.front()).norm() < 1e-3);
    // center = p0 + r * N0 = (0, 2, 0)
    const Point3 center(0.0, 2.0, 0.0);
    for (const auto& p : circle.points)
        CHECK((p - center).norm() == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("gen_pwc_curve constant curvature and torsion makes the analytic helix") {
    // kappa = tau = 0.5 -> r = c = 1
    const Polyline3D helix =
        gen_pwc_curve(PwlProfile::constant(0.5), PwlProfile::constant(0.5), 10.0, 4000);
    const auto series = discrete_curvature_torsion(helix);
    for (std::size_t i = 5; i + 5 < series.size(); i += 7) {
        CHECK(series[i].kappa == doctest::Approx(0.5).epsilon(0.01));
        CHECK(series[i].tau == doctest::Approx(0.5).epsilon(0.01));
    }
}

TEST_CASE("integrator convergence: successive refinements shrink at least 3.5x") {
    auto run = [](std::size_t n) {
        return gen_pwc_curve(PwlProfile::linear(0.2, 0.8), PwlProfile::linear(-0.2, 0.4), 5.0,
                             n);
    };
    const Polyline3D c1 = run(201), c2 = run(401), c3 = run(801);
    auto max_diff = [](const Polyline3D& a, const Polyline3D& b, std::size_t stride_a,
                       std::size_t stride_b) {
        double worst = 0.0;
        for (std::size_t i = 0; i * stride_a < a.size() && i * stride_b < b.size(); ++i)
            worst = std::max(worst, (a[i * stride_a] - b[i * stride_b]).norm());
        return worst;
    };
    const double d1 = max_diff(c1, c2, 1, 2);
    const double d2 = max_diff(c2, c3, 1, 2);
    CHECK(d1 / d2 >= 3.5);
}

TEST_CASE("project_scene pinhole basics") {
    std::vector<Point3> seg;
    for (int i = 0; i < 200; ++i) seg.emplace_back(-60.0 + 120.0 * i / 199.0, 3.0, 0.0);
    const SyntheticScene scene = make_scene(Polyline3D(seg), {});
    const ProjectedScene proj = project_scene(scene);
    REQUIRE(proj.skeletons.size() == 3);
    for (const auto& view : proj.skeletons) {
        // straight 3D segment projects to a straight 2D line
        const Point2 a = view.points.front();
        const Point2 b = view.points.back();
        const Point2 dir = (b - a).normalized();
        for (const auto& p : view.points) {
            const Point2 d = p - a;
            CHECK(std::abs(d.x() * dir.y() - d.y() * dir.x()) < 1e-6);
        }
    }
}

TEST_CASE("project_scene is deterministic for a fixed seed") {
    const Polyline3D truth = testutil::analytic_helix(25.0, 6.0, 3 * M_PI, 300);
    SceneOptions opt;
    opt.pixel_noise_sigma = 0.5;
    opt.seed = 42;
    const SyntheticScene scene = make_scene(truth, opt);
    const ProjectedScene a = project_scene(scene);
    const ProjectedScene b = project_scene(scene);
    for (int v = 0; v < 3; ++v) {
        REQUIRE(a.skeletons[v].size() == b.skeletons[v].size());
        for (std::size_t i = 0; i < a.skeletons[v].size(); ++i)
            CHECK(a.skeletons[v][i] == b.skeletons[v][i]);
    }
}

TEST_CASE("project_scene rejects points behind a camera") {
    std::vector<Point3> seg;
    for (int i = 0; i < 10; ++i) seg.emplace_back(0.0, 0.0, -1000.0 + 400.0 * i);
    SyntheticScene scene = make_scene(Polyline3D(seg), {});
    // drag the curve behind the reference camera
    for (auto& p : scene.truth_curve.points) p.z() -= 2000.0;
    CHECK_THROWS_AS(project_scene(scene), FrustumViolation);
}

TEST_CASE("rasterize_polyline emits an 8-connected first-visit chain") {
    std::mt19937_64 rng(14);
    const auto curve = testutil::make_simple_curve(rng);
    const auto [pixels, order] = rasterize_polyline(curve);
    REQUIRE(pixels.size() == order.size());
    for (std::size_t i = 1; i < pixels.size(); ++i) {
        CHECK(order[i] > order[i - 1]);  // first-visit order is increasing
        CHECK((pixels[i] - pixels[i - 1]).cwiseAbs().maxCoeff() <= 1);
    }
}

TEST_CASE("brute_force_partition matches known segmentations and enforces bounds") {
    Series s;
    for (int i = 0; i < 20; ++i) {
        s.s.push_back(i);
        s.y.push_back(i < 10 ? i : 18.0 - i);
    }
    const auto part = brute_force_partition(s, 0.01);
    REQUIRE(part.ranges.size() == 2);
    CHECK(std::abs(part.ranges[0].second - 9) <= 1);

    Series big;
    for (int i = 0; i < 31; ++i) {
        big.s.push_back(i);
        big.y.push_back(i);
    }
    CHECK_THROWS_AS(brute_force_partition(big, 1.0), TooLarge);
}

TEST_CASE("brute_force_frechet basics and bounds") {
    OrderedPolyline2D a({{0, 0}, {1, 0}, {2, 0}});
    CHECK(brute_force_frechet(a, a) == 0.0);

    std::vector<Point2> long_a, long_b;
    for (int i = 0; i < 9; ++i) {
        long_a.emplace_back(i, 0);
        long_b.emplace_back(i, 1);
    }
    CHECK_THROWS_AS(
        brute_force_frechet(OrderedPolyline2D(long_a), OrderedPolyline2D(long_b)), TooLarge);
}
