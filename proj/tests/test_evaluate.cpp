#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pwc3d/evaluate.hpp"
#include "pwc3d/synthetic.hpp"
#include "testutil.hpp"

using namespace pwc3d;

TEST_CASE("goodness trivial values") {
    const auto helix = testutil::analytic_helix(1.0, 0.5, 3 * M_PI, 80);
    const auto perfect = goodness(helix, helix);
    CHECK(perfect.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(perfect.sse == 0.0);
    CHECK(perfect.per_section.at("entire").mean_error == 0.0);

    Point3 centroid = Point3::Zero();
    for (const auto& p : helix.points) centroid += p;
    centroid /= static_cast<double>(helix.size());
    Polyline3D flat;
    flat.points.assign(helix.size(), centroid);
    flat.cumulative_arclength.assign(helix.size(), 0.0);
    const auto zero = goodness(flat, helix);
    CHECK(zero.r_squared == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS_AS(goodness(helix, flat), DegenerateMetric);
}

TEST_CASE("sse of gaussian perturbations matches the chi-square expectation") {
    std::mt19937_64 rng(3);
    const double sigma = 0.05;
    std::normal_distribution<double> g(0.0, sigma);
    const auto base = testutil::analytic_helix(1.0, 0.5, 3 * M_PI, 200);
    double total = 0.0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        std::vector<Point3> noisy = base.points;
        for (auto& p : noisy) p += Point3(g(rng), g(rng), g(rng));
        Polyline3D perturbed;
        perturbed.points = std::move(noisy);
        perturbed.cumulative_arclength = base.cumulative_arclength;
        total += goodness(perturbed, base).sse;
    }
    const double expected = 3.0 * static_cast<double>(base.size()) * sigma * sigma;
    CHECK(total / trials == doctest::Approx(expected).epsilon(0.10));
}

TEST_CASE("reprojection error round trips and tracks offsets") {
    const Polyline3D truth = gen_pwc_curve(PwlProfile::linear(0.004, 0.012),
                                           PwlProfile::constant(0.001), 160.0, 800);
    const SyntheticScene scene = make_scene(truth, {});
    const ProjectedScene proj = project_scene(scene);

    SUBCASE("exact geometry projects back onto the skeleton") {
        const auto sections =
            reprojection_error(scene.truth_curve, proj.skeletons[1], scene.cameras[1]);
        CHECK(sections.at("entire").mean_error < 1e-6);
        CHECK(sections.at("base").mean_error < 1e-6);
        CHECK(sections.at("tip").mean_error < 1e-6);
    }

    SUBCASE("a 10 px image offset reads back as about 10 px") {
        std::vector<Point2> shifted;
        for (const auto& p : proj.skeletons[1].points) shifted.push_back(p + Point2(10, 0));
        const auto sections = reprojection_error(
            scene.truth_curve, OrderedPolyline2D(std::move(shifted)), scene.cameras[1]);
        CHECK(sections.at("entire").mean_error == doctest::Approx(10.0).epsilon(0.02));
    }
}

TEST_CASE("grid search degenerate point range evaluates once") {
    const Polyline3D observed = resample_uniform(
        gen_pwc_curve(PwlProfile::linear(0.1, 0.4), PwlProfile::constant(0.05), 8.0, 2000),
        150);
    GridSearchOptions opt;
    opt.eps_kappa_lo = opt.eps_kappa_hi = 1.0;
    opt.eps_tau_lo = opt.eps_tau_hi = 2.0;
    opt.max_iters = 3;
    opt.workers = 1;
    const auto result = grid_search(observed, opt);
    REQUIRE(result.history.size() == 1);
    CHECK(result.history[0].cells.size() == 1);
    CHECK(result.best_eps_kappa == 1.0);
    CHECK(result.best_eps_tau == 2.0);
}

TEST_CASE("grid search reports non-convergence on pure noise honestly") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<Point3> pts;
    Point3 p = Point3::Zero();
    for (int i = 0; i < 60; ++i) {
        p += Point3(0.5 + 0.2 * g(rng), g(rng), g(rng)).normalized() * 0.3;
        pts.push_back(p);
    }
    const Polyline3D observed(pts);
    GridSearchOptions opt;
    opt.grid = 4;
    opt.max_iters = 2;
    opt.eps_kappa_hi = 10.0;
    opt.eps_tau_hi = 10.0;
    opt.workers = 1;
    const auto result = grid_search(observed, opt);
    CHECK_FALSE(result.converged);
    CHECK(result.best_cell.r_squared < 0.999);
}

TEST_CASE("grid search is deterministic") {
    const Polyline3D observed = resample_uniform(
        gen_pwc_curve(PwlProfile::linear(0.1, 0.5), PwlProfile::constant(0.1), 6.0, 1500),
        120);
    GridSearchOptions opt;
    opt.grid = 3;
    opt.max_iters = 2;
    opt.eps_kappa_hi = 50.0;
    opt.eps_tau_hi = 50.0;
    opt.workers = 2;
    const auto a = grid_search(observed, opt);
    const auto b = grid_search(observed, opt);
    REQUIRE(a.history.size() == b.history.size());
    for (std::size_t it = 0; it < a.history.size(); ++it) {
        REQUIRE(a.history[it].cells.size() == b.history[it].cells.size());
        for (std::size_t c = 0; c < a.history[it].cells.size(); ++c) {
            CHECK(a.history[it].cells[c].r_squared == b.history[it].cells[c].r_squared);
            CHECK(a.history[it].cells[c].sse == b.history[it].cells[c].sse);
        }
    }
}

TEST_CASE("reconstruction beats any single global line fit") {
    const Polyline3D observed = resample_uniform(
        gen_pwc_curve(PwlProfile::linear(0.2, 0.6), PwlProfile::constant(0.15), 6.0, 2000),
        200);
    const PwcModel model = fit_pwc(observed, 0.01, 0.01);
    const auto rec = reconstruct(model, observed);
    const double r2 = goodness(rec.curve, observed).r_squared;

    // orthogonal projection onto the best PCA line maximizes line-fit R^2
    Point3 centroid = Point3::Zero();
    for (const auto& p : observed.points) centroid += p;
    centroid /= static_cast<double>(observed.size());
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto& p : observed.points)
        cov += (p - centroid) * (p - centroid).transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
    const Point3 dir = eig.eigenvectors().col(2);
    std::vector<Point3> on_line;
    for (const auto& p : observed.points)
        on_line.push_back(centroid + (p - centroid).dot(dir) * dir);
    Polyline3D line_fit;
    line_fit.points = std::move(on_line);
    line_fit.cumulative_arclength = observed.cumulative_arclength;
    const double r2_line = goodness(line_fit, observed).r_squared;
    CHECK(r2 >= r2_line);
}

TEST_CASE("tip trajectory and breakpoint density aggregates") {
    const auto helix = testutil::analytic_helix(1.0, 0.4, 2 * M_PI, 50);
    const auto statics = tip_trajectory({helix, helix, helix});
    REQUIRE(statics.tips.size() == 3);
    CHECK((statics.tips[0] - statics.tips[2]).norm() == 0.0);
    CHECK(statics.xy[0] == Point2(statics.tips[0].x(), statics.tips[0].y()));

    const auto single = tip_trajectory({helix});
    CHECK(single.tips.size() == 1);

    SUBCASE("scripted tip path is recovered") {
        std::vector<Polyline3D> frames;
        std::vector<Point3> script;
        for (int f = 0; f < 10; ++f) {
            std::vector<Point3> pts = helix.points;
            const Point3 shift(0.1 * f, 0.05 * f * f, 0.0);
            for (auto& p : pts) p += shift;
            script.push_back(pts.back());
            frames.emplace_back(pts);
        }
        const auto moving = tip_trajectory(frames);
        for (int f = 0; f < 10; ++f) CHECK((moving.tips[f] - script[f]).norm() < 1e-12);
    }

    SUBCASE("breakpoints per frame") {
        const Polyline3D one_piece = resample_uniform(
            gen_pwc_curve(PwlProfile::constant(0.3), PwlProfile::constant(0.0), 6.0, 1500),
            120);
        const PwcModel single_model = fit_pwc(one_piece, 1.0, 1.0);
        const auto density = breakpoint_density({single_model});
        CHECK(density.kappa[0].empty());

        // a curve with two curvature kinks
        const Polyline3D kinked = resample_uniform(
            gen_pwc_curve(PwlProfile{{0.0, 0.33, 0.66, 1.0}, {0.05, 0.45, 0.05, 0.45}},
                          PwlProfile::constant(0.0), 9.0, 3000),
            180);
        const PwcModel multi = fit_pwc(kinked, 0.01, 0.5);
        const auto kinks = breakpoint_density({multi});
        CHECK(kinks.kappa[0].size() >= 2);
    }
}
