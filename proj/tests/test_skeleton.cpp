#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "pwc3d/skeleton.hpp"
#include "pwc3d/synthetic.hpp"
#include "testutil.hpp"

using namespace pwc3d;

namespace {

PixelSet shuffled_pixel_set(std::vector<Pixel> pixels, const Pixel& hint, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::shuffle(pixels.begin(), pixels.end(), rng);
    return PixelSet{std::move(pixels), hint};
}

// Independent 3x3 probe used to cross-check reported junctions: branch runs
// around the ring, counting a diagonally smeared crossing (4+ chain
// neighbors) as a junction as well.
int neighborhood_branches(const std::vector<Pixel>& pixels, const Pixel& c) {
    std::set<std::pair<int, int>> members;
    for (const auto& p : pixels) members.insert({p.x(), p.y()});
    const int ring[8][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
    int runs = 0, degree = 0;
    for (int i = 0; i < 8; ++i) {
        const bool cur = members.count({c.x() + ring[i][0], c.y() + ring[i][1]}) > 0;
        const bool prev =
            members.count({c.x() + ring[(i + 7) % 8][0], c.y() + ring[(i + 7) % 8][1]}) > 0;
        if (cur) ++degree;
        if (cur && !prev) ++runs;
    }
    return std::max(runs, degree - 1);
}

struct RasterCase {
    PixelSet pixels;
    std::vector<Pixel> raster;
    std::vector<int> order;
};

RasterCase rasterize_case(const std::vector<Point2>& curve, std::uint64_t seed) {
    auto [pixels, order] = rasterize_polyline(curve);
    RasterCase rc;
    rc.raster = pixels;
    rc.order = order;
    rc.pixels = shuffled_pixel_set(pixels, pixels.front(), seed);
    return rc;
}

}  // namespace

TEST_CASE("straight line is simple and orders in coordinate order") {
    std::vector<Pixel> line;
    for (int x = 0; x < 100; ++x) line.emplace_back(x, 5);
    const PixelSet ps = shuffled_pixel_set(line, {0, 5}, 2);

    const auto report = detect_intersection(ps);
    CHECK(report.topology == SkeletonTopology::simple);
    CHECK_FALSE(report.cross_point.has_value());

    const auto ordered = order_simple(ps);
    REQUIRE(ordered.size() == 100);
    for (int x = 0; x < 100; ++x) {
        CHECK(ordered[x].x() == doctest::Approx(x));
        CHECK(ordered[x].y() == doctest::Approx(5));
    }
}

TEST_CASE("two-pixel set orders with the hint first") {
    const PixelSet ps{{{4, 4}, {5, 5}}, {5, 5}};
    const auto ordered = order_simple(ps);
    REQUIRE(ordered.size() == 2);
    CHECK(ordered[0] == Point2(5, 5));
}

TEST_CASE("quarter-circle pixels order by angle") {
    std::vector<Point2> arc;
    for (double t = 0; t <= M_PI / 2 + 1e-9; t += 0.004)
        arc.emplace_back(200 + 80 * std::cos(t), 200 + 80 * std::sin(t));
    auto rc = rasterize_case(arc, 5);
    const auto ordered = order_simple(rc.pixels);
    CHECK(ordered.size() == rc.raster.size());
    const auto idx = testutil::generator_indices(rc.raster, rc.order, ordered.points);
    CHECK(testutil::strictly_increasing(idx));
}

TEST_CASE("disconnected pixels are rejected") {
    const PixelSet ps{{{0, 0}, {1, 0}, {10, 10}, {11, 10}}, {0, 0}};
    CHECK_THROWS_AS(detect_intersection(ps), InvalidInput);
    CHECK_THROWS_AS(order_simple(ps), InvalidInput);
}

TEST_CASE("loop shapes are detected and classified by tip distance") {
    std::mt19937_64 rng(31);
    const auto at_tip = rasterize_case(testutil::make_loop_curve(rng, true), 7);
    const auto report_tip = detect_intersection(at_tip.pixels);
    REQUIRE(report_tip.cross_point.has_value());
    CHECK(report_tip.topology == SkeletonTopology::loop_at_tip);
    CHECK(neighborhood_branches(at_tip.pixels.pixels, *report_tip.cross_point) >= 3);

    const auto interior = rasterize_case(testutil::make_loop_curve(rng, false), 8);
    const auto report_int = detect_intersection(interior.pixels);
    REQUIRE(report_int.cross_point.has_value());
    CHECK(report_int.topology == SkeletonTopology::loop_interior);
    CHECK(report_int.tip_distance > 10.0);
    CHECK(neighborhood_branches(interior.pixels.pixels, *report_int.cross_point) >= 3);
}

TEST_CASE("order_simple rejects a junction topology") {
    std::mt19937_64 rng(33);
    const auto rc = rasterize_case(testutil::make_loop_curve(rng, true), 9);
    CHECK_THROWS_AS(order_simple(rc.pixels), WrongTopology);
}

TEST_CASE("fit_direction_lines reproduces exact angles") {
    auto ray = [](double angle) {
        std::vector<Point2> pts;
        for (int i = 0; i < 10; ++i)
            pts.emplace_back(i * std::cos(angle), i * std::sin(angle));
        return pts;
    };
    {
        const auto [a, b] = fit_direction_lines(ray(0.0), ray(0.0), ray(M_PI));
        CHECK(a == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(b == doctest::Approx(M_PI).epsilon(1e-12));
    }
    {
        const auto [a, b] = fit_direction_lines(ray(0.0), ray(M_PI / 6), ray(M_PI / 2));
        CHECK(a == doctest::Approx(M_PI / 6));
        CHECK(b == doctest::Approx(M_PI / 2));
    }
    CHECK_THROWS_AS(fit_direction_lines({{1, 1}, {1, 1}, {1, 1}}, ray(0.0), ray(0.0)),
                    DegenerateLineFit);
}

TEST_CASE("fit_direction_lines tolerates pixel noise") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g(0.0, 0.5);
    int good = 0;
    for (int trial = 0; trial < 100; ++trial) {
        auto noisy_ray = [&](double angle) {
            std::vector<Point2> pts;
            for (int i = 0; i < 10; ++i)
                pts.emplace_back(2.5 * i * std::cos(angle) + g(rng),
                                 2.5 * i * std::sin(angle) + g(rng));
            return pts;
        };
        const auto [a, b] =
            fit_direction_lines(noisy_ray(0.0), noisy_ray(M_PI / 6), noisy_ray(M_PI / 2));
        if (std::abs(a - M_PI / 6) < 5.0 * M_PI / 180 && std::abs(b - M_PI / 2) < 5.0 * M_PI / 180)
            ++good;
    }
    CHECK(good >= 90);
}

TEST_CASE("self-intersecting skeletons order in generator order") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 10; ++trial) {
        for (bool at_tip : {true, false}) {
            const auto rc = rasterize_case(testutil::make_loop_curve(rng, at_tip),
                                           1000 + static_cast<std::uint64_t>(trial));
            const auto report = detect_intersection(rc.pixels);
            REQUIRE(report.cross_point.has_value());
            const auto ordered = order_with_intersection(rc.pixels, report);

            // all pixels except possibly the cross point, each exactly once
            CHECK(ordered.size() >= rc.raster.size() - 1);
            std::set<std::pair<long, long>> seen;
            for (const auto& p : ordered.points)
                CHECK(seen.insert({std::lround(p.x()), std::lround(p.y())}).second);

            const auto idx = testutil::generator_indices(rc.raster, rc.order, ordered.points);
            const auto graded =
                testutil::gradeable_indices(idx, ordered.points, report.cross_point);
            CHECK(testutil::strictly_increasing(graded));
        }
    }
}

TEST_CASE("branch choice follows the smaller turning angle") {
    // construct a case where the wrong branch would turn ~90 degrees and the
    // right one continues nearly straight
    std::mt19937_64 rng(55);
    const auto rc = rasterize_case(testutil::make_loop_curve(rng, true), 77);
    const auto report = detect_intersection(rc.pixels);
    REQUIRE(report.cross_point.has_value());
    const auto ordered = order_with_intersection(rc.pixels, report);
    const auto idx = testutil::generator_indices(rc.raster, rc.order, ordered.points);
    const auto graded = testutil::gradeable_indices(idx, ordered.points, report.cross_point);
    CHECK(testutil::strictly_increasing(graded));  // reversed loop would fail this
}

TEST_CASE("order_with_intersection validates its report") {
    std::vector<Pixel> line;
    for (int x = 0; x < 30; ++x) line.emplace_back(x, 0);
    const PixelSet ps{line, {0, 0}};
    IntersectionReport simple;
    CHECK_THROWS_AS(order_with_intersection(ps, simple), WrongTopology);

    IntersectionReport multi;
    multi.cross_point = Pixel(5, 0);
    multi.topology = SkeletonTopology::loop_at_tip;
    multi.junction_count = 2;
    CHECK_THROWS_AS(order_with_intersection(ps, multi), UnsupportedTopology);
}
