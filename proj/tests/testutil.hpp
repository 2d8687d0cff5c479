// testutil.hpp - shared helpers for the test suites: parametric 2D curve
// generators with known traversal order, small random utilities.
#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

#include "pwc3d/geometry.hpp"
#include "pwc3d/synthetic.hpp"

namespace testutil {

using pwc3d::Point2;
using pwc3d::Point3;

inline std::vector<Point2> rotate_translate(std::vector<Point2> pts, double angle,
                                            const Point2& offset) {
    const double c = std::cos(angle), s = std::sin(angle);
    for (auto& p : pts) p = Point2(c * p.x() - s * p.y() + offset.x(),
                                   s * p.x() + c * p.y() + offset.y());
    return pts;
}

// Dense polyline of a stem + half-turn + return + quarter-turn + descent
// through the stem: a single transversal self-crossing with a controllable
// tail below the crossing. Points are emitted in traversal order.
inline std::vector<Point2> make_loop_curve(std::mt19937_64& rng, bool at_tip) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double r1 = 32.0 + 25.0 * u01(rng);
    const double back = 30.0 + 25.0 * u01(rng);
    const double r2 = 24.0 + std::min(18.0, 2.0 * r1 - 34.0 - 24.0) * u01(rng);
    const double stem = back + r2 + 25.0 + 60.0 * u01(rng);  // crossing well inside the stem
    const double tail = at_tip ? 1.0 + 6.0 * u01(rng) : 25.0 + 35.0 * u01(rng);

    std::vector<Point2> pts;
    const double step = 2.0;
    for (double x = 0.0; x <= stem; x += step) pts.emplace_back(x, 0.0);
    // half turn, radius r1, center (stem, r1)
    for (double a = -M_PI / 2; a <= M_PI / 2; a += step / r1)
        pts.emplace_back(stem + r1 * std::cos(a), r1 + r1 * std::sin(a));
    // straight back
    for (double x = stem; x >= stem - back; x -= step) pts.emplace_back(x, 2.0 * r1);
    // quarter turn down, center (stem - back, 2 r1 - r2)
    for (double a = M_PI / 2; a <= M_PI; a += step / r2)
        pts.emplace_back(stem - back + r2 * std::cos(a), 2.0 * r1 - r2 + r2 * std::sin(a));
    // descend through the stem
    const double x_cross = stem - back - r2;
    for (double y = 2.0 * r1 - r2; y >= -tail; y -= step) pts.emplace_back(x_cross, y);

    return rotate_translate(std::move(pts), 2.0 * M_PI * u01(rng),
                            Point2(400.0 + 200.0 * u01(rng), 400.0 + 200.0 * u01(rng)));
}

// Gentle random arc with bounded curvature and a self-distance check, so the
// rasterized skeleton is a clean junction-free chain.
inline std::vector<Point2> make_simple_curve(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int attempt = 0; attempt < 50; ++attempt) {
        const double length = 150.0 + 120.0 * u01(rng);
        const double k0 = (u01(rng) - 0.5) / 30.0;
        const double k1 = (u01(rng) - 0.5) / 30.0;
        double heading = 2.0 * M_PI * u01(rng);
        Point2 pos(0.0, 0.0);
        std::vector<Point2> pts{pos};
        const double step = 2.0;
        bool ok = true;
        double turn = 0.0;
        for (double s = 0.0; s < length; s += step) {
            const double kappa = k0 + (k1 - k0) * s / length;
            heading += kappa * step;
            turn += std::abs(kappa) * step;
            pos += step * Point2(std::cos(heading), std::sin(heading));
            pts.push_back(pos);
        }
        if (turn > 4.2) ok = false;  // guard against near-closing curls
        for (std::size_t i = 0; ok && i < pts.size(); i += 4)
            for (std::size_t j = i + 24; j < pts.size(); j += 4)
                if ((pts[i] - pts[j]).norm() < 5.0) {
                    ok = false;
                    break;
                }
        if (!ok) continue;
        return rotate_translate(std::move(pts), 0.0,
                                Point2(400.0 + 200.0 * u01(rng), 400.0 + 200.0 * u01(rng)));
    }
    throw std::runtime_error("make_simple_curve: generator failed");
}

// Maps ordered output points back to generator emission indices; -1 for
// pixels the rasterizer never emitted (should not happen).
inline std::vector<int> generator_indices(const std::vector<pwc3d::Pixel>& raster_pixels,
                                          const std::vector<int>& raster_order,
                                          const std::vector<Point2>& ordered_points) {
    std::vector<int> out;
    out.reserve(ordered_points.size());
    auto key = [](long long x, long long y) { return (x << 32) | (y & 0xffffffffLL); };
    std::unordered_map<long long, int> index;
    for (std::size_t i = 0; i < raster_pixels.size(); ++i)
        index[key(raster_pixels[i].x(), raster_pixels[i].y())] = raster_order[i];
    for (const auto& p : ordered_points) {
        const auto it = index.find(key(std::llround(p.x()), std::llround(p.y())));
        out.push_back(it == index.end() ? -1 : it->second);
    }
    return out;
}

inline bool strictly_increasing(const std::vector<int>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] <= v[i - 1]) return false;
    return true;
}

// Generator order restricted to pixels whose traversal order the
// rasterization actually preserves: the 3x3 block around a self-crossing
// collapses two passes onto shared and side-by-side pixels, so those few
// pixels carry no recoverable order and are skipped when grading.
inline std::vector<int> gradeable_indices(const std::vector<int>& idx,
                                          const std::vector<Point2>& ordered_points,
                                          const std::optional<pwc3d::Pixel>& cross) {
    std::vector<int> out;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] < 0) continue;
        if (cross) {
            const double dx = std::abs(ordered_points[i].x() - cross->x());
            const double dy = std::abs(ordered_points[i].y() - cross->y());
            if (std::max(dx, dy) <= 2.0) continue;
        }
        out.push_back(idx[i]);
    }
    return out;
}

// Analytic helix sampled uniformly in arc length, centered on the z axis.
inline pwc3d::Polyline3D analytic_helix(double r, double c, double t_max, std::size_t n) {
    std::vector<Point3> pts;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t_max * static_cast<double>(i) / static_cast<double>(n - 1);
        pts.emplace_back(r * std::cos(t), r * std::sin(t), c * t);
    }
    return pwc3d::Polyline3D(std::move(pts));
}

}  // namespace testutil
