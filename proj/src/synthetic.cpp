// synthetic.cpp - ground-truth generators, synthetic camera scenes, and
// brute-force references.
#include "pwc3d/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include "pwc3d/correspondence.hpp"

namespace pwc3d {
namespace {

std::vector<LinearSegment> profile_to_segments(const PwlProfile& profile, double length) {
    if (profile.at.size() != profile.value.size() || profile.at.size() < 2)
        throw InvalidInput("PwlProfile: need matching knot/value lists (>= 2)");
    std::vector<LinearSegment> segments;
    for (std::size_t i = 0; i + 1 < profile.at.size(); ++i) {
        const double s0 = profile.at[i] * length;
        const double s1 = profile.at[i + 1] * length;
        if (s1 <= s0) throw InvalidInput("PwlProfile: knots must be strictly increasing");
        LinearSegment seg;
        seg.s_start = s0;
        seg.s_end = s1;
        seg.alpha = (profile.value[i + 1] - profile.value[i]) / (s1 - s0);
        seg.beta = profile.value[i] - seg.alpha * s0;
        segments.push_back(seg);
    }
    return segments;
}

Mat3 look_at_rotation(const Point3& center, const Point3& camera_pos) {
    const Point3 forward = (center - camera_pos).normalized();
    Point3 up(0.0, 1.0, 0.0);
    if (std::abs(forward.dot(up)) > 0.99) up = Point3(1.0, 0.0, 0.0);
    const Point3 right = up.cross(forward).normalized();
    const Point3 ydir = forward.cross(right);
    Mat3 r;
    r.row(0) = right;
    r.row(1) = ydir;
    r.row(2) = forward;
    return r;
}

CameraModel make_camera(const Point3& center, const Point3& pos, const SceneOptions& opt,
                        bool parallel_axes) {
    CameraModel cam;
    cam.intrinsics << opt.focal_px, 0.0, opt.principal_point.x(), 0.0, opt.focal_px,
        opt.principal_point.y(), 0.0, 0.0, 1.0;
    const Mat3 r = parallel_axes ? look_at_rotation(center, center - Point3(0, 0, opt.standoff))
                                 : look_at_rotation(center, pos);
    cam.extrinsics.leftCols<3>() = r;
    cam.extrinsics.col(3) = -r * pos;
    return cam;
}

}  // namespace

double PwlProfile::eval(double u) const {
    if (at.size() != value.size() || at.size() < 2)
        throw InvalidInput("PwlProfile: need matching knot/value lists (>= 2)");
    if (u <= at.front()) return value.front();
    if (u >= at.back()) return value.back();
    for (std::size_t i = 0; i + 1 < at.size(); ++i)
        if (u <= at[i + 1]) {
            const double t = (u - at[i]) / (at[i + 1] - at[i]);
            return value[i] + t * (value[i + 1] - value[i]);
        }
    return value.back();
}

Polyline3D gen_pwc_curve(const PwlProfile& kappa, const PwlProfile& tau, double length,
                         std::size_t n, IntegrationStats* stats) {
    if (n < 2) throw InvalidInput("gen_pwc_curve: need n >= 2");
    if (!(length > 0.0)) throw InvalidInput("gen_pwc_curve: length must be positive");
    PwcModel model;
    model.kappa_segments = profile_to_segments(kappa, length);
    model.tau_segments = profile_to_segments(tau, length);
    model.arclength = {0.0, length};
    model.initial_frame.tangent = Point3::UnitX();
    model.initial_frame.normal = Point3::UnitY();
    model.initial_frame.binormal = Point3::UnitZ();
    model.initial_point = Point3::Zero();
    const double ds = length / static_cast<double>(n - 1);
    IntegrationOptions opt;
    opt.midpoint_eval = true;  // keeps second-order accuracy on ramp profiles
    FrameIntegration frames = integrate_frames(model, ds, opt);
    if (stats) *stats = frames.stats;
    return integrate_points(frames.frames, model.initial_point, ds);
}

SyntheticScene make_scene(Polyline3D truth_curve, const SceneOptions& options) {
    SyntheticScene scene;
    scene.pixel_noise_sigma = options.pixel_noise_sigma;
    scene.seed = options.seed;

    Point3 center = Point3::Zero();
    for (const auto& p : truth_curve.points) center += p;
    center /= static_cast<double>(truth_curve.size());

    const bool translated = options.rig == CameraRig::translated;
    for (int v = 0; v < 3; ++v) {
        Point3 pos;
        if (translated) {
            pos = center + Point3((v - 1) * options.baseline, 0.0, -options.standoff);
        } else {
            const double yaw = (v - 1) * (60.0 * M_PI / 180.0);
            pos = center + options.standoff * Point3(-std::sin(yaw), 0.0, -std::cos(yaw));
        }
        scene.cameras.push_back(make_camera(center, pos, options, translated));
        scene.cameras.back().validate();
    }

    // Plane-induced homographies from synthetic marker corners on a
    // background plane through the scene center, normal to the reference
    // view axis.
    const Mat3 ref_r = scene.cameras[1].extrinsics.leftCols<3>();
    const Point3 e1 = ref_r.row(0);
    const Point3 e2 = ref_r.row(1);
    std::vector<Point3> markers;
    const double spread = 120.0;
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b)
            if (a != 0 || b != 0) markers.push_back(center + spread * (a * e1 + b * e2));

    std::vector<std::vector<Point2>> marker_px(3);
    for (int v = 0; v < 3; ++v)
        for (const auto& m : markers) marker_px[v].push_back(scene.cameras[v].project(m));
    scene.cameras[0].homography_to_ref = estimate_homography(marker_px[0], marker_px[1]);
    scene.cameras[1].homography_to_ref = Mat3::Identity();
    scene.cameras[2].homography_to_ref = estimate_homography(marker_px[2], marker_px[1]);

    scene.truth_curve = std::move(truth_curve);
    return scene;
}

ProjectedScene project_scene(const SyntheticScene& scene, const ProjectOptions& options) {
    if (scene.cameras.size() != 3) throw InvalidInput("project_scene: need 3 cameras");
    std::mt19937_64 rng(scene.seed);
    std::normal_distribution<double> noise(0.0, scene.pixel_noise_sigma);

    ProjectedScene out;
    for (std::size_t v = 0; v < 3; ++v) {
        const CameraModel& cam = scene.cameras[v];
        std::vector<Point2> pts;
        pts.reserve(scene.truth_curve.size());
        for (const auto& x : scene.truth_curve.points) {
            if (cam.depth(x) <= 0.0)
                throw FrustumViolation("project_scene: curve point behind camera");
            Point2 px = cam.project(x);
            if (scene.pixel_noise_sigma > 0.0) px += Point2(noise(rng), noise(rng));
            if (!pts.empty() && (px - pts.back()).norm() < 1e-12) continue;
            pts.push_back(px);
        }
        out.skeletons.emplace_back(std::move(pts));
    }

    out.pixels.assign(3, std::nullopt);
    if (options.rasterize) {
        for (std::size_t v = 0; v < 3; ++v) {
            auto [pixels, order] = rasterize_polyline(out.skeletons[v].points);
            (void)order;
            PixelSet ps;
            const Point2 first = out.skeletons[v].points.front();
            Pixel hint = pixels.front();
            double best = std::numeric_limits<double>::max();
            for (const auto& p : pixels) {
                const double d = (p.cast<double>() - first).norm();
                if (d < best) {
                    best = d;
                    hint = p;
                }
            }
            if (options.shuffle_pixels) {
                std::mt19937_64 shuffle_rng(scene.seed * 1000003ULL + v + 101ULL);
                std::shuffle(pixels.begin(), pixels.end(), shuffle_rng);
            }
            ps.pixels = std::move(pixels);
            ps.start_hint = hint;
            out.pixels[v] = std::move(ps);
        }
    }
    return out;
}

std::pair<std::vector<Pixel>, std::vector<int>> rasterize_polyline(
    const std::vector<Point2>& points) {
    if (points.size() < 2) throw InvalidInput("rasterize_polyline: need >= 2 points");
    std::vector<Pixel> pixels;
    std::vector<int> order;
    std::unordered_set<std::int64_t> seen;
    int counter = 0;
    auto key_of = [](const Pixel& p) {
        return (static_cast<std::int64_t>(p.x()) << 32) | static_cast<std::uint32_t>(p.y());
    };
    auto adjacent = [](const Pixel& a, const Pixel& b) {
        return (a - b).cwiseAbs().maxCoeff() <= 1;
    };
    auto emit = [&](int x, int y) {
        const Pixel p(x, y);
        if (seen.insert(key_of(p)).second) {
            // drop staircase corner fillers so the chain stays one pixel wide
            if (pixels.size() >= 2 && adjacent(p, pixels[pixels.size() - 2])) {
                seen.erase(key_of(pixels.back()));
                pixels.pop_back();
                order.pop_back();
            }
            pixels.push_back(p);
            order.push_back(counter);
        }
        ++counter;
    };
    int px = static_cast<int>(std::llround(points[0].x()));
    int py = static_cast<int>(std::llround(points[0].y()));
    emit(px, py);
    for (std::size_t i = 1; i < points.size(); ++i) {
        const int qx = static_cast<int>(std::llround(points[i].x()));
        const int qy = static_cast<int>(std::llround(points[i].y()));
        int x0 = px, y0 = py;
        const int dx = std::abs(qx - x0), sx = x0 < qx ? 1 : -1;
        const int dy = -std::abs(qy - y0), sy = y0 < qy ? 1 : -1;
        int err = dx + dy;
        while (x0 != qx || y0 != qy) {
            const int e2 = 2 * err;
            if (e2 >= dy) {
                err += dy;
                x0 += sx;
            }
            if (e2 <= dx && (x0 != qx || y0 != qy)) {
                err += dx;
                y0 += sy;
            }
            emit(x0, y0);
        }
        px = qx;
        py = qy;
    }
    return {std::move(pixels), std::move(order)};
}

BruteForcePartition brute_force_partition(const Series& series, double epsilon,
                                          const SegmentationParams& params) {
    const int n = static_cast<int>(series.size());
    if (n > 30) throw TooLarge("brute_force_partition: series longer than 30 samples");
    if (n < 2) throw InvalidInput("brute_force_partition: need >= 2 samples");
    if (epsilon < 0.0) throw InvalidInput("brute_force_partition: epsilon must be >= 0");
    const int min_len = std::max(2, params.min_segment_len);

    // independent block costs: direct least squares and residual sums
    auto block_cost = [&](int i, int j) {
        const double m = j - i + 1;
        double sum_s = 0, sum_y = 0, sum_ss = 0, sum_sy = 0;
        for (int t = i; t <= j; ++t) {
            sum_s += series.s[t];
            sum_y += series.y[t];
            sum_ss += series.s[t] * series.s[t];
            sum_sy += series.s[t] * series.y[t];
        }
        const double det = m * sum_ss - sum_s * sum_s;
        double alpha = 0.0, beta = sum_y / m;
        if (std::abs(det) > 1e-14 * std::max(1.0, m * sum_ss)) {
            alpha = (m * sum_sy - sum_s * sum_y) / det;
            beta = (sum_y - alpha * sum_s) / m;
        }
        double e = 0.0;
        for (int t = i; t <= j; ++t) {
            const double r = alpha * series.s[t] + beta - series.y[t];
            e += params.norm == FitNorm::l1_of_l2fit ? std::abs(r) : r * r;
        }
        return e;
    };

    BruteForcePartition best;
    best.cost = std::numeric_limits<double>::max();
    if (n < 2 * min_len) {
        best.cost = epsilon + block_cost(0, n - 1);
        best.ranges = {{0, n - 1}};
        return best;
    }

    std::vector<std::pair<int, int>> current;
    auto recurse = [&](auto&& self, int start, double cost) -> void {
        if (start == n) {
            if (cost < best.cost) {
                best.cost = cost;
                best.ranges = current;
            }
            return;
        }
        for (int end = start + min_len - 1; end < n; ++end) {
            const int remaining = n - 1 - end;
            if (remaining != 0 && remaining < min_len) continue;
            current.emplace_back(start, end);
            self(self, end + 1, cost + epsilon + block_cost(start, end));
            current.pop_back();
        }
    };
    recurse(recurse, 0, 0.0);
    return best;
}

double brute_force_frechet(const OrderedPolyline2D& sp, const OrderedPolyline2D& sq) {
    const int p = static_cast<int>(sp.size());
    const int q = static_cast<int>(sq.size());
    if (p * q > 64) throw TooLarge("brute_force_frechet: size bound exceeded");
    auto dist = [&](int i, int j) {
        return (sp[static_cast<std::size_t>(i)] - sq[static_cast<std::size_t>(j)]).norm();
    };
    auto rec = [&](auto&& self, int i, int j) -> double {
        const double d = dist(i, j);
        if (i == 0 && j == 0) return d;
        double reach = std::numeric_limits<double>::max();
        if (i > 0 && j > 0) reach = std::min(reach, self(self, i - 1, j - 1));
        if (i > 0) reach = std::min(reach, self(self, i - 1, j));
        if (j > 0) reach = std::min(reach, self(self, i, j - 1));
        return std::max(d, reach);
    };
    return rec(rec, p - 1, q - 1);
}

}  // namespace pwc3d
