// correspondence.cpp - homography mapping, discrete Frechet coupling with
// backtracking, DLT triangulation, and the three-view matching stage.
#include "pwc3d/correspondence.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace pwc3d {
namespace {

Point2 map_point(const Mat3& h, const Point2& p) {
    const Eigen::Vector3d q = h * Eigen::Vector3d(p.x(), p.y(), 1.0);
    if (std::abs(q.z()) < 1e-12)
        throw ProjectionDegenerate("apply_homography: point maps to infinity");
    return Point2(q.x() / q.z(), q.y() / q.z());
}

Point2 interpolate_at(const std::vector<Point2>& pts, double f) {
    const double clamped = std::clamp(f, 0.0, static_cast<double>(pts.size() - 1));
    const std::size_t lo = static_cast<std::size_t>(std::floor(clamped));
    const std::size_t hi = std::min(lo + 1, pts.size() - 1);
    const double t = clamped - static_cast<double>(lo);
    return pts[lo] + t * (pts[hi] - pts[lo]);
}

// Converts a monotone coupling into one fractional partner index per
// reference index by averaging stalled steps, so k one-to-one pairs can be
// sampled along the coupling path.
std::vector<double> partner_index_per_reference(const Coupling& coupling, int q) {
    std::vector<double> sum(static_cast<std::size_t>(q), 0.0);
    std::vector<int> count(static_cast<std::size_t>(q), 0);
    for (const auto& [a, b] : coupling.pairs) {
        sum[static_cast<std::size_t>(b)] += a;
        count[static_cast<std::size_t>(b)] += 1;
    }
    std::vector<double> partner(static_cast<std::size_t>(q));
    for (int b = 0; b < q; ++b) {
        if (count[static_cast<std::size_t>(b)] == 0)
            throw NumericalFailure("coupling does not cover reference index");
        partner[static_cast<std::size_t>(b)] =
            sum[static_cast<std::size_t>(b)] / count[static_cast<std::size_t>(b)];
    }
    return partner;
}

// Sharpens each coupled pair below sample resolution, inside a small index
// window around the coupling's estimate (the window keeps matches off the
// wrong branch at image self-crossings; kept monotone):
//  - preferred: intersect the partner polyline with the reference pixel's
//    epipolar line, the geometrically exact correspondence;
//  - fallback where the curve runs along the epipolar line: closest point
//    on the homography-mapped polyline.
constexpr int kRefineWindow = 6;

void refine_partner_indices(std::vector<double>& partner,
                            const std::vector<Point2>& mapped,
                            const std::vector<Point2>& reference) {
    const int n = static_cast<int>(mapped.size());
    double previous = 0.0;
    for (std::size_t t = 0; t < partner.size(); ++t) {
        const Point2& target = reference[t];
        const int lo = std::max(0, static_cast<int>(std::floor(partner[t])) - kRefineWindow);
        const int hi =
            std::min(n - 2, static_cast<int>(std::ceil(partner[t])) + kRefineWindow - 1);
        double best_u = partner[t];
        double best_d = std::numeric_limits<double>::max();
        for (int j = lo; j <= hi; ++j) {
            const Point2 a = mapped[static_cast<std::size_t>(j)];
            const Point2 d = mapped[static_cast<std::size_t>(j) + 1] - a;
            const double len2 = d.squaredNorm();
            const double u = len2 > 0.0 ? std::clamp(d.dot(target - a) / len2, 0.0, 1.0) : 0.0;
            const double dist = (a + u * d - target).norm();
            if (dist < best_d) {
                best_d = dist;
                best_u = static_cast<double>(j) + u;
            }
        }
        partner[t] = t == 0 ? best_u : std::max(best_u, previous);
        previous = partner[t];
    }
}

// Fundamental matrix mapping reference-view pixels to epipolar lines in the
// partner view.
Mat3 fundamental_from_cameras(const CameraModel& partner, const CameraModel& reference) {
    const Mat34 pr = reference.projection();
    const Mat34 pp = partner.projection();
    // reference camera center (null space of its projection); full V since
    // the projection is wide
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(pr, Eigen::ComputeFullV);
    const Eigen::Vector4d center = svd.matrixV().col(3);
    const Eigen::Vector3d epipole = pp * center;
    Mat3 ex;
    ex << 0, -epipole.z(), epipole.y(), epipole.z(), 0, -epipole.x(), -epipole.y(),
        epipole.x(), 0;
    const Eigen::MatrixXd pr_pinv =
        pr.transpose() * (pr * pr.transpose()).inverse();
    return ex * pp * pr_pinv;
}

// Epipolar stage: per reference index, the crossing of the partner polyline
// with the reference pixel's epipolar line nearest the closest-point
// estimate, searched in a window wide enough to absorb homography parallax
// skew. Wrong-crossing picks near image crests appear as isolated jumps, so
// the raw picks are median-filtered, clipped to the filtered trend, and made
// monotone.
void refine_partner_indices_epipolar(std::vector<double>& partner,
                                     const std::vector<Point2>& partner_pixels,
                                     const std::vector<Point2>& reference_pixels,
                                     const Mat3& fundamental) {
    const int n = static_cast<int>(partner_pixels.size());
    const int window = std::max(8, n / 8);
    std::vector<double> picked(partner.size());
    std::vector<double> confidence(partner.size(), 0.0);
    for (std::size_t t = 0; t < partner.size(); ++t) {
        const Point2& x_ref = reference_pixels[t];
        const Eigen::Vector3d line =
            fundamental * Eigen::Vector3d(x_ref.x(), x_ref.y(), 1.0);
        const double line_norm = std::hypot(line.x(), line.y());
        const int lo = std::max(0, static_cast<int>(std::floor(partner[t])) - window);
        const int hi = std::min(n - 2, static_cast<int>(std::ceil(partner[t])) + window - 1);
        double best_u = partner[t];
        double best_gap = std::numeric_limits<double>::max();
        double best_conf = 0.0;
        if (line_norm > 1e-12) {
            for (int j = lo; j <= hi; ++j) {
                const Point2 a = partner_pixels[static_cast<std::size_t>(j)];
                const Point2 b = partner_pixels[static_cast<std::size_t>(j) + 1];
                const double sa = (line.x() * a.x() + line.y() * a.y() + line.z()) / line_norm;
                const double sb = (line.x() * b.x() + line.y() * b.y() + line.z()) / line_norm;
                if (sa == sb) continue;
                const double u = sa / (sa - sb);
                if (u < 0.0 || u > 1.0) continue;
                const double cand = static_cast<double>(j) + u;
                const double gap = std::abs(cand - partner[t]);
                if (gap < best_gap) {
                    best_gap = gap;
                    best_u = cand;
                    // crossing angle between curve and epipolar line
                    best_conf = std::abs(sa - sb) / std::max(1e-12, (b - a).norm());
                }
            }
        }
        picked[t] = best_u;
        confidence[t] = best_conf;
    }

    // Tangency zones (curve nearly parallel to its epipolar lines) make the
    // pointwise match ill-posed and can hand back a smooth but wrong branch;
    // the pairing is interpolated across them from the well-conditioned
    // sides instead.
    constexpr double kMinCrossingAngle = 0.25;  // sin of the crossing angle
    std::vector<double> blended = picked;
    std::ptrdiff_t last_good = -1;
    const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(picked.size());
    for (std::ptrdiff_t t = 0; t <= m; ++t) {
        const bool good = t < m && confidence[static_cast<std::size_t>(t)] >= kMinCrossingAngle;
        if (!good && t < m) continue;
        if (t - last_good > 1) {
            // fill (last_good, t) by interpolation between good anchors,
            // falling back to the input estimate at the ends
            const double left =
                last_good >= 0 ? picked[static_cast<std::size_t>(last_good)] : -1.0;
            const double right = t < m ? picked[static_cast<std::size_t>(t)] : -1.0;
            for (std::ptrdiff_t i = last_good + 1; i < t; ++i) {
                const std::size_t ui = static_cast<std::size_t>(i);
                if (left >= 0.0 && right >= 0.0) {
                    const double w = static_cast<double>(i - last_good) /
                                     static_cast<double>(t - last_good);
                    blended[ui] = left + w * (right - left);
                } else if (left >= 0.0) {
                    blended[ui] = std::max(partner[ui], left);
                } else if (right >= 0.0) {
                    blended[ui] = std::min(partner[ui], right);
                } else {
                    blended[ui] = partner[ui];
                }
            }
        }
        last_good = t;
    }

    // median filter against isolated wrong crossings, clip to the trend,
    // enforce monotonicity
    std::vector<double> trend(blended.size());
    std::vector<double> buffer;
    for (std::size_t t = 0; t < blended.size(); ++t) {
        const std::size_t lo = t >= 3 ? t - 3 : 0;
        const std::size_t hi = std::min(blended.size() - 1, t + 3);
        buffer.assign(blended.begin() + static_cast<std::ptrdiff_t>(lo),
                      blended.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
        std::nth_element(buffer.begin(), buffer.begin() + buffer.size() / 2, buffer.end());
        trend[t] = buffer[buffer.size() / 2];
    }
    double previous = 0.0;
    for (std::size_t t = 0; t < blended.size(); ++t) {
        double value = std::clamp(blended[t], trend[t] - 3.0, trend[t] + 3.0);
        if (t > 0) value = std::max(value, previous);
        partner[t] = value;
        previous = value;
    }
}

}  // namespace

void Coupling::validate(int p, int q) const {
    if (pairs.empty()) throw InvalidInput("Coupling: empty");
    if (pairs.front() != std::pair<int, int>(0, 0))
        throw InvalidInput("Coupling: must start at (0,0)");
    if (pairs.back() != std::pair<int, int>(p - 1, q - 1))
        throw InvalidInput("Coupling: must end at (p-1,q-1)");
    for (std::size_t i = 1; i < pairs.size(); ++i) {
        const int da = pairs[i].first - pairs[i - 1].first;
        const int db = pairs[i].second - pairs[i - 1].second;
        if (da < 0 || da > 1 || db < 0 || db > 1 || (da == 0 && db == 0))
            throw InvalidInput("Coupling: non-monotone step");
    }
}

OrderedPolyline2D apply_homography(const OrderedPolyline2D& poly, const Mat3& h) {
    std::vector<Point2> out;
    out.reserve(poly.size());
    for (const auto& p : poly.points) out.push_back(map_point(h, p));
    return OrderedPolyline2D(std::move(out));
}

Coupling discrete_frechet(const OrderedPolyline2D& sp, const OrderedPolyline2D& sq) {
    const int p = static_cast<int>(sp.size());
    const int q = static_cast<int>(sq.size());
    if (p == 0 || q == 0) throw InvalidInput("discrete_frechet: empty polyline");

    auto dist = [&](int i, int j) { return (sp[static_cast<std::size_t>(i)] -
                                            sq[static_cast<std::size_t>(j)]).norm(); };
    std::vector<double> dp(static_cast<std::size_t>(p) * q);
    auto at = [&](int i, int j) -> double& { return dp[static_cast<std::size_t>(i) * q + j]; };

    at(0, 0) = dist(0, 0);
    for (int i = 1; i < p; ++i) at(i, 0) = std::max(at(i - 1, 0), dist(i, 0));
    for (int j = 1; j < q; ++j) at(0, j) = std::max(at(0, j - 1), dist(0, j));
    for (int i = 1; i < p; ++i)
        for (int j = 1; j < q; ++j)
            at(i, j) = std::max(dist(i, j),
                                std::min({at(i - 1, j - 1), at(i, j - 1), at(i - 1, j)}));

    Coupling out;
    out.frechet_distance = at(p - 1, q - 1);
    int i = p - 1, j = q - 1;
    out.pairs.emplace_back(i, j);
    while (i > 0 || j > 0) {
        double best = std::numeric_limits<double>::max();
        int ni = i, nj = j;
        // tie order: diagonal, then advancing the reference index j
        if (i > 0 && j > 0 && at(i - 1, j - 1) < best) { best = at(i - 1, j - 1); ni = i - 1; nj = j - 1; }
        if (j > 0 && at(i, j - 1) < best) { best = at(i, j - 1); ni = i; nj = j - 1; }
        if (i > 0 && at(i - 1, j) < best) { ni = i - 1; nj = j; }
        i = ni;
        j = nj;
        out.pairs.emplace_back(i, j);
    }
    std::reverse(out.pairs.begin(), out.pairs.end());
    out.validate(p, q);
    return out;
}

Point3 triangulate_point(const std::vector<Point2>& pixels,
                         const std::vector<CameraModel>& cameras) {
    if (pixels.size() != cameras.size() || pixels.size() < 2)
        throw InvalidInput("triangulate_point: need matching pixels for >= 2 views");
    Eigen::MatrixXd a(2 * pixels.size(), 4);
    for (std::size_t v = 0; v < pixels.size(); ++v) {
        const Mat34 pm = cameras[v].projection();
        a.row(2 * v) = pixels[v].x() * pm.row(2) - pm.row(0);
        a.row(2 * v + 1) = pixels[v].y() * pm.row(2) - pm.row(1);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(2) < 1e-10 * sv(0))
        throw TriangulationDegenerate("triangulate_point: rank-deficient system (parallel rays)");
    const Eigen::Vector4d x = svd.matrixV().col(3);
    if (std::abs(x(3)) < 1e-12 * x.head<3>().norm())
        throw TriangulationDegenerate("triangulate_point: point at infinity");
    return x.head<3>() / x(3);
}

Polyline3D triangulate(const std::vector<std::vector<Point2>>& matched,
                       const std::vector<CameraModel>& cameras) {
    if (matched.size() != cameras.size() || matched.size() < 2)
        throw InvalidInput("triangulate: need >= 2 views");
    const std::size_t k = matched.front().size();
    for (const auto& m : matched)
        if (m.size() != k) throw InvalidInput("triangulate: unequal point counts across views");
    std::vector<Point3> out;
    out.reserve(k);
    std::vector<Point2> column(matched.size());
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t v = 0; v < matched.size(); ++v) column[v] = matched[v][i];
        out.push_back(triangulate_point(column, cameras));
    }
    return Polyline3D(std::move(out));
}

Polyline3D refine_triangulation(const Polyline3D& curve,
                                const std::vector<std::vector<Point2>>& matched,
                                const std::vector<CameraModel>& cameras, int iterations) {
    std::vector<Point3> out = curve.points;
    for (std::size_t i = 0; i < out.size(); ++i) {
        Point3 x = out[i];
        for (int it = 0; it < iterations; ++it) {
            Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
            Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
            for (std::size_t v = 0; v < cameras.size(); ++v) {
                const Mat34 pm = cameras[v].projection();
                const Eigen::Vector3d h = pm * Eigen::Vector4d(x.x(), x.y(), x.z(), 1.0);
                if (h.z() <= 1e-12) continue;
                const Point2 proj(h.x() / h.z(), h.y() / h.z());
                const Point2 r = proj - matched[v][i];
                Eigen::Matrix<double, 2, 3> jac;
                jac.row(0) = (pm.row(0).head<3>() - proj.x() * pm.row(2).head<3>()) / h.z();
                jac.row(1) = (pm.row(1).head<3>() - proj.y() * pm.row(2).head<3>()) / h.z();
                jtj += jac.transpose() * jac;
                jtr += jac.transpose() * r;
            }
            jtj.diagonal().array() += 1e-9;
            x -= jtj.ldlt().solve(jtr);
        }
        out[i] = x;
    }
    return Polyline3D(std::move(out));
}

CorrespondenceResult correspond_and_triangulate(const std::vector<OrderedPolyline2D>& skeletons,
                                                const std::vector<CameraModel>& cameras,
                                                const CorrespondenceOptions& options) {
    if (skeletons.size() != 3 || cameras.size() != 3)
        throw InvalidInput("correspond_and_triangulate: expects exactly 3 views");
    const std::size_t k = options.k;
    constexpr std::size_t kRef = 1;

    std::vector<OrderedPolyline2D> resampled;
    resampled.reserve(3);
    for (const auto& s : skeletons) resampled.push_back(resample_uniform(s, k));

    std::vector<OrderedPolyline2D> mapped;
    mapped.reserve(3);
    for (std::size_t v = 0; v < 3; ++v)
        mapped.push_back(apply_homography(resampled[v], cameras[v].homography_to_ref));

    CorrespondenceResult result;
    result.coupling_1_to_ref = discrete_frechet(mapped[0], mapped[kRef]);
    result.coupling_3_to_ref = discrete_frechet(mapped[2], mapped[kRef]);

    std::vector<double> a1 = partner_index_per_reference(result.coupling_1_to_ref,
                                                         static_cast<int>(k));
    std::vector<double> a3 = partner_index_per_reference(result.coupling_3_to_ref,
                                                         static_cast<int>(k));
    // sub-sample polish: closest point in the mapped plane as the local
    // estimate, then the exact epipolar intersection in the original frames
    refine_partner_indices(a1, mapped[0].points, mapped[kRef].points);
    refine_partner_indices(a3, mapped[2].points, mapped[kRef].points);
    const Mat3 f1 = fundamental_from_cameras(cameras[0], cameras[kRef]);
    const Mat3 f3 = fundamental_from_cameras(cameras[2], cameras[kRef]);
    refine_partner_indices_epipolar(a1, resampled[0].points, resampled[kRef].points, f1);
    refine_partner_indices_epipolar(a3, resampled[2].points, resampled[kRef].points, f3);

    result.matched.assign(3, std::vector<Point2>(k));
    for (std::size_t t = 0; t < k; ++t) {
        result.matched[0][t] = interpolate_at(resampled[0].points, a1[t]);
        result.matched[1][t] = resampled[kRef].points[t];
        result.matched[2][t] = interpolate_at(resampled[2].points, a3[t]);
    }

    std::vector<CameraModel> cams(cameras.begin(), cameras.end());
    result.curve = triangulate(result.matched, cams);
    if (options.refine) result.curve = refine_triangulation(result.curve, result.matched, cams);
    return result;
}

Mat3 estimate_homography(const std::vector<Point2>& from, const std::vector<Point2>& to) {
    if (from.size() != to.size() || from.size() < 4)
        throw InvalidInput("estimate_homography: need >= 4 point pairs");

    auto normalize = [](const std::vector<Point2>& pts, std::vector<Point2>& out) {
        Point2 mean = Point2::Zero();
        for (const auto& p : pts) mean += p;
        mean /= static_cast<double>(pts.size());
        double scale = 0;
        for (const auto& p : pts) scale += (p - mean).norm();
        scale = pts.size() * std::sqrt(2.0) / std::max(scale, 1e-12);
        out.clear();
        for (const auto& p : pts) out.push_back(scale * (p - mean));
        Mat3 t = Mat3::Identity();
        t(0, 0) = t(1, 1) = scale;
        t(0, 2) = -scale * mean.x();
        t(1, 2) = -scale * mean.y();
        return t;
    };

    std::vector<Point2> nf, nt;
    const Mat3 tf = normalize(from, nf);
    const Mat3 tt = normalize(to, nt);

    Eigen::MatrixXd a(2 * nf.size(), 9);
    for (std::size_t i = 0; i < nf.size(); ++i) {
        const double x = nf[i].x(), y = nf[i].y(), u = nt[i].x(), v = nt[i].y();
        a.row(2 * i) << -x, -y, -1, 0, 0, 0, u * x, u * y, u;
        a.row(2 * i + 1) << 0, 0, 0, -x, -y, -1, v * x, v * y, v;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinV);
    const Eigen::VectorXd h = svd.matrixV().col(8);
    Mat3 hn;
    hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
    Mat3 result = tt.inverse() * hn * tf;
    return result / result.norm();
}

}  // namespace pwc3d
