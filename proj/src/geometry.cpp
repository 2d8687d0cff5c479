// geometry.cpp - polyline/camera value types, arc length, uniform resampling
#include "pwc3d/geometry.hpp"

#include <cmath>

namespace pwc3d {
namespace {

template <typename Vec>
bool finite(const Vec& v) {
    return v.allFinite();
}

template <typename Vec>
std::vector<double> cumulative_chords(const std::vector<Vec>& pts) {
    if (pts.size() < 2) throw InvalidInput("arc_length: need at least 2 points");
    std::vector<double> s(pts.size(), 0.0);
    for (std::size_t i = 1; i < pts.size(); ++i)
        s[i] = s[i - 1] + (pts[i] - pts[i - 1]).norm();
    return s;
}

// Uniform-chord resampler: places k points on the polyline so consecutive
// points sit at one common chord distance (solved by bisection). Equal
// chords make a second pass reproduce the vertices exactly, so resampling
// is idempotent to machine precision. First/last output are exact copies.
//
// Walks forward placing k-1 spheres of radius c; returns the leftover path
// length (negative when another chord no longer fits).
template <typename Vec>
double place_chords(const std::vector<Vec>& pts, const std::vector<double>& s, std::size_t k,
                    double c, std::vector<Vec>* out) {
    Vec q = pts.front();
    std::size_t seg = 0;
    double t = 0.0;
    if (out) {
        out->clear();
        out->push_back(q);
    }
    for (std::size_t step = 0; step + 1 < k; ++step) {
        bool found = false;
        std::size_t fseg = seg;
        double ft = t;
        double hit = 0.0;
        while (fseg + 1 < pts.size()) {
            const Vec d = pts[fseg + 1] - pts[fseg];
            const double a2 = d.squaredNorm();
            if (a2 > 0.0) {
                const Vec m = pts[fseg] - q;
                const double b = 2.0 * m.dot(d);
                const double cc = m.squaredNorm() - c * c;
                const double disc = b * b - 4.0 * a2 * cc;
                if (disc >= 0.0) {
                    const double sq = std::sqrt(disc);
                    // the path is inside the sphere until its first exit, so
                    // the smaller in-range root is the crossing
                    for (double u : {(-b - sq) / (2.0 * a2), (-b + sq) / (2.0 * a2)}) {
                        if (u > ft + 1e-15 && u <= 1.0) {
                            hit = u;
                            found = true;
                            break;
                        }
                    }
                }
            }
            if (found) break;
            ++fseg;
            ft = 0.0;
        }
        if (!found) return -static_cast<double>(k - 1 - step);  // c does not fit
        seg = fseg;
        t = hit;
        q = pts[seg] + t * (pts[seg + 1] - pts[seg]);
        if (out) out->push_back(q);
    }
    const double seg_len = s[seg + 1] - s[seg];
    return (1.0 - t) * seg_len + (s.back() - s[seg + 1]);
}

template <typename Vec>
std::vector<Vec> resample_points(const std::vector<Vec>& pts, std::size_t k) {
    if (k < 2) throw InvalidInput("resample_uniform: k must be >= 2");
    if (pts.size() < 2) throw InvalidInput("resample_uniform: need at least 2 points");
    const std::vector<double> s = cumulative_chords(pts);
    const double total = s.back();
    if (!(total > 0.0)) throw InvalidInput("resample_uniform: degenerate polyline");

    double lo = 0.0;                // always falls short
    double hi = total;              // always overshoots
    for (int iter = 0; iter < 90 && (hi - lo) > 1e-15 * total; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (place_chords(pts, s, k, mid, static_cast<std::vector<Vec>*>(nullptr)) >= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    std::vector<Vec> out;
    place_chords(pts, s, k, lo, &out);
    out.front() = pts.front();
    out.back() = pts.back();
    return out;
}

}  // namespace

OrderedPolyline2D::OrderedPolyline2D(std::vector<Point2> pts) : points(std::move(pts)) {
    validate();
}

void OrderedPolyline2D::validate() const {
    if (points.size() < 2) throw InvalidInput("OrderedPolyline2D: need at least 2 points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!finite(points[i])) throw InvalidInput("OrderedPolyline2D: non-finite point");
        if (i > 0 && points[i] == points[i - 1])
            throw InvalidInput("OrderedPolyline2D: repeated consecutive point");
    }
}

Polyline3D::Polyline3D(std::vector<Point3> pts) : points(std::move(pts)) {
    if (points.size() < 2) throw InvalidInput("Polyline3D: need at least 2 points");
    for (const auto& p : points)
        if (!finite(p)) throw InvalidInput("Polyline3D: non-finite point");
    cumulative_arclength = cumulative_chords(points);
}

void Polyline3D::validate() const {
    if (points.size() < 2 || cumulative_arclength.size() != points.size())
        throw InvalidInput("Polyline3D: size mismatch");
    if (cumulative_arclength.front() != 0.0)
        throw InvalidInput("Polyline3D: arclength must start at 0");
    double sum = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (cumulative_arclength[i] < cumulative_arclength[i - 1])
            throw InvalidInput("Polyline3D: arclength not nondecreasing");
        sum += (points[i] - points[i - 1]).norm();
    }
    const double tol = 1e-9 * std::max(1.0, sum);
    if (std::abs(cumulative_arclength.back() - sum) > tol)
        throw InvalidInput("Polyline3D: arclength inconsistent with chords");
}

double CameraModel::depth(const Point3& x) const {
    return extrinsics.row(2).head<3>().dot(x) + extrinsics(2, 3);
}

Point2 CameraModel::project(const Point3& x) const {
    Eigen::Vector4d xh(x.x(), x.y(), x.z(), 1.0);
    const Eigen::Vector3d p = projection() * xh;
    if (p.z() <= 1e-12) throw ProjectionDegenerate("project: point at or behind camera");
    return Point2(p.x() / p.z(), p.y() / p.z());
}

void CameraModel::validate() const {
    if (!(intrinsics(0, 0) > 0 && intrinsics(1, 1) > 0 && intrinsics(2, 2) > 0))
        throw InvalidInput("CameraModel: K diagonal must be positive");
    if (std::abs(intrinsics(1, 0)) > 1e-12 || std::abs(intrinsics(2, 0)) > 1e-12 ||
        std::abs(intrinsics(2, 1)) > 1e-12)
        throw InvalidInput("CameraModel: K must be upper-triangular");
    const Mat3 r = extrinsics.leftCols<3>();
    if ((r * r.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-9)
        throw InvalidInput("CameraModel: rotation not orthonormal");
    if (std::abs(r.determinant() - 1.0) > 1e-9)
        throw InvalidInput("CameraModel: rotation must have det +1");
}

std::vector<double> arc_length(const std::vector<Point2>& pts) { return cumulative_chords(pts); }
std::vector<double> arc_length(const std::vector<Point3>& pts) { return cumulative_chords(pts); }

OrderedPolyline2D resample_uniform(const OrderedPolyline2D& poly, std::size_t k) {
    return OrderedPolyline2D(resample_points(poly.points, k));
}

Polyline3D resample_uniform(const Polyline3D& poly, std::size_t k) {
    return Polyline3D(resample_points(poly.points, k));
}

}  // namespace pwc3d
