// geometry.hpp - core value types shared by every pipeline stage:
// 2D/3D polylines, pinhole camera model, arc-length and uniform resampling.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pwc3d/errors.hpp"

namespace pwc3d {

// Image points use (u, v) = (horizontal, vertical) stored as x()/y().
using Point2 = Eigen::Vector2d;
using Point3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat34 = Eigen::Matrix<double, 3, 4>;

/// Ordered 2D skeleton of one view, base first, tip last.
struct OrderedPolyline2D {
    std::vector<Point2> points;

    OrderedPolyline2D() = default;
    explicit OrderedPolyline2D(std::vector<Point2> pts);

    std::size_t size() const { return points.size(); }
    const Point2& operator[](std::size_t i) const { return points[i]; }

    /// Throws InvalidInput unless there are >= 2 points, all finite,
    /// consecutive ones distinct.
    void validate() const;
};

/// Ordered 3D curve with cached cumulative arc length (first entry 0).
struct Polyline3D {
    std::vector<Point3> points;
    std::vector<double> cumulative_arclength;

    Polyline3D() = default;
    explicit Polyline3D(std::vector<Point3> pts);

    std::size_t size() const { return points.size(); }
    const Point3& operator[](std::size_t i) const { return points[i]; }
    double length() const { return cumulative_arclength.empty() ? 0.0 : cumulative_arclength.back(); }

    void validate() const;
};

/// Pinhole camera: intrinsics K, extrinsics [R|t] (world -> camera), and the
/// homography mapping this view's image plane onto the reference view
/// (identity for the reference view itself).
struct CameraModel {
    Mat3 intrinsics = Mat3::Identity();
    Mat34 extrinsics = Mat34::Identity();
    Mat3 homography_to_ref = Mat3::Identity();

    Mat34 projection() const { return intrinsics * extrinsics; }

    /// Depth of a world point along the optical axis.
    double depth(const Point3& x) const;

    /// Projects a world point to pixels; throws ProjectionDegenerate for
    /// points at or behind the camera plane.
    Point2 project(const Point3& x) const;

    /// Checks K upper-triangular with positive diagonal and R proper
    /// orthonormal (1e-9); throws InvalidInput otherwise.
    void validate() const;
};

/// Cumulative Euclidean chord lengths; first entry 0. Throws InvalidInput
/// for fewer than 2 points.
std::vector<double> arc_length(const std::vector<Point2>& pts);
std::vector<double> arc_length(const std::vector<Point3>& pts);

/// Resamples to exactly k points uniformly spaced in arc length, by linear
/// interpolation along chords. Endpoints are copied bit-exactly.
OrderedPolyline2D resample_uniform(const OrderedPolyline2D& poly, std::size_t k);
Polyline3D resample_uniform(const Polyline3D& poly, std::size_t k);

}  // namespace pwc3d
