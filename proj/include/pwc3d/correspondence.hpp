// correspondence.hpp - cross-view point correspondence: homography mapping,
// discrete Frechet coupling, and DLT triangulation to a 3D polyline.
#pragma once

#include <vector>

#include "pwc3d/geometry.hpp"

namespace pwc3d {

/// Monotone index coupling between two ordered point sequences plus the
/// discrete Frechet distance it realizes. Indices are 0-based; the first
/// pair is (0,0), the last (p-1,q-1), and each step advances at least one
/// index by exactly one.
struct Coupling {
    std::vector<std::pair<int, int>> pairs;
    double frechet_distance = 0.0;

    void validate(int p, int q) const;
};

/// Maps every point through H with dehomogenization; preserves order.
/// Throws ProjectionDegenerate when a point maps to the line at infinity.
OrderedPolyline2D apply_homography(const OrderedPolyline2D& poly, const Mat3& h);

/// Standard discrete Frechet dynamic program with backtracking. Ties in the
/// backtrack prefer the diagonal step, then advancing the second (reference)
/// sequence.
Coupling discrete_frechet(const OrderedPolyline2D& sp, const OrderedPolyline2D& sq);

/// Homogeneous DLT triangulation of one point from >= 2 views.
/// Throws TriangulationDegenerate for rank-deficient systems (parallel rays).
Point3 triangulate_point(const std::vector<Point2>& pixels,
                         const std::vector<CameraModel>& cameras);

/// Triangulates k matched pixels per view into an ordered 3D polyline.
Polyline3D triangulate(const std::vector<std::vector<Point2>>& matched,
                       const std::vector<CameraModel>& cameras);

/// Optional Gauss-Newton refinement of triangulated points against pixel
/// reprojection residuals (a light bundle-adjustment pass; off by default in
/// the pipeline).
Polyline3D refine_triangulation(const Polyline3D& curve,
                                const std::vector<std::vector<Point2>>& matched,
                                const std::vector<CameraModel>& cameras, int iterations = 5);

struct CorrespondenceOptions {
    std::size_t k = 200;
    bool refine = false;
};

struct CorrespondenceResult {
    Polyline3D curve;
    Coupling coupling_1_to_ref;
    Coupling coupling_3_to_ref;
    std::vector<std::vector<Point2>> matched;  // per view, k back-projected pixels
};

/// Full stage: resample each view to k, map views 1 and 3 onto the reference
/// (view 2) by homography, couple against the reference with the discrete
/// Frechet distance, expand each coupling to k one-to-one pairs, back-project
/// through the inverse homographies, and triangulate.
CorrespondenceResult correspond_and_triangulate(const std::vector<OrderedPolyline2D>& skeletons,
                                                const std::vector<CameraModel>& cameras,
                                                const CorrespondenceOptions& options = {});

/// Normalized-DLT homography from >= 4 point pairs (helper for calibration
/// fixtures; the pipeline itself takes homographies as inputs).
Mat3 estimate_homography(const std::vector<Point2>& from, const std::vector<Point2>& to);

}  // namespace pwc3d
