// synthetic.hpp - ground-truth curve generation, synthetic three-camera
// scenes, and brute-force reference implementations used for verification.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pwc3d/pwc_fit.hpp"
#include "pwc3d/reconstruct.hpp"
#include "pwc3d/skeleton.hpp"

namespace pwc3d {

/// Piecewise-linear profile spec for the generator: value breakpoints over
/// [0, 1] of normalized arc length, linearly interpolated.
struct PwlProfile {
    std::vector<double> at;      // normalized arc-length knots, strictly increasing, 0..1
    std::vector<double> value;   // same count

    double eval(double u) const;

    static PwlProfile constant(double v) { return {{0.0, 1.0}, {v, v}}; }
    static PwlProfile linear(double v0, double v1) { return {{0.0, 1.0}, {v0, v1}}; }
};

/// Forward-integrates a curve with the given curvature/torsion profiles from
/// the canonical frame (T=x, N=y, B=z) at the origin. n >= 2000 recommended
/// for oracle-grade fidelity. stats, when given, receives the frame
/// integration bookkeeping.
Polyline3D gen_pwc_curve(const PwlProfile& kappa, const PwlProfile& tau, double length,
                         std::size_t n, IntegrationStats* stats = nullptr);

struct SyntheticScene {
    Polyline3D truth_curve;
    std::vector<CameraModel> cameras;  // 3 views, view 2 (index 1) is the reference
    double pixel_noise_sigma = 0.0;
    std::uint64_t seed = 0;
};

enum class CameraRig {
    yaw60,       // three cameras at -60/0/+60 degrees yaw around the scene
    translated,  // three parallel cameras on a horizontal baseline
};

struct SceneOptions {
    CameraRig rig = CameraRig::yaw60;
    double standoff = 500.0;        // camera distance from the scene center
    double focal_px = 1400.0;
    Point2 principal_point = Point2(960.0, 540.0);
    double baseline = 150.0;        // translated rig spacing
    double pixel_noise_sigma = 0.0;
    std::uint64_t seed = 1;
};

/// Builds the three-camera scene around the curve: cameras look at the curve
/// centroid, and view-to-reference homographies are estimated from synthetic
/// marker points on a background plane through the centroid (exactly the
/// plane-induced homography, obtained the same way the pipeline would).
SyntheticScene make_scene(Polyline3D truth_curve, const SceneOptions& options = {});

struct ProjectedScene {
    std::vector<OrderedPolyline2D> skeletons;     // ordered, per view
    std::vector<std::optional<PixelSet>> pixels;  // rasterized variants when requested
};

struct ProjectOptions {
    bool rasterize = false;
    bool shuffle_pixels = true;
};

/// Pinhole projection of the truth curve into every view with seeded
/// Gaussian pixel noise; optionally rasterizes to shuffled pixel sets for
/// exercising the skeleton ordering. Throws FrustumViolation for points at
/// or behind a camera.
ProjectedScene project_scene(const SyntheticScene& scene, const ProjectOptions& options = {});

/// Bresenham rasterization of a 2D polyline into an 8-connected pixel chain,
/// keeping first-visit order. Returns pixels plus the generator index of
/// each pixel's first emission.
std::pair<std::vector<Pixel>, std::vector<int>> rasterize_polyline(
    const std::vector<Point2>& points);

struct BruteForcePartition {
    double cost = 0.0;
    std::vector<std::pair<int, int>> ranges;  // inclusive index ranges
};

/// Exhaustive minimum of the penalized segmentation objective over all
/// contiguous partitions (series length <= 30). Independent of the DP path:
/// least squares and residuals are recomputed directly per block.
BruteForcePartition brute_force_partition(const Series& series, double epsilon,
                                          const SegmentationParams& params = {});

/// Plain recursive minimax over all monotone couplings, no memoization.
/// Limited to |sp| * |sq| <= 64.
double brute_force_frechet(const OrderedPolyline2D& sp, const OrderedPolyline2D& sq);

}  // namespace pwc3d
