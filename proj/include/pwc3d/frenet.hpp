// frenet.hpp - discrete Frenet frames, curvature, and torsion along an
// ordered 3D polyline.
#pragma once

#include <vector>

#include "pwc3d/geometry.hpp"

namespace pwc3d {

enum class SampleStatus {
    interior,      // full frame computed from neighbors
    propagated,    // normal undefined on a locally straight run; copied
    extrapolated,  // endpoint; copied from the nearest interior sample
};

struct FrenetSample {
    Point3 tangent = Point3::UnitX();
    Point3 normal = Point3::UnitY();
    Point3 binormal = Point3::UnitZ();
    double kappa = 0.0;  // curvature per unit length
    double tau = 0.0;    // signed torsion per unit length
    double s = 0.0;      // arc-length position
    SampleStatus status = SampleStatus::interior;
};

struct FrenetSeries {
    std::vector<FrenetSample> samples;
    std::string boundary_policy = "copy_nearest_interior";

    std::size_t size() const { return samples.size(); }
    const FrenetSample& operator[](std::size_t i) const { return samples[i]; }
};

/// Tangents from forward chords, normals from tangent differences
/// (orthogonalized against the tangent), binormal as their cross product.
/// Endpoints copy their nearest interior frame and are flagged extrapolated;
/// locally straight runs get their normal from the nearest defined sample
/// and are flagged propagated. Threshold for "straight": turning magnitude
/// below eps_straight.
FrenetSeries discrete_frames(const Polyline3D& c, double eps_straight = 1e-8);

/// discrete_frames plus curvature (turning magnitude over the local arc
/// step) and signed torsion (binormal rate projected on the negative
/// normal).
FrenetSeries discrete_curvature_torsion(const Polyline3D& c, double eps_straight = 1e-8);

}  // namespace pwc3d
