// reconstruct.hpp - forward integration of a piecewise clothoid model into a
// 3D curve and rigid registration onto the observed polyline.
#pragma once

#include <vector>

#include "pwc3d/pwc_fit.hpp"

namespace pwc3d {

struct RigidTransform {
    Mat3 rotation = Mat3::Identity();
    Point3 translation = Point3::Zero();
    Point3 pivot = Point3::Zero();

    Point3 apply(const Point3& p) const { return rotation * (p - pivot) + translation; }
};

/// Orthonormality bookkeeping for the frame integration.
struct IntegrationStats {
    double max_post_defect = 0.0;   // after re-orthonormalization
    double max_step_drift = 0.0;    // single-step defect before correction
    double mean_step_drift = 0.0;
    std::size_t steps = 0;

    double drift_per_1000_steps() const { return mean_step_drift * 1000.0; }
};

struct IntegrationOptions {
    bool midpoint_eval = false;  // evaluate kappa/tau at the step midpoint
};

struct FrameIntegration {
    std::vector<FrenetSample> frames;
    IntegrationStats stats;
};

/// Propagates the initial frame along arc length with the 4th-order
/// truncated exponential of the Frenet system, one step per delta_s, with
/// modified Gram-Schmidt re-orthonormalization after every step. kappa/tau
/// are evaluated at the left step endpoint (or midpoint when requested).
FrameIntegration integrate_frames(const PwcModel& model, double delta_s,
                                  const IntegrationOptions& options = {});

/// Trapezoidal point accumulation from propagated tangents.
Polyline3D integrate_points(const std::vector<FrenetSample>& frames, const Point3& p0,
                            double delta_s);

struct RegistrationResult {
    RigidTransform transform;
    Polyline3D registered;
    double rms = 0.0;
};

/// Least-squares rigid alignment of p onto c (cross-covariance SVD with
/// reflection correction). The pivot is the centroid of p.
RegistrationResult register_rigid(const Polyline3D& p, const Polyline3D& c);

struct ReconstructionResult {
    Polyline3D curve;       // registered onto the observed polyline
    Polyline3D integrated;  // before registration
    RigidTransform transform;
    double rms = 0.0;
    IntegrationStats stats;
};

/// integrate_frames + integrate_points at delta_s = length/(k-1) with k
/// matching the observed point count, then rigid registration onto it.
ReconstructionResult reconstruct(const PwcModel& model, const Polyline3D& observed,
                                 const IntegrationOptions& options = {});

}  // namespace pwc3d
