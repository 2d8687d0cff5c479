// frenet.cpp - discrete Frenet frame construction with boundary and
// straight-run handling.
#include "pwc3d/frenet.hpp"

#include <cmath>

namespace pwc3d {
namespace {

// Deterministic unit vector perpendicular to t: Gram-Schmidt on the least
// aligned coordinate axis.
Point3 any_perpendicular(const Point3& t) {
    int axis = 0;
    double best = std::abs(t.x());
    if (std::abs(t.y()) < best) { axis = 1; best = std::abs(t.y()); }
    if (std::abs(t.z()) < best) axis = 2;
    Point3 e = Point3::Zero();
    e(axis) = 1.0;
    return (e - t.dot(e) * t).normalized();
}

}  // namespace

FrenetSeries discrete_frames(const Polyline3D& c, double eps_straight) {
    const std::size_t n = c.size();
    if (n < 3) throw InvalidInput("discrete_frames: need at least 3 points");

    std::vector<Point3> chord_dir(n - 1);
    std::vector<double> chord_len(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const Point3 d = c[i + 1] - c[i];
        chord_len[i] = d.norm();
        if (chord_len[i] == 0.0)
            throw InvalidInput("discrete_frames: repeated consecutive points");
        chord_dir[i] = d / chord_len[i];
    }

    FrenetSeries series;
    series.samples.resize(n);
    std::vector<bool> normal_defined(n, false);

    for (std::size_t i = 1; i + 1 < n; ++i) {
        FrenetSample& smp = series.samples[i];
        smp.s = c.cumulative_arclength[i];
        smp.tangent = chord_dir[i];
        const Point3 dt = chord_dir[i] - chord_dir[i - 1];
        const double turning = dt.norm();
        const double ds = 0.5 * (chord_len[i - 1] + chord_len[i]);
        smp.kappa = turning / ds;
        if (turning >= eps_straight) {
            // orthogonalize the turning direction against the tangent so the
            // stored frame is orthonormal to machine precision
            Point3 nrm = dt - dt.dot(smp.tangent) * smp.tangent;
            if (nrm.norm() < 1e-300) {
                smp.status = SampleStatus::propagated;
            } else {
                smp.normal = nrm.normalized();
                smp.binormal = smp.tangent.cross(smp.normal).normalized();
                smp.status = SampleStatus::interior;
                normal_defined[i] = true;
            }
        } else {
            smp.status = SampleStatus::propagated;
        }
    }

    // fill undefined normals from the nearest defined sample
    std::vector<std::size_t> defined;
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (normal_defined[i]) defined.push_back(i);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (normal_defined[i]) continue;
        FrenetSample& smp = series.samples[i];
        if (defined.empty()) {
            smp.normal = any_perpendicular(smp.tangent);
        } else {
            std::size_t nearest = defined.front();
            for (std::size_t d : defined)
                if (std::llabs(static_cast<long long>(d) - static_cast<long long>(i)) <
                    std::llabs(static_cast<long long>(nearest) - static_cast<long long>(i)))
                    nearest = d;
            const Point3 src = series.samples[nearest].normal;
            Point3 nrm = src - src.dot(smp.tangent) * smp.tangent;
            smp.normal = nrm.norm() < 1e-12 ? any_perpendicular(smp.tangent) : nrm.normalized();
        }
        smp.binormal = smp.tangent.cross(smp.normal).normalized();
    }

    // signed torsion where two consecutive genuine frames exist
    std::vector<bool> tau_defined(n, false);
    for (std::size_t i = 2; i + 1 < n; ++i) {
        if (!normal_defined[i] || !normal_defined[i - 1]) continue;
        FrenetSample& smp = series.samples[i];
        const Point3 db = smp.binormal - series.samples[i - 1].binormal;
        const double ds = 0.5 * (chord_len[i - 1] + chord_len[i]);
        const double magnitude = db.norm() / ds;
        const double sign = -db.dot(smp.normal) >= 0.0 ? 1.0 : -1.0;
        smp.tau = sign * magnitude;
        tau_defined[i] = true;
    }
    std::vector<std::size_t> tau_idx;
    for (std::size_t i = 0; i < n; ++i)
        if (tau_defined[i]) tau_idx.push_back(i);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (tau_defined[i] || tau_idx.empty()) continue;
        std::size_t nearest = tau_idx.front();
        for (std::size_t d : tau_idx)
            if (std::llabs(static_cast<long long>(d) - static_cast<long long>(i)) <
                std::llabs(static_cast<long long>(nearest) - static_cast<long long>(i)))
                nearest = d;
        series.samples[i].tau = series.samples[nearest].tau;
    }

    // endpoint samples copy the nearest interior frame
    series.samples[0] = series.samples[1];
    series.samples[0].s = c.cumulative_arclength[0];
    series.samples[0].status = SampleStatus::extrapolated;
    series.samples[n - 1] = series.samples[n - 2];
    series.samples[n - 1].s = c.cumulative_arclength[n - 1];
    series.samples[n - 1].status = SampleStatus::extrapolated;
    return series;
}

FrenetSeries discrete_curvature_torsion(const Polyline3D& c, double eps_straight) {
    return discrete_frames(c, eps_straight);
}

}  // namespace pwc3d
