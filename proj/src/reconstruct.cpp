// reconstruct.cpp - Frenet frame propagation, trapezoidal point
// accumulation, and SVD rigid registration.
#include "pwc3d/reconstruct.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace pwc3d {
namespace {

// 4th-order truncated exponential of the Frenet system matrix
//   d[T;N;B]/ds = A [T;N;B],  A = [[0,k,0],[-k,0,t],[0,-t,0]]
// over one arc-length step.
Mat3 frame_step_matrix(double kappa, double tau, double ds) {
    Mat3 a;
    a << 0.0, kappa, 0.0, -kappa, 0.0, tau, 0.0, -tau, 0.0;
    a *= ds;
    const Mat3 a2 = a * a;
    const Mat3 a3 = a2 * a;
    const Mat3 a4 = a3 * a;
    return Mat3::Identity() + a + a2 / 2.0 + a3 / 6.0 + a4 / 24.0;
}

double orthonormality_defect(const Point3& t, const Point3& n, const Point3& b) {
    Mat3 f;
    f.row(0) = t;
    f.row(1) = n;
    f.row(2) = b;
    return (f * f.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff();
}

}  // namespace

FrameIntegration integrate_frames(const PwcModel& model, double delta_s,
                                  const IntegrationOptions& options) {
    if (!(delta_s > 0.0)) throw InvalidInput("integrate_frames: delta_s must be positive");
    const double total = model.total_length();
    if (!(total > 0.0)) throw InvalidInput("integrate_frames: model has no arc length");
    // full steps plus one partial step so the integration ends exactly at
    // the model's total arc length
    std::size_t full_steps = static_cast<std::size_t>(std::floor(total / delta_s + 1e-9));
    double remainder = total - static_cast<double>(full_steps) * delta_s;
    if (remainder < 1e-9 * total) remainder = 0.0;
    const std::size_t steps = full_steps + (remainder > 0.0 ? 1 : 0);

    FrameIntegration out;
    out.frames.reserve(steps + 1);

    FrenetSample cur = model.initial_frame;
    cur.s = model.arclength.front();
    // start from an exactly orthonormal copy of the initial frame
    cur.tangent.normalize();
    cur.normal = (cur.normal - cur.normal.dot(cur.tangent) * cur.tangent).normalized();
    cur.binormal = cur.tangent.cross(cur.normal);
    cur.kappa = model.kappa_at(cur.s);
    cur.tau = model.tau_at(cur.s);
    out.frames.push_back(cur);

    double drift_sum = 0.0;
    for (std::size_t i = 0; i < steps; ++i) {
        const double ds = (i < full_steps) ? delta_s : remainder;
        const double s_left = cur.s;
        const double s_eval = options.midpoint_eval ? s_left + 0.5 * ds : s_left;
        const double kappa = model.kappa_at(s_eval);
        const double tau = model.tau_at(s_eval);
        const Mat3 m = frame_step_matrix(kappa, tau, ds);

        Point3 t = m(0, 0) * cur.tangent + m(0, 1) * cur.normal + m(0, 2) * cur.binormal;
        Point3 n = m(1, 0) * cur.tangent + m(1, 1) * cur.normal + m(1, 2) * cur.binormal;
        Point3 b = m(2, 0) * cur.tangent + m(2, 1) * cur.normal + m(2, 2) * cur.binormal;
        if (!t.allFinite() || !n.allFinite() || !b.allFinite())
            throw NumericalFailure("integrate_frames: non-finite frame");

        const double drift = orthonormality_defect(t, n, b);
        drift_sum += drift;
        out.stats.max_step_drift = std::max(out.stats.max_step_drift, drift);

        // modified Gram-Schmidt: keep T, project N, rebuild B
        t.normalize();
        n = (n - n.dot(t) * t).normalized();
        b = t.cross(n);

        cur.tangent = t;
        cur.normal = n;
        cur.binormal = b;
        cur.s = s_left + ds;
        cur.kappa = model.kappa_at(cur.s);
        cur.tau = model.tau_at(cur.s);
        cur.status = SampleStatus::interior;
        out.frames.push_back(cur);
        out.stats.max_post_defect =
            std::max(out.stats.max_post_defect, orthonormality_defect(t, n, b));
    }
    out.stats.steps = steps;
    out.stats.mean_step_drift = steps > 0 ? drift_sum / static_cast<double>(steps) : 0.0;
    return out;
}

Polyline3D integrate_points(const std::vector<FrenetSample>& frames, const Point3& p0,
                            double delta_s) {
    if (frames.empty()) throw InvalidInput("integrate_points: no frames");
    std::vector<Point3> pts{p0};
    pts.reserve(frames.size());
    for (std::size_t i = 0; i + 1 < frames.size(); ++i) {
        // per-step arc length from the frame positions; the trailing step
        // may be shorter than delta_s
        double ds = frames[i + 1].s - frames[i].s;
        if (!(ds > 0.0)) ds = delta_s;
        pts.push_back(pts.back() + 0.5 * ds * (frames[i + 1].tangent + frames[i].tangent));
    }
    if (pts.size() < 2) {
        // single frame: a degenerate one-point "curve"; callers treat this
        // as the trivial case
        pts.push_back(p0);
        Polyline3D poly;
        poly.points = {p0};
        poly.cumulative_arclength = {0.0};
        return poly;
    }
    return Polyline3D(std::move(pts));
}

RegistrationResult register_rigid(const Polyline3D& p, const Polyline3D& c) {
    if (p.size() != c.size()) throw InvalidInput("register_rigid: point counts differ");
    if (p.size() < 3) throw InvalidInput("register_rigid: need at least 3 points");
    const std::size_t n = p.size();

    Point3 centroid_p = Point3::Zero(), centroid_c = Point3::Zero();
    for (std::size_t i = 0; i < n; ++i) {
        centroid_p += p[i];
        centroid_c += c[i];
    }
    centroid_p /= static_cast<double>(n);
    centroid_c /= static_cast<double>(n);

    Mat3 cov = Mat3::Zero();
    double spread = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cov += (p[i] - centroid_p) * (c[i] - centroid_c).transpose();
        spread += (p[i] - centroid_p).squaredNorm();
    }
    if (spread < 1e-24)
        throw DegenerateRegistration("register_rigid: source points coincide");

    Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 d = Mat3::Identity();
    if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0) d(2, 2) = -1.0;
    const Mat3 r = svd.matrixV() * d * svd.matrixU().transpose();

    RegistrationResult out;
    out.transform.rotation = r;
    out.transform.pivot = centroid_p;
    out.transform.translation = centroid_c;

    std::vector<Point3> registered;
    registered.reserve(n);
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        registered.push_back(out.transform.apply(p[i]));
        sse += (registered.back() - c[i]).squaredNorm();
    }
    out.registered = Polyline3D(std::move(registered));
    out.rms = std::sqrt(sse / static_cast<double>(n));
    return out;
}

ReconstructionResult reconstruct(const PwcModel& model, const Polyline3D& observed,
                                 const IntegrationOptions& options) {
    if (observed.size() < 3) throw InvalidInput("reconstruct: observed curve too short");
    const double delta_s =
        model.total_length() / static_cast<double>(observed.size() - 1);
    FrameIntegration frames = integrate_frames(model, delta_s, options);
    Polyline3D integrated = integrate_points(frames.frames, model.initial_point, delta_s);
    if (integrated.size() != observed.size())
        throw NumericalFailure("reconstruct: step count mismatch");
    RegistrationResult reg = register_rigid(integrated, observed);

    ReconstructionResult out;
    out.curve = std::move(reg.registered);
    out.integrated = std::move(integrated);
    out.transform = reg.transform;
    out.rms = reg.rms;
    out.stats = frames.stats;
    return out;
}

}  // namespace pwc3d
