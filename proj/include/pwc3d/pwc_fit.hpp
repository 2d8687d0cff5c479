// pwc_fit.hpp - piecewise-linear fitting of curvature and torsion series by
// penalized dynamic programming, with breakpoint continuity refinement and
// overshoot merging.
#pragma once

#include <vector>

#include "pwc3d/frenet.hpp"
#include "pwc3d/geometry.hpp"

namespace pwc3d {

/// Residual norm reported (and minimized against the penalty) by the
/// segmentation: absolute residuals of the least-squares line, or their
/// squares.
enum class FitNorm { l1_of_l2fit, pure_l2 };

/// One fitted line over an inclusive sample index range. s_start/s_end are
/// the abscissa boundaries used for evaluation; they begin at the sample
/// midpoints and move to line intersections during continuity refinement.
struct LinearSegment {
    int start_index = 0;
    int end_index = 0;
    double alpha = 0.0;  // slope
    double beta = 0.0;   // intercept
    double fit_error = 0.0;
    double s_start = 0.0;
    double s_end = 0.0;
    bool parallel_flagged = false;

    double eval(double s) const { return alpha * s + beta; }
};

/// A scalar series sampled along arc length.
struct Series {
    std::vector<double> s;
    std::vector<double> y;

    std::size_t size() const { return s.size(); }
};

struct SegmentationParams {
    FitNorm norm = FitNorm::l1_of_l2fit;
    int min_segment_len = 3;  // samples; a 2-point line always fits exactly
};

/// Optimal contiguous segmentation minimizing sum over segments of
/// (epsilon + fit error), via dynamic programming over prefixes with
/// incremental least-squares costs. Cost ties resolve toward fewer
/// segments.
std::vector<LinearSegment> segment_dp(const Series& series, double epsilon,
                                      const SegmentationParams& params = {});

/// Moves every interior breakpoint to the intersection of its two adjacent
/// fitted lines. Parallel pairs keep their breakpoint, get averaged
/// intercepts, and are flagged.
std::vector<LinearSegment> enforce_continuity(std::vector<LinearSegment> segments,
                                              const std::vector<double>& s);

/// Repeatedly merges adjacent segments whose refined intersection falls
/// outside the interval spanned by their outer endpoints, refitting the
/// merged segment; re-runs continuity after each merge. Terminates because
/// the segment count strictly decreases.
std::vector<LinearSegment> merge_overshoot(std::vector<LinearSegment> segments,
                                           const Series& series,
                                           const SegmentationParams& params = {});

/// Continuous piecewise-linear model of curvature and torsion plus the
/// initial frame and point needed to integrate the curve back.
struct PwcModel {
    std::vector<LinearSegment> kappa_segments;
    std::vector<LinearSegment> tau_segments;
    std::vector<double> arclength;
    FrenetSample initial_frame;
    Point3 initial_point = Point3::Zero();
    double eps_kappa = 0.0;
    double eps_tau = 0.0;

    double total_length() const { return arclength.empty() ? 0.0 : arclength.back(); }
    double kappa_at(double s) const;
    double tau_at(double s) const;
};

/// Evaluates a refined segment list at abscissa s (clamped to the covered
/// range).
double eval_segments(const std::vector<LinearSegment>& segments, double s);

struct FitParams {
    SegmentationParams segmentation;
    double eps_straight = 1e-8;
};

/// Full fit: Frenet analysis, independent DP segmentation of the kappa and
/// tau series, then continuity refinement and overshoot merging on each.
PwcModel fit_pwc(const Polyline3D& curve, double eps_kappa, double eps_tau,
                 const FitParams& params = {});

/// Same, reusing an existing Frenet analysis of the curve.
PwcModel fit_pwc(const Polyline3D& curve, const FrenetSeries& series, double eps_kappa,
                 double eps_tau, const FitParams& params = {});

}  // namespace pwc3d
