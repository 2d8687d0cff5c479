// evaluate.hpp - fit quality metrics (R^2, SSE, per-section errors),
// reprojection errors against 2D skeletons, and penalty grid search.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "pwc3d/pwc_fit.hpp"
#include "pwc3d/reconstruct.hpp"

namespace pwc3d {

struct SectionStats {
    double mean_error = 0.0;
    double std_dev = 0.0;
};

/// base/tip sections cover the first/last quarter of arc length by default.
struct FitMetrics {
    double r_squared = 0.0;
    double sse = 0.0;
    std::map<std::string, SectionStats> per_section;  // "base", "tip", "entire"
};

struct SectionOptions {
    double section_fraction = 0.25;
};

/// SSE against the observed points, R^2 with total sum of squares around the
/// observed centroid, and per-section pointwise distance statistics.
FitMetrics goodness(const Polyline3D& fitted, const Polyline3D& observed,
                    const SectionOptions& options = {});

struct ReprojectionOptions {
    std::size_t k = 200;
    double section_fraction = 0.25;
};

/// Projects the 3D curve into the camera, resamples both the projection and
/// the skeleton to k points, pairs them by arc-length index, and aggregates
/// pixel distances per section.
std::map<std::string, SectionStats> reprojection_error(const Polyline3D& curve,
                                                       const OrderedPolyline2D& skeleton,
                                                       const CameraModel& camera,
                                                       const ReprojectionOptions& options = {});

struct GridCell {
    double eps_kappa = 0.0;
    double eps_tau = 0.0;
    double r_squared = 0.0;
    double sse = 0.0;
    int kappa_segments = 0;
    int tau_segments = 0;
};

struct GridIteration {
    double eps_kappa_lo = 0.0, eps_kappa_hi = 0.0;
    double eps_tau_lo = 0.0, eps_tau_hi = 0.0;
    std::vector<GridCell> cells;
    std::vector<std::array<double, 4>> candidate_regions;  // lo_k, hi_k, lo_t, hi_t
};

struct GridSearchResult {
    double best_eps_kappa = 0.0;
    double best_eps_tau = 0.0;
    GridCell best_cell;
    std::vector<GridIteration> history;
    bool converged = false;
};

struct GridSearchOptions {
    double eps_kappa_lo = 0.0, eps_kappa_hi = 1350.0;
    double eps_tau_lo = 0.0, eps_tau_hi = 3450.0;
    int grid = 10;
    int max_iters = 6;
    int candidate_regions = 4;
    double r2_bar = 0.999;
    double sse_bar = 0.001;
    FitParams fit;
    IntegrationOptions integration;
    int workers = 0;  // 0 = hardware concurrency
};

/// Iterative grid search over the two penalties: each iteration evaluates
/// fit + reconstruct + goodness on a grid, retains the best candidate
/// regions, and recurses into the best until the convergence bar
/// (R^2 > 0.999, SSE < 0.001) is met or iterations run out. Ties prefer
/// larger penalties. Deterministic; cells may be evaluated concurrently.
GridSearchResult grid_search(const Polyline3D& observed, const GridSearchOptions& options = {});

struct TipTrajectory {
    std::vector<Point3> tips;
    std::vector<Point2> xy, yz, xz;  // axis-plane projections
};

TipTrajectory tip_trajectory(const std::vector<Polyline3D>& curves);

struct BreakpointDensity {
    std::vector<std::vector<int>> kappa;  // per frame, interior breakpoint sample indices
    std::vector<std::vector<int>> tau;
};

BreakpointDensity breakpoint_density(const std::vector<PwcModel>& models);

}  // namespace pwc3d
