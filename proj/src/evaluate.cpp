// evaluate.cpp - fit metrics, reprojection errors, grid search over the
// segmentation penalties, and time-series aggregates.
#include "pwc3d/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include "pwc3d/frenet.hpp"

namespace pwc3d {
namespace {

SectionStats stats_of(const std::vector<double>& values) {
    SectionStats st;
    if (values.empty()) return st;
    double sum = 0.0;
    for (double v : values) sum += v;
    st.mean_error = sum / static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - st.mean_error) * (v - st.mean_error);
    st.std_dev = std::sqrt(var / static_cast<double>(values.size()));
    return st;
}

std::map<std::string, SectionStats> section_stats(const std::vector<double>& distances,
                                                  const std::vector<double>& s,
                                                  double fraction) {
    const double total = s.back();
    std::vector<double> base, tip;
    for (std::size_t i = 0; i < distances.size(); ++i) {
        if (s[i] <= fraction * total) base.push_back(distances[i]);
        if (s[i] >= (1.0 - fraction) * total) tip.push_back(distances[i]);
    }
    return {
        {"base", stats_of(base)}, {"tip", stats_of(tip)}, {"entire", stats_of(distances)}};
}

bool cell_better(const GridCell& a, const GridCell& b) {
    if (a.r_squared != b.r_squared) return a.r_squared > b.r_squared;
    if (a.sse != b.sse) return a.sse < b.sse;
    if (a.eps_kappa + a.eps_tau != b.eps_kappa + b.eps_tau)
        return a.eps_kappa + a.eps_tau > b.eps_kappa + b.eps_tau;
    return a.eps_kappa > b.eps_kappa;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v;
    if (hi - lo < 1e-15) {
        v.push_back(lo);
        return v;
    }
    for (int i = 0; i < n; ++i)
        v.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    return v;
}

}  // namespace

FitMetrics goodness(const Polyline3D& fitted, const Polyline3D& observed,
                    const SectionOptions& options) {
    if (fitted.size() != observed.size())
        throw InvalidInput("goodness: point counts differ");
    const std::size_t n = observed.size();

    Point3 centroid = Point3::Zero();
    for (const auto& p : observed.points) centroid += p;
    centroid /= static_cast<double>(n);

    double sse = 0.0, tss = 0.0;
    std::vector<double> distances(n);
    for (std::size_t i = 0; i < n; ++i) {
        distances[i] = (fitted[i] - observed[i]).norm();
        sse += distances[i] * distances[i];
        tss += (observed[i] - centroid).squaredNorm();
    }
    if (tss < 1e-24) throw DegenerateMetric("goodness: observed points all coincide");

    FitMetrics m;
    m.sse = sse;
    m.r_squared = 1.0 - sse / tss;
    m.per_section =
        section_stats(distances, observed.cumulative_arclength, options.section_fraction);
    return m;
}

std::map<std::string, SectionStats> reprojection_error(const Polyline3D& curve,
                                                       const OrderedPolyline2D& skeleton,
                                                       const CameraModel& camera,
                                                       const ReprojectionOptions& options) {
    if (curve.size() < 2 || skeleton.size() < 2)
        throw InvalidInput("reprojection_error: empty inputs");
    std::vector<Point2> projected;
    projected.reserve(curve.size());
    for (const auto& x : curve.points) {
        const Point2 px = camera.project(x);
        if (!projected.empty() && (px - projected.back()).norm() < 1e-12) continue;
        projected.push_back(px);
    }
    const OrderedPolyline2D proj_k = resample_uniform(OrderedPolyline2D(std::move(projected)),
                                                      options.k);
    const OrderedPolyline2D skel_k = resample_uniform(skeleton, options.k);

    std::vector<double> distances(options.k);
    for (std::size_t i = 0; i < options.k; ++i)
        distances[i] = (proj_k[i] - skel_k[i]).norm();
    return section_stats(distances, arc_length(skel_k.points), options.section_fraction);
}

GridSearchResult grid_search(const Polyline3D& observed, const GridSearchOptions& options) {
    if (options.grid < 2) throw InvalidInput("grid_search: grid must be >= 2");
    // the Frenet series is shared by every cell
    const FrenetSeries series = discrete_curvature_torsion(observed, options.fit.eps_straight);

    auto evaluate_cell = [&](double ek, double et) {
        GridCell cell;
        cell.eps_kappa = ek;
        cell.eps_tau = et;
        const PwcModel model = fit_pwc(observed, series, ek, et, options.fit);
        const ReconstructionResult rec = reconstruct(model, observed, options.integration);
        const FitMetrics m = goodness(rec.curve, observed);
        cell.r_squared = m.r_squared;
        cell.sse = m.sse;
        cell.kappa_segments = static_cast<int>(model.kappa_segments.size());
        cell.tau_segments = static_cast<int>(model.tau_segments.size());
        return cell;
    };

    GridSearchResult result;
    double klo = options.eps_kappa_lo, khi = options.eps_kappa_hi;
    double tlo = options.eps_tau_lo, thi = options.eps_tau_hi;
    bool have_best = false;

    for (int iter = 0; iter < options.max_iters; ++iter) {
        GridIteration record;
        record.eps_kappa_lo = klo;
        record.eps_kappa_hi = khi;
        record.eps_tau_lo = tlo;
        record.eps_tau_hi = thi;

        const std::vector<double> ks = linspace(klo, khi, options.grid);
        const std::vector<double> ts = linspace(tlo, thi, options.grid);
        std::vector<std::pair<double, double>> cells;
        for (double ek : ks)
            for (double et : ts) cells.emplace_back(ek, et);

        record.cells.resize(cells.size());
        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        const std::size_t workers =
            options.workers > 0 ? static_cast<std::size_t>(options.workers)
                                : std::min<std::size_t>(hw, cells.size());
        if (workers <= 1) {
            for (std::size_t i = 0; i < cells.size(); ++i)
                record.cells[i] = evaluate_cell(cells[i].first, cells[i].second);
        } else {
            std::vector<std::future<void>> futures;
            for (std::size_t w = 0; w < workers; ++w)
                futures.push_back(std::async(std::launch::async, [&, w] {
                    for (std::size_t i = w; i < cells.size(); i += workers)
                        record.cells[i] = evaluate_cell(cells[i].first, cells[i].second);
                }));
            for (auto& f : futures) f.get();
        }

        std::vector<std::size_t> ranked(record.cells.size());
        for (std::size_t i = 0; i < ranked.size(); ++i) ranked[i] = i;
        std::sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
            return cell_better(record.cells[a], record.cells[b]);
        });

        const double kstep = ks.size() > 1 ? ks[1] - ks[0] : 0.0;
        const double tstep = ts.size() > 1 ? ts[1] - ts[0] : 0.0;
        for (std::size_t r = 0; r < std::min<std::size_t>(options.candidate_regions,
                                                          ranked.size());
             ++r) {
            const GridCell& c = record.cells[ranked[r]];
            record.candidate_regions.push_back(
                {std::max(klo, c.eps_kappa - kstep), std::min(khi, c.eps_kappa + kstep),
                 std::max(tlo, c.eps_tau - tstep), std::min(thi, c.eps_tau + tstep)});
        }

        const GridCell& best = record.cells[ranked.front()];
        if (!have_best || cell_better(best, result.best_cell)) {
            result.best_cell = best;
            have_best = true;
        }
        result.history.push_back(std::move(record));

        // converged: pick the largest-penalty cell meeting the bar
        GridCell chosen;
        bool met = false;
        for (const auto& c : result.history.back().cells) {
            if (c.r_squared > options.r2_bar && c.sse < options.sse_bar) {
                if (!met || c.eps_kappa + c.eps_tau > chosen.eps_kappa + chosen.eps_tau ||
                    (c.eps_kappa + c.eps_tau == chosen.eps_kappa + chosen.eps_tau &&
                     c.eps_kappa > chosen.eps_kappa))
                    chosen = c;
                met = true;
            }
        }
        if (met) {
            result.best_cell = chosen;
            result.converged = true;
            break;
        }
        if (kstep == 0.0 && tstep == 0.0) break;  // point range, nothing to narrow

        const auto& region = result.history.back().candidate_regions.front();
        klo = region[0];
        khi = region[1];
        tlo = region[2];
        thi = region[3];
    }

    result.best_eps_kappa = result.best_cell.eps_kappa;
    result.best_eps_tau = result.best_cell.eps_tau;
    return result;
}

TipTrajectory tip_trajectory(const std::vector<Polyline3D>& curves) {
    if (curves.empty()) throw InvalidInput("tip_trajectory: no curves");
    TipTrajectory out;
    for (const auto& c : curves) {
        const Point3& tip = c.points.back();
        out.tips.push_back(tip);
        out.xy.emplace_back(tip.x(), tip.y());
        out.yz.emplace_back(tip.y(), tip.z());
        out.xz.emplace_back(tip.x(), tip.z());
    }
    return out;
}

BreakpointDensity breakpoint_density(const std::vector<PwcModel>& models) {
    if (models.empty()) throw InvalidInput("breakpoint_density: no models");
    BreakpointDensity out;
    auto interior = [](const std::vector<LinearSegment>& segs) {
        std::vector<int> idx;
        for (std::size_t i = 1; i < segs.size(); ++i) idx.push_back(segs[i].start_index);
        return idx;
    };
    for (const auto& m : models) {
        out.kappa.push_back(interior(m.kappa_segments));
        out.tau.push_back(interior(m.tau_segments));
    }
    return out;
}

}  // namespace pwc3d
