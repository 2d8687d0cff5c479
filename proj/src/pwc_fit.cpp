// pwc_fit.cpp - penalized DP segmentation of scalar series, continuity
// refinement at breakpoints, overshoot merging, and the combined
// curvature/torsion model fit.
#include "pwc3d/pwc_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pwc3d {
namespace {

struct LineFit {
    double alpha = 0.0;
    double beta = 0.0;
};

// Least-squares line over [i, j] (inclusive) from prefix sums.
class PrefixFitter {
public:
    explicit PrefixFitter(const Series& series) : series_(series) {
        const std::size_t n = series.size();
        ps_.assign(n + 1, 0.0);
        py_.assign(n + 1, 0.0);
        pss_.assign(n + 1, 0.0);
        psy_.assign(n + 1, 0.0);
        for (std::size_t t = 0; t < n; ++t) {
            ps_[t + 1] = ps_[t] + series.s[t];
            py_[t + 1] = py_[t] + series.y[t];
            pss_[t + 1] = pss_[t] + series.s[t] * series.s[t];
            psy_[t + 1] = psy_[t] + series.s[t] * series.y[t];
        }
    }

    LineFit fit(int i, int j) const {
        const double n = j - i + 1;
        const double sum_s = ps_[j + 1] - ps_[i];
        const double sum_y = py_[j + 1] - py_[i];
        const double sum_ss = pss_[j + 1] - pss_[i];
        const double sum_sy = psy_[j + 1] - psy_[i];
        const double det = n * sum_ss - sum_s * sum_s;
        LineFit f;
        if (std::abs(det) < 1e-14 * std::max(1.0, n * sum_ss)) {
            f.alpha = 0.0;
            f.beta = sum_y / n;
        } else {
            f.alpha = (n * sum_sy - sum_s * sum_y) / det;
            f.beta = (sum_y - f.alpha * sum_s) / n;
        }
        return f;
    }

    double residual(int i, int j, const LineFit& f, FitNorm norm) const {
        double e = 0.0;
        for (int t = i; t <= j; ++t) {
            const double r = f.alpha * series_.s[t] + f.beta - series_.y[t];
            e += norm == FitNorm::l1_of_l2fit ? std::abs(r) : r * r;
        }
        return e;
    }

private:
    const Series& series_;
    std::vector<double> ps_, py_, pss_, psy_;
};

void validate_series(const Series& series) {
    if (series.s.size() != series.y.size()) throw InvalidInput("Series: size mismatch");
    if (series.size() < 2) throw InvalidInput("Series: need at least 2 samples");
    for (std::size_t t = 1; t < series.size(); ++t)
        if (series.s[t] <= series.s[t - 1])
            throw InvalidInput("Series: arc length must be strictly increasing");
}

LinearSegment make_segment(const PrefixFitter& fitter, const Series& series, int i, int j,
                           FitNorm norm) {
    LinearSegment seg;
    seg.start_index = i;
    seg.end_index = j;
    const LineFit f = fitter.fit(i, j);
    seg.alpha = f.alpha;
    seg.beta = f.beta;
    seg.fit_error = fitter.residual(i, j, f, norm);
    seg.s_start = series.s[i];
    seg.s_end = series.s[j];
    return seg;
}

// Domain boundaries between adjacent segments start at sample midpoints.
void assign_midpoint_boundaries(std::vector<LinearSegment>& segments,
                                const std::vector<double>& s) {
    if (segments.empty()) return;
    segments.front().s_start = s[segments.front().start_index];
    segments.back().s_end = s[segments.back().end_index];
    for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
        const double mid =
            0.5 * (s[segments[i].end_index] + s[segments[i + 1].start_index]);
        segments[i].s_end = mid;
        segments[i + 1].s_start = mid;
    }
}

}  // namespace

std::vector<LinearSegment> segment_dp(const Series& series, double epsilon,
                                      const SegmentationParams& params) {
    if (epsilon < 0.0) throw InvalidInput("segment_dp: epsilon must be >= 0");
    validate_series(series);
    const int n = static_cast<int>(series.size());
    const int min_len = std::max(2, params.min_segment_len);
    const PrefixFitter fitter(series);

    std::vector<LinearSegment> segments;
    if (n < 2 * min_len) {
        segments.push_back(make_segment(fitter, series, 0, n - 1, params.norm));
        assign_midpoint_boundaries(segments, series.s);
        return segments;
    }

    constexpr double kInf = std::numeric_limits<double>::max();
    std::vector<double> best_cost(static_cast<std::size_t>(n) + 1, kInf);
    std::vector<int> best_segs(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> prev(static_cast<std::size_t>(n) + 1, -1);
    best_cost[0] = 0.0;

    for (int j = min_len; j <= n; ++j) {
        for (int i = 0; i + min_len <= j; ++i) {
            if (best_cost[i] == kInf) continue;
            const LineFit f = fitter.fit(i, j - 1);
            const double cost =
                best_cost[i] + epsilon + fitter.residual(i, j - 1, f, params.norm);
            const int segs = best_segs[i] + 1;
            // ties resolve toward fewer segments, so raising the penalty
            // can never increase the segment count
            if (cost < best_cost[j] || (cost == best_cost[j] && segs < best_segs[j])) {
                best_cost[j] = cost;
                best_segs[j] = segs;
                prev[j] = i;
            }
        }
    }
    if (best_cost[n] == kInf) throw NumericalFailure("segment_dp: no feasible partition");

    std::vector<std::pair<int, int>> ranges;
    for (int j = n; j > 0; j = prev[j]) ranges.emplace_back(prev[j], j - 1);
    std::reverse(ranges.begin(), ranges.end());
    for (const auto& [i, j] : ranges)
        segments.push_back(make_segment(fitter, series, i, j, params.norm));
    assign_midpoint_boundaries(segments, series.s);
    return segments;
}

std::vector<LinearSegment> enforce_continuity(std::vector<LinearSegment> segments,
                                              const std::vector<double>& s) {
    if (segments.empty()) throw InvalidInput("enforce_continuity: no segments");
    for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
        LinearSegment& a = segments[i];
        LinearSegment& b = segments[i + 1];
        if (std::abs(a.alpha - b.alpha) < 1e-12) {
            const double avg = 0.5 * (a.beta + b.beta);
            a.beta = b.beta = avg;
            a.parallel_flagged = b.parallel_flagged = true;
            continue;
        }
        const double cross = (b.beta - a.beta) / (a.alpha - b.alpha);
        a.s_end = cross;
        b.s_start = cross;
        // keep the sample tiling consistent with the refined boundary
        int idx = a.start_index;
        while (idx < b.end_index - 1 && s[idx + 1] <= cross) ++idx;
        idx = std::clamp(idx, a.start_index, b.end_index - 1);
        a.end_index = idx;
        b.start_index = idx + 1;
    }
    return segments;
}

std::vector<LinearSegment> merge_overshoot(std::vector<LinearSegment> segments,
                                           const Series& series,
                                           const SegmentationParams& params) {
    const PrefixFitter fitter(series);
    while (segments.size() > 1) {
        std::size_t merge_at = segments.size();
        for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
            const LinearSegment& a = segments[i];
            const LinearSegment& b = segments[i + 1];
            if (a.parallel_flagged && b.parallel_flagged && a.end_index + 1 == b.start_index &&
                std::abs(a.alpha - b.alpha) < 1e-12)
                continue;  // flagged parallel pair: boundary kept by contract
            const double cross = a.s_end;  // refined boundary == intersection
            const double lo = std::min(a.s_start, b.s_end);
            const double hi = std::max(a.s_start, b.s_end);
            const bool outside = cross < lo || cross > hi;
            const bool inverted = a.s_start > a.s_end || b.s_start > b.s_end;
            if (outside || inverted) {
                merge_at = i;
                break;
            }
        }
        if (merge_at == segments.size()) break;

        LinearSegment merged = make_segment(fitter, series, segments[merge_at].start_index,
                                            segments[merge_at + 1].end_index, params.norm);
        segments.erase(segments.begin() + static_cast<std::ptrdiff_t>(merge_at) + 1);
        segments[merge_at] = merged;
        assign_midpoint_boundaries(segments, series.s);
        segments = enforce_continuity(std::move(segments), series.s);
    }
    return segments;
}

double eval_segments(const std::vector<LinearSegment>& segments, double s) {
    if (segments.empty()) throw InvalidInput("eval_segments: no segments");
    if (s <= segments.front().s_end) return segments.front().eval(s);
    for (std::size_t i = 1; i + 1 < segments.size(); ++i)
        if (s <= segments[i].s_end) return segments[i].eval(s);
    return segments.back().eval(s);
}

double PwcModel::kappa_at(double s) const { return eval_segments(kappa_segments, s); }
double PwcModel::tau_at(double s) const { return eval_segments(tau_segments, s); }

PwcModel fit_pwc(const Polyline3D& curve, double eps_kappa, double eps_tau,
                 const FitParams& params) {
    if (curve.size() < 4) throw InvalidInput("fit_pwc: need at least 4 points");
    const FrenetSeries series = discrete_curvature_torsion(curve, params.eps_straight);
    return fit_pwc(curve, series, eps_kappa, eps_tau, params);
}

PwcModel fit_pwc(const Polyline3D& curve, const FrenetSeries& series, double eps_kappa,
                 double eps_tau, const FitParams& params) {
    if (curve.size() < 4) throw InvalidInput("fit_pwc: need at least 4 points");
    Series kappa, tau;
    kappa.s = tau.s = curve.cumulative_arclength;
    kappa.y.reserve(series.size());
    tau.y.reserve(series.size());
    for (const auto& smp : series.samples) {
        kappa.y.push_back(smp.kappa);
        tau.y.push_back(smp.tau);
    }

    auto fit_one = [&](const Series& s, double eps) {
        auto segs = segment_dp(s, eps, params.segmentation);
        segs = enforce_continuity(std::move(segs), s.s);
        return merge_overshoot(std::move(segs), s, params.segmentation);
    };

    PwcModel model;
    model.kappa_segments = fit_one(kappa, eps_kappa);
    model.tau_segments = fit_one(tau, eps_tau);
    model.arclength = curve.cumulative_arclength;
    model.initial_frame = series.samples.front();
    model.initial_point = curve[0];
    model.eps_kappa = eps_kappa;
    model.eps_tau = eps_tau;
    return model;
}

}  // namespace pwc3d
