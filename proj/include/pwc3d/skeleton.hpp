// skeleton.hpp - ordering of unordered 1-px skeleton pixel sets into
// base-to-tip polylines, including the self-intersection cases.
#pragma once

#include <optional>
#include <vector>

#include "pwc3d/geometry.hpp"

namespace pwc3d {

using Pixel = Eigen::Vector2i;

/// Unordered skeleton pixels of one view plus the user-supplied base pixel.
struct PixelSet {
    std::vector<Pixel> pixels;
    Pixel start_hint = Pixel::Zero();

    /// Throws InvalidInput unless start_hint is a member and the set forms a
    /// single 8-connected component.
    void validate() const;
};

enum class SkeletonTopology { simple, loop_at_tip, loop_interior };

/// Result of the self-intersection probe.
struct IntersectionReport {
    std::optional<Pixel> cross_point;  // absent iff topology == simple
    double tip_distance = 0.0;         // pixels from cross_point to the free tip
    SkeletonTopology topology = SkeletonTopology::simple;
    int junction_count = 0;            // distinct junction clusters found
};

struct OrderingParams {
    double tau_tip = 10.0;      // tip-to-junction distance treated as negligible
    int n_line_fit = 10;        // points per local direction-line fit
    double epsilon_angle = 1e-3;  // rad; smaller angle gaps are ambiguous
    double gap_jump = 3.0;      // max pixel jump across skeleton gaps
};

/// Scans for junction pixels (>= 3 branch transitions around the 8-neighbor
/// ring), clusters adjacent candidates, and classifies the topology by the
/// distance between the junction and the free tip.
IntersectionReport detect_intersection(const PixelSet& ps, const OrderingParams& params = {});

/// Orders a junction-free skeleton by greedy 8-neighbor traversal from
/// start_hint, with a bounded nearest-pixel jump across 1-2 px gaps.
/// start_hint is expected to be the base endpoint; an interior start falls
/// back to the two-direction walk-and-merge, in which case the hint ends up
/// in the interior of the output.
OrderedPolyline2D order_simple(const PixelSet& ps, const OrderingParams& params = {});

/// Fits oriented direction lines to the tail of the ordered set before the
/// junction and to the two candidate continuations, and returns the unsigned
/// turning angles (radians, in [0, pi]) for each candidate.
std::pair<double, double> fit_direction_lines(const std::vector<Point2>& s1_tail,
                                              const std::vector<Point2>& s2_head,
                                              const std::vector<Point2>& s2star_head);

/// Orders a skeleton with one self-intersection: walks to the junction,
/// removes the cross pixel, splits the remainder into connected subsets,
/// picks the continuation with the smaller turning angle, and appends the
/// post-loop tail (identified by the farthest endpoint) when present.
OrderedPolyline2D order_with_intersection(const PixelSet& ps, const IntersectionReport& report,
                                          const OrderingParams& params = {});

/// Convenience: detect, then dispatch to the matching ordering routine.
OrderedPolyline2D order_skeleton(const PixelSet& ps, const OrderingParams& params = {});

}  // namespace pwc3d
