// skeleton.cpp - skeleton pixel ordering: junction detection via branch
// transition counts, greedy chain traversal, and the split/label/merge
// procedure for self-intersecting shapes.
#include "pwc3d/skeleton.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <unordered_map>
#include <unordered_set>

namespace pwc3d {
namespace {

using Key = std::int64_t;

Key key_of(const Pixel& p) {
    return (static_cast<Key>(p.x()) << 32) | static_cast<Key>(static_cast<std::uint32_t>(p.y()));
}

// 8-neighbor ring in cyclic order (E, NE, N, NW, W, SW, S, SE).
constexpr std::array<std::array<int, 2>, 8> kRing = {
    {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

bool lex_less(const Pixel& a, const Pixel& b) {
    return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
}

struct PixelIndex {
    std::unordered_set<Key> members;
    std::vector<Pixel> list;

    explicit PixelIndex(const std::vector<Pixel>& pixels) {
        list = pixels;
        std::sort(list.begin(), list.end(), lex_less);
        list.erase(std::unique(list.begin(), list.end()), list.end());
        members.reserve(list.size());
        for (const auto& p : list) members.insert(key_of(p));
    }

    bool contains(const Pixel& p) const { return members.count(key_of(p)) != 0; }
};

// Number of connected runs of skeleton pixels around the 8-neighbor ring:
// 1 for endpoints, 2 along a chain, >= 3 at a junction.
int branch_transitions(const PixelIndex& idx, const Pixel& p) {
    std::array<bool, 8> on{};
    for (int i = 0; i < 8; ++i)
        on[i] = idx.contains(Pixel(p.x() + kRing[i][0], p.y() + kRing[i][1]));
    int runs = 0;
    for (int i = 0; i < 8; ++i)
        if (on[i] && !on[(i + 7) % 8]) ++runs;
    return runs;
}

std::vector<std::vector<Pixel>> connected_components(const PixelIndex& idx,
                                                     bool sever_crowded_diagonals = false) {
    // A diagonal adjacency where both pixels already have two other
    // neighbors is a side contact between two strands, not a chain step;
    // severing those keeps parallel strands in separate components.
    auto other_degree = [&](const Pixel& p, const Pixel& excluded) {
        int n = 0;
        for (const auto& d : kRing) {
            Pixel q(p.x() + d[0], p.y() + d[1]);
            if (q != excluded && idx.contains(q)) ++n;
        }
        return n;
    };
    auto connected = [&](const Pixel& p, const Pixel& q) {
        if (!sever_crowded_diagonals) return true;
        const bool diagonal = p.x() != q.x() && p.y() != q.y();
        if (!diagonal) return true;
        return other_degree(p, q) < 2 || other_degree(q, p) < 2;
    };

    std::unordered_set<Key> seen;
    std::vector<std::vector<Pixel>> comps;
    for (const auto& seed : idx.list) {
        if (seen.count(key_of(seed))) continue;
        std::vector<Pixel> comp;
        std::deque<Pixel> queue{seed};
        seen.insert(key_of(seed));
        while (!queue.empty()) {
            Pixel p = queue.front();
            queue.pop_front();
            comp.push_back(p);
            for (const auto& d : kRing) {
                Pixel q(p.x() + d[0], p.y() + d[1]);
                if (idx.contains(q) && !seen.count(key_of(q)) && connected(p, q)) {
                    seen.insert(key_of(q));
                    queue.push_back(q);
                }
            }
        }
        std::sort(comp.begin(), comp.end(), lex_less);
        comps.push_back(std::move(comp));
    }
    return comps;
}

bool adjacent8(const Pixel& a, const Pixel& b) {
    return a != b && std::abs(a.x() - b.x()) <= 1 && std::abs(a.y() - b.y()) <= 1;
}

// Greedy chain traversal. Prefers the nearest unvisited neighbor (4-adjacent
// before diagonal), jumps across gaps up to params.gap_jump, and raises
// AmbiguousDirection on a genuine fork (two unvisited neighbors that are not
// part of one staircase corner).
std::vector<Pixel> walk_chain(const PixelIndex& allowed, const Pixel& start,
                              std::unordered_set<Key>& visited, const OrderingParams& params,
                              bool fork_ok_at_first_step) {
    // same crowded-diagonal rule as the component split: never step across
    // a side contact between two parallel strands
    auto other_degree = [&](const Pixel& p, const Pixel& excluded) {
        int n = 0;
        for (const auto& d : kRing) {
            Pixel q(p.x() + d[0], p.y() + d[1]);
            if (q != excluded && allowed.contains(q)) ++n;
        }
        return n;
    };
    auto steppable = [&](const Pixel& p, const Pixel& q) {
        const bool diagonal = p.x() != q.x() && p.y() != q.y();
        if (!diagonal) return true;
        return other_degree(p, q) < 2 || other_degree(q, p) < 2;
    };

    std::vector<Pixel> path{start};
    visited.insert(key_of(start));
    bool first = true;
    while (true) {
        const Pixel cur = path.back();
        std::vector<Pixel> cands;
        for (const auto& d : kRing) {
            Pixel q(cur.x() + d[0], cur.y() + d[1]);
            if (allowed.contains(q) && !visited.count(key_of(q)) && steppable(cur, q))
                cands.push_back(q);
        }
        if (cands.empty()) {
            // bounded jump across rasterization gaps
            Pixel best = cur;
            double best_d = params.gap_jump + 1e-9;
            for (const auto& q : allowed.list) {
                if (visited.count(key_of(q))) continue;
                const double d = (q - cur).cast<double>().norm();
                if (d < best_d - 1e-12 || (std::abs(d - best_d) <= 1e-12 && lex_less(q, best))) {
                    best_d = d;
                    best = q;
                }
            }
            if (best == cur) break;
            visited.insert(key_of(best));
            path.push_back(best);
            first = false;
            continue;
        }
        if (cands.size() > 1 && !(first && fork_ok_at_first_step)) {
            bool staircase = true;
            for (std::size_t i = 0; i < cands.size() && staircase; ++i)
                for (std::size_t j = i + 1; j < cands.size(); ++j)
                    if (!adjacent8(cands[i], cands[j])) {
                        staircase = false;
                        break;
                    }
            if (!staircase)
                throw AmbiguousDirection("walk_chain: fork at (" + std::to_string(cur.x()) + "," +
                                         std::to_string(cur.y()) + ")");
        }
        std::sort(cands.begin(), cands.end(), [&](const Pixel& a, const Pixel& b) {
            const int da = (a - cur).cwiseAbs().sum();  // 1 for 4-adjacent, 2 for diagonal
            const int db = (b - cur).cwiseAbs().sum();
            if (da != db) return da < db;
            return lex_less(a, b);
        });
        visited.insert(key_of(cands.front()));
        path.push_back(cands.front());
        first = false;
    }
    return path;
}

std::vector<Point2> to_points(const std::vector<Pixel>& pixels) {
    std::vector<Point2> pts;
    pts.reserve(pixels.size());
    for (const auto& p : pixels) pts.emplace_back(p.x(), p.y());
    return pts;
}

std::vector<Point2> head_points(const std::vector<Pixel>& pixels, int n) {
    const std::size_t m = std::min<std::size_t>(pixels.size(), static_cast<std::size_t>(n));
    std::vector<Point2> pts;
    for (std::size_t i = 0; i < m; ++i) pts.emplace_back(pixels[i].x(), pixels[i].y());
    return pts;
}

std::vector<Point2> tail_points(const std::vector<Pixel>& pixels, int n) {
    const std::size_t m = std::min<std::size_t>(pixels.size(), static_cast<std::size_t>(n));
    std::vector<Point2> pts;
    for (std::size_t i = pixels.size() - m; i < pixels.size(); ++i)
        pts.emplace_back(pixels[i].x(), pixels[i].y());
    return pts;
}

Pixel nearest_pixel(const std::vector<Pixel>& pixels, const Pixel& target) {
    Pixel best = pixels.front();
    double best_d = std::numeric_limits<double>::max();
    for (const auto& p : pixels) {
        const double d = (p - target).cast<double>().norm();
        if (d < best_d - 1e-12 || (std::abs(d - best_d) <= 1e-12 && lex_less(p, best))) {
            best_d = d;
            best = p;
        }
    }
    return best;
}

struct JunctionScan {
    std::vector<std::vector<Pixel>> clusters;  // each sorted, clusters sorted by representative
    std::vector<Pixel> representatives;
};

int neighbor_count(const PixelIndex& idx, const Pixel& p) {
    int n = 0;
    for (const auto& d : kRing)
        if (idx.contains(Pixel(p.x() + d[0], p.y() + d[1]))) ++n;
    return n;
}

// Junction candidates: >= 3 branch runs around the ring, or >= 4 chain
// neighbors (diagonally smeared crossings merge two runs but still collect
// four strands around one pixel). Candidate clusters are then kept only if
// at least three separate strands leave the cluster, which rejects the 2x2
// rounding blocks a dense rasterization can leave mid-chain.
JunctionScan scan_junctions(const PixelIndex& idx) {
    std::vector<Pixel> cands;
    for (const auto& p : idx.list)
        if (branch_transitions(idx, p) >= 3 || neighbor_count(idx, p) >= 4) cands.push_back(p);
    JunctionScan out;
    if (cands.empty()) return out;
    PixelIndex cidx(cands);
    std::vector<std::vector<Pixel>> raw_clusters = connected_components(cidx);
    for (auto& cluster : raw_clusters) {
        // grow the cluster by one shell, then count the skeleton strands
        // touching the grown zone; short stubs (e.g. a tiny post-crossing
        // tail) merge diagonally right at the cluster, so the second shell
        // is where strands separate reliably
        std::unordered_set<Key> grown;
        std::vector<Pixel> frontier = cluster;
        for (const auto& p : cluster) grown.insert(key_of(p));
        std::vector<Pixel> next;
        for (const auto& p : frontier)
            for (const auto& d : kRing) {
                Pixel q(p.x() + d[0], p.y() + d[1]);
                if (idx.contains(q) && grown.insert(key_of(q)).second) next.push_back(q);
            }
        std::vector<Pixel> shell;
        std::unordered_set<Key> shell_seen;
        for (const auto& p : next)
            for (const auto& d : kRing) {
                Pixel q(p.x() + d[0], p.y() + d[1]);
                if (idx.contains(q) && !grown.count(key_of(q)) &&
                    shell_seen.insert(key_of(q)).second)
                    shell.push_back(q);
            }
        if (shell.empty()) continue;
        PixelIndex shell_idx(shell);
        if (connected_components(shell_idx).size() >= 3) out.clusters.push_back(cluster);
    }
    if (out.clusters.empty()) return JunctionScan{};
    for (const auto& cluster : out.clusters) {
        Pixel rep = cluster.front();
        int best_t = -1;
        for (const auto& p : cluster) {
            const int t = branch_transitions(idx, p);
            if (t > best_t || (t == best_t && lex_less(p, rep))) {
                best_t = t;
                rep = p;
            }
        }
        out.representatives.push_back(rep);
    }
    // deterministic cluster order by representative
    std::vector<std::size_t> order(out.clusters.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return lex_less(out.representatives[a], out.representatives[b]);
    });
    JunctionScan sorted;
    for (std::size_t i : order) {
        sorted.clusters.push_back(out.clusters[i]);
        sorted.representatives.push_back(out.representatives[i]);
    }
    return sorted;
}

}  // namespace

void PixelSet::validate() const {
    if (pixels.empty()) throw InvalidInput("PixelSet: empty");
    PixelIndex idx(pixels);
    if (!idx.contains(start_hint)) throw InvalidInput("PixelSet: start_hint not a skeleton pixel");
    std::unordered_set<Key> seen{key_of(start_hint)};
    std::deque<Pixel> queue{start_hint};
    while (!queue.empty()) {
        Pixel p = queue.front();
        queue.pop_front();
        for (const auto& d : kRing) {
            Pixel q(p.x() + d[0], p.y() + d[1]);
            if (idx.contains(q) && !seen.count(key_of(q))) {
                seen.insert(key_of(q));
                queue.push_back(q);
            }
        }
    }
    if (seen.size() != idx.list.size())
        throw InvalidInput("PixelSet: pixels are not a single 8-connected component");
}

IntersectionReport detect_intersection(const PixelSet& ps, const OrderingParams& params) {
    ps.validate();
    PixelIndex idx(ps.pixels);
    const JunctionScan scan = scan_junctions(idx);

    IntersectionReport report;
    report.junction_count = static_cast<int>(scan.clusters.size());
    if (scan.clusters.empty()) return report;

    const Pixel cross = scan.representatives.front();
    report.cross_point = cross;

    // Free endpoints; the one nearest the start hint is the base, the
    // farthest remaining one is the tip candidate.
    std::vector<Pixel> endpoints;
    for (const auto& p : idx.list)
        if (branch_transitions(idx, p) <= 1) endpoints.push_back(p);

    double tip_distance = 0.0;
    if (!endpoints.empty()) {
        const Pixel base = nearest_pixel(endpoints, ps.start_hint);
        Pixel tip = base;
        double best = -1.0;
        for (const auto& e : endpoints) {
            if (e == base) continue;
            const double d = (e - cross).cast<double>().norm();
            if (d > best) {
                best = d;
                tip = e;
            }
        }
        if (tip != base) tip_distance = (tip - cross).cast<double>().norm();
    }
    report.tip_distance = tip_distance;
    report.topology = tip_distance <= params.tau_tip ? SkeletonTopology::loop_at_tip
                                                     : SkeletonTopology::loop_interior;
    return report;
}

OrderedPolyline2D order_simple(const PixelSet& ps, const OrderingParams& params) {
    ps.validate();
    PixelIndex idx(ps.pixels);
    if (!scan_junctions(idx).clusters.empty())
        throw WrongTopology("order_simple: skeleton has a junction");
    if (idx.list.size() < 2) throw InvalidInput("order_simple: need at least 2 pixels");

    std::unordered_set<Key> visited;
    std::vector<Pixel> fwd = walk_chain(idx, ps.start_hint, visited, params, true);
    if (visited.size() < idx.list.size()) {
        // interior start: walk the opposite direction and merge front-to-front
        std::unordered_set<Key> v2 = visited;
        std::vector<Pixel> bwd = walk_chain(idx, ps.start_hint, v2, params, true);
        bwd.erase(bwd.begin());  // second copy of the start pixel
        std::reverse(bwd.begin(), bwd.end());
        bwd.insert(bwd.end(), fwd.begin(), fwd.end());
        fwd = std::move(bwd);
    }
    return OrderedPolyline2D(to_points(fwd));
}

std::pair<double, double> fit_direction_lines(const std::vector<Point2>& s1_tail,
                                              const std::vector<Point2>& s2_head,
                                              const std::vector<Point2>& s2star_head) {
    auto fit_direction = [](const std::vector<Point2>& pts) -> Eigen::Vector2d {
        if (pts.size() < 2) throw DegenerateLineFit("fit_direction_lines: need >= 2 points");
        Point2 mean = Point2::Zero();
        for (const auto& p : pts) mean += p;
        mean /= static_cast<double>(pts.size());
        double sxx = 0, sxy = 0, syy = 0;
        for (const auto& p : pts) {
            const Point2 d = p - mean;
            sxx += d.x() * d.x();
            sxy += d.x() * d.y();
            syy += d.y() * d.y();
        }
        if (sxx + syy < 1e-12) throw DegenerateLineFit("fit_direction_lines: zero spread");
        const double theta = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
        Eigen::Vector2d dir(std::cos(theta), std::sin(theta));
        const Point2 travel = pts.back() - pts.front();
        if (dir.dot(travel) < 0) dir = -dir;
        return dir;
    };
    const Eigen::Vector2d d1 = fit_direction(s1_tail);
    const Eigen::Vector2d d2 = fit_direction(s2_head);
    const Eigen::Vector2d d2s = fit_direction(s2star_head);
    auto unsigned_angle = [&](const Eigen::Vector2d& d) {
        return std::abs(std::atan2(d1.x() * d.y() - d1.y() * d.x(), d1.dot(d)));
    };
    return {unsigned_angle(d2), unsigned_angle(d2s)};
}

OrderedPolyline2D order_with_intersection(const PixelSet& ps, const IntersectionReport& report,
                                          const OrderingParams& params) {
    if (report.topology == SkeletonTopology::simple || !report.cross_point)
        throw WrongTopology("order_with_intersection: no self-intersection reported");
    if (report.junction_count > 1)
        throw UnsupportedTopology("order_with_intersection: more than one junction");
    ps.validate();

    PixelIndex idx(ps.pixels);
    const Pixel cross = *report.cross_point;
    const JunctionScan scan = scan_junctions(idx);
    if (scan.clusters.empty())
        throw WrongTopology("order_with_intersection: junction no longer present");

    // Remove the 3x3 neighborhood of the junction cluster so strands that
    // touch diagonally right beside the crossing separate too; widen once
    // more if the skeleton still does not split.
    auto dilate = [&](const std::vector<Pixel>& zone) {
        std::unordered_set<Key> seen;
        std::vector<Pixel> out;
        auto add = [&](const Pixel& p) {
            if (idx.contains(p) && seen.insert(key_of(p)).second) out.push_back(p);
        };
        for (const auto& p : zone) {
            add(p);
            for (const auto& d : kRing) add(Pixel(p.x() + d[0], p.y() + d[1]));
        }
        std::sort(out.begin(), out.end(), lex_less);
        return out;
    };
    auto split = [&](const std::vector<Pixel>& cut) {
        std::unordered_set<Key> cutset;
        for (const auto& p : cut) cutset.insert(key_of(p));
        std::vector<Pixel> rest;
        for (const auto& p : idx.list)
            if (!cutset.count(key_of(p))) rest.push_back(p);
        return rest;
    };

    // strands can also touch diagonally a pixel or two outside the removed
    // zone; those contact pixels read as branch candidates and must be cut
    // with the junction for the split to be clean
    std::vector<Pixel> zone = scan.clusters.front();
    for (const auto& p : idx.list) {
        if ((p - cross).cwiseAbs().maxCoeff() > 4 || p == cross) continue;
        if (branch_transitions(idx, p) >= 3 || neighbor_count(idx, p) >= 4) zone.push_back(p);
    }
    std::vector<Pixel> removed = dilate(zone);
    std::vector<Pixel> rest = split(removed);
    std::vector<std::vector<Pixel>> comps;
    for (int attempt = 0;; ++attempt) {
        if (rest.empty())
            throw UnsupportedTopology("order_with_intersection: junction consumed skeleton");
        comps = connected_components(PixelIndex(rest), true);
        if (comps.size() >= 2) break;
        if (attempt >= 1)
            throw UnsupportedTopology("order_with_intersection: junction does not split skeleton");
        removed = dilate(removed);
        rest = split(removed);
    }

    // Base component, ordered from the start hint.
    std::unordered_set<Key> cutset;
    for (const auto& p : removed) cutset.insert(key_of(p));
    if (cutset.count(key_of(ps.start_hint)))
        throw InvalidInput("order_with_intersection: start hint inside junction zone");
    std::size_t base_i = comps.size();
    for (std::size_t i = 0; i < comps.size(); ++i)
        if (std::binary_search(comps[i].begin(), comps[i].end(), ps.start_hint, lex_less)) base_i = i;
    if (base_i == comps.size())
        throw InvalidInput("order_with_intersection: start hint not found after split");

    auto order_component = [&](const std::vector<Pixel>& comp, const Pixel& from) {
        PixelIndex cidx(comp);
        std::unordered_set<Key> visited;
        return walk_chain(cidx, from, visited, params, false);
    };

    std::vector<Pixel> s1 = order_component(comps[base_i], ps.start_hint);

    std::vector<std::vector<Pixel>> others;
    for (std::size_t i = 0; i < comps.size(); ++i)
        if (i != base_i) others.push_back(order_component(comps[i], nearest_pixel(comps[i], cross)));
    if (others.empty() || others.size() > 2)
        throw UnsupportedTopology("order_with_intersection: unexpected component count");

    // The post-loop tail is the subset whose far end lies farthest from the
    // cross point; the remaining subset is the loop, traversable either way.
    // When the tail is negligible (loop-at-tip) the far-end distances no
    // longer separate, so the loop is simply the larger subset.
    std::vector<Pixel> loop;
    std::vector<Pixel> tail;
    if (others.size() == 2) {
        std::size_t tail_i;
        if (report.topology == SkeletonTopology::loop_at_tip) {
            tail_i = others[0].size() < others[1].size() ? 0 : 1;
        } else {
            const double d0 = (others[0].back() - cross).cast<double>().norm();
            const double d1 = (others[1].back() - cross).cast<double>().norm();
            tail_i = d0 >= d1 ? 0 : 1;
        }
        tail = std::move(others[tail_i]);
        loop = std::move(others[1 - tail_i]);
    } else {
        loop = std::move(others[0]);
    }

    std::vector<Pixel> loop_rev(loop.rbegin(), loop.rend());
    const auto [a2, a2s] = fit_direction_lines(tail_points(s1, params.n_line_fit),
                                               head_points(loop, params.n_line_fit),
                                               head_points(loop_rev, params.n_line_fit));
    if (std::abs(a2 - a2s) < params.epsilon_angle)
        throw AmbiguousDirection("order_with_intersection: continuation angles tie");
    std::vector<Pixel> chosen = a2 <= a2s ? std::move(loop) : std::move(loop_rev);

    // Re-attach the removed junction pixels (except the cross pixel itself)
    // at whichever chain end they touch, so only the cross pixel is dropped.
    std::vector<Pixel> leftovers;
    for (const auto& p : removed)
        if (p != cross) leftovers.push_back(p);
    std::sort(leftovers.begin(), leftovers.end(), lex_less);

    // Each chain end extends outward along its local direction (a chord over
    // the last few pixels); leftovers score by their distance to that
    // forward ray plus a soft gap penalty, so strands grow back through the
    // removed zone without swapping pixels across the junction.
    struct Slot {
        int id;
        Eigen::Vector2d anchor;
        Eigen::Vector2d dir;
    };
    auto make_slots = [&]() {
        auto outward = [](const std::vector<Pixel>& chain, bool at_back) {
            const Eigen::Vector2d end =
                (at_back ? chain.back() : chain.front()).cast<double>();
            Eigen::Vector2d dir = Eigen::Vector2d::Zero();
            if (chain.size() >= 2) {
                const std::size_t span = std::min<std::size_t>(chain.size() - 1, 6);
                const Eigen::Vector2d inner =
                    (at_back ? chain[chain.size() - 1 - span] : chain[span]).cast<double>();
                dir = (end - inner).normalized();
            }
            return std::pair<Eigen::Vector2d, Eigen::Vector2d>(end, dir);
        };
        std::vector<Slot> slots;
        const auto a = outward(s1, true);
        slots.push_back({0, a.first, a.second});
        const auto b = outward(chosen, false);
        slots.push_back({1, b.first, b.second});
        const auto c = outward(chosen, true);
        slots.push_back({2, c.first, c.second});
        if (!tail.empty()) {
            const auto e = outward(tail, false);
            slots.push_back({3, e.first, e.second});
        }
        return slots;
    };
    auto attach = [&](int id, const Pixel& p) {
        switch (id) {
            case 0: s1.push_back(p); break;
            case 1: chosen.insert(chosen.begin(), p); break;
            case 2: chosen.push_back(p); break;
            default: tail.insert(tail.begin(), p); break;
        }
    };
    auto slot_score = [](const Slot& slot, const Eigen::Vector2d& q) {
        const Eigen::Vector2d v = q - slot.anchor;
        const double along = v.dot(slot.dir);
        const Eigen::Vector2d perp = v - along * slot.dir;
        double score = perp.norm();
        if (along < 0.0) score += 2.0 * (-along);  // behind the chain end
        const double gap = std::max(0.0, v.lpNorm<Eigen::Infinity>() - 1.0);
        return score + 0.3 * gap;
    };

    // one pixel per round, always the globally best continuation
    while (!leftovers.empty()) {
        const auto slots = make_slots();
        int best_id = 0;
        double best_score = std::numeric_limits<double>::max();
        auto best_it = leftovers.begin();
        for (auto it = leftovers.begin(); it != leftovers.end(); ++it) {
            const Eigen::Vector2d q = it->cast<double>();
            for (const auto& slot : slots) {
                const double score = slot_score(slot, q);
                if (score < best_score) {
                    best_score = score;
                    best_id = slot.id;
                    best_it = it;
                }
            }
        }
        attach(best_id, *best_it);
        leftovers.erase(best_it);
    }

    std::vector<Pixel> merged = std::move(s1);
    merged.insert(merged.end(), chosen.begin(), chosen.end());
    merged.insert(merged.end(), tail.begin(), tail.end());
    return OrderedPolyline2D(to_points(merged));
}

OrderedPolyline2D order_skeleton(const PixelSet& ps, const OrderingParams& params) {
    const IntersectionReport report = detect_intersection(ps, params);
    if (report.topology == SkeletonTopology::simple) return order_simple(ps, params);
    return order_with_intersection(ps, report, params);
}

}  // namespace pwc3d
