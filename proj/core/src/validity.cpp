#include "plantext/validity.hpp"

#include <algorithm>
#include <numeric>

namespace plantext {

std::string_view to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::malformed_polygon: return "malformed_polygon";
        case ViolationKind::self_intersecting: return "self_intersecting";
        case ViolationKind::overlapping_pair: return "overlapping_pair";
        case ViolationKind::orphan_room: return "orphan_room";
    }
    return "unknown";
}

bool ValidityReport::has(ViolationKind k) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.kind == k; });
}

bool AdjacencyGraph::adjacent(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return std::any_of(edges.begin(), edges.end(),
                       [&](const AdjacencyEdge& e) { return e.a == i && e.b == j; });
}

std::vector<std::vector<std::size_t>> AdjacencyGraph::neighbours() const {
    std::vector<std::vector<std::size_t>> out(node_count);
    for (const AdjacencyEdge& e : edges) {
        out[e.a].push_back(e.b);
        out[e.b].push_back(e.a);
    }
    return out;
}

MalformedRoomError::MalformedRoomError(std::size_t room, const std::string& detail)
    : std::invalid_argument("room " + std::to_string(room) + ": " + detail), room_(room) {}

namespace {

std::int64_t orient(Point a, Point b, Point c) {
    return static_cast<std::int64_t>(b.x - a.x) * (c.y - a.y) -
           static_cast<std::int64_t>(b.y - a.y) * (c.x - a.x);
}

int sign(std::int64_t v) { return (v > 0) - (v < 0); }

bool on_segment(Point a, Point b, Point p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

// Closed segments [a,b] and [c,d] share at least one point.
bool segments_touch(Point a, Point b, Point c, Point d) {
    const int o1 = sign(orient(a, b, c));
    const int o2 = sign(orient(a, b, d));
    const int o3 = sign(orient(c, d, a));
    const int o4 = sign(orient(c, d, b));
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

// Ray cast on doubled coordinates; the query point never lies on an edge.
bool inside_doubled(const Room& room, std::int64_t qx, std::int64_t qy) {
    bool in = false;
    const auto& v = room.vertices;
    for (std::size_t i = 0, n = v.size(); i < n; ++i) {
        const std::int64_t ax = 2 * v[i].x;
        const std::int64_t ay = 2 * v[i].y;
        const std::int64_t bx = 2 * v[(i + 1) % n].x;
        const std::int64_t by = 2 * v[(i + 1) % n].y;
        if ((ay > qy) == (by > qy)) continue;
        // qx < ax + (qy - ay) * (bx - ax) / (by - ay)
        const std::int64_t lhs = (qx - ax) * (by - ay);
        const std::int64_t rhs = (qy - ay) * (bx - ax);
        if (by > ay ? lhs < rhs : lhs > rhs) in = !in;
    }
    return in;
}

bool boxes_touch(const BoundingBox& a, const BoundingBox& b) {
    return a.min_x <= b.max_x && b.min_x <= a.max_x && a.min_y <= b.max_y && b.min_y <= a.max_y;
}

}  // namespace

std::optional<Violation> check_room(const Room& room, std::size_t index) {
    const auto& v = room.vertices;
    const std::size_t n = v.size();
    const auto malformed = [&](std::string detail) {
        return Violation{ViolationKind::malformed_polygon, {index}, std::move(detail)};
    };
    if (n < 4) return malformed(std::to_string(n) + " vertices; a rectilinear room needs at least 4");
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = v[i];
        const Point b = v[(i + 1) % n];
        if (a == b) return malformed("repeated consecutive vertex at position " + std::to_string(i));
        if (a.x != b.x && a.y != b.y) {
            return malformed("edge " + std::to_string(i) + " is not axis-aligned");
        }
    }
    if (signed_doubled_area(v) == 0) return malformed("zero enclosed area");

    for (std::size_t i = 0; i < n; ++i) {
        const Point a = v[i];
        const Point b = v[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            const Point c = v[j];
            const Point d = v[(j + 1) % n];
            const bool next = j == i + 1;
            const bool wrap = i == 0 && j == n - 1;
            if (next || wrap) {
                // Neighbouring edges may only share their common vertex; a
                // collinear reversal folds one edge back over the other.
                const Point shared = next ? b : a;
                const Point p = next ? a : b;
                const Point q = next ? d : c;
                if (orient(p, shared, q) == 0) {
                    const std::int64_t dot = static_cast<std::int64_t>(p.x - shared.x) * (q.x - shared.x) +
                                             static_cast<std::int64_t>(p.y - shared.y) * (q.y - shared.y);
                    if (dot > 0) {
                        return Violation{ViolationKind::self_intersecting, {index},
                                         "edges " + std::to_string(i) + " and " + std::to_string(j) +
                                             " fold back over each other"};
                    }
                }
                continue;
            }
            if (segments_touch(a, b, c, d)) {
                return Violation{ViolationKind::self_intersecting, {index},
                                 "edges " + std::to_string(i) + " and " + std::to_string(j) + " intersect"};
            }
        }
    }
    return std::nullopt;
}

std::int64_t shared_wall_length(const Room& a, const Room& b) {
    std::int64_t total = 0;
    const auto& va = a.vertices;
    const auto& vb = b.vertices;
    for (std::size_t i = 0; i < va.size(); ++i) {
        const Point p = va[i];
        const Point q = va[(i + 1) % va.size()];
        for (std::size_t j = 0; j < vb.size(); ++j) {
            const Point r = vb[j];
            const Point s = vb[(j + 1) % vb.size()];
            if (p.y == q.y && r.y == s.y && p.y == r.y) {
                const int lo = std::max(std::min(p.x, q.x), std::min(r.x, s.x));
                const int hi = std::min(std::max(p.x, q.x), std::max(r.x, s.x));
                if (hi > lo) total += hi - lo;
            } else if (p.x == q.x && r.x == s.x && p.x == r.x) {
                const int lo = std::max(std::min(p.y, q.y), std::min(r.y, s.y));
                const int hi = std::min(std::max(p.y, q.y), std::max(r.y, s.y));
                if (hi > lo) total += hi - lo;
            }
        }
    }
    return total;
}

bool interiors_overlap(const Room& a, const Room& b) {
    const BoundingBox ba = bounding_box(a);
    const BoundingBox bb = bounding_box(b);
    const int lo_x = std::max(ba.min_x, bb.min_x);
    const int hi_x = std::min(ba.max_x, bb.max_x);
    const int lo_y = std::max(ba.min_y, bb.min_y);
    const int hi_y = std::min(ba.max_y, bb.max_y);
    if (hi_x <= lo_x || hi_y <= lo_y) return false;

    // Every edge lies on one of these grid lines, so each cell between
    // consecutive lines is wholly inside or wholly outside each room.
    std::vector<int> xs{lo_x, hi_x};
    std::vector<int> ys{lo_y, hi_y};
    for (const Room* r : {&a, &b}) {
        for (const Point& p : r->vertices) {
            if (p.x > lo_x && p.x < hi_x) xs.push_back(p.x);
            if (p.y > lo_y && p.y < hi_y) ys.push_back(p.y);
        }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const std::int64_t cx = static_cast<std::int64_t>(xs[i]) + xs[i + 1];
        for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
            const std::int64_t cy = static_cast<std::int64_t>(ys[j]) + ys[j + 1];
            if (inside_doubled(a, cx, cy) && inside_doubled(b, cx, cy)) return true;
        }
    }
    return false;
}

namespace {

AdjacencyGraph build_graph(const Layout& layout, const std::vector<BoundingBox>& boxes,
                           const ValidityOptions& opts) {
    AdjacencyGraph g;
    g.node_count = layout.rooms.size();
    for (std::size_t i = 0; i < layout.rooms.size(); ++i) {
        for (std::size_t j = i + 1; j < layout.rooms.size(); ++j) {
            if (!boxes_touch(boxes[i], boxes[j])) continue;
            const std::int64_t len = shared_wall_length(layout.rooms[i], layout.rooms[j]);
            if (len > 0 && len >= opts.min_shared_wall) g.edges.push_back({i, j, len});
        }
    }
    return g;
}

}  // namespace

AdjacencyGraph adjacency_graph(const Layout& layout, const ValidityOptions& opts) {
    std::vector<BoundingBox> boxes;
    boxes.reserve(layout.rooms.size());
    for (std::size_t i = 0; i < layout.rooms.size(); ++i) {
        if (auto bad = check_room(layout.rooms[i], i)) throw MalformedRoomError(i, bad->detail);
        boxes.push_back(bounding_box(layout.rooms[i]));
    }
    return build_graph(layout, boxes, opts);
}

ValidityReport validate(const Layout& layout, const ValidityOptions& opts) {
    ValidityReport report;
    const std::size_t n = layout.rooms.size();
    if (n == 0) {
        report.valid = false;
        report.violations.push_back({ViolationKind::malformed_polygon, {}, "layout has no rooms"});
        return report;
    }

    std::vector<bool> well_formed(n, true);
    std::vector<BoundingBox> boxes(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (auto bad = check_room(layout.rooms[i], i)) {
            well_formed[i] = false;
            report.violations.push_back(std::move(*bad));
        } else {
            boxes[i] = bounding_box(layout.rooms[i]);
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (!well_formed[i]) continue;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!well_formed[j] || !boxes_touch(boxes[i], boxes[j])) continue;
            if (interiors_overlap(layout.rooms[i], layout.rooms[j])) {
                report.violations.push_back({ViolationKind::overlapping_pair, {i, j},
                                             "rooms " + std::to_string(i) + " and " +
                                                 std::to_string(j) + " overlap"});
            }
        }
    }

    const bool all_well_formed = std::all_of(well_formed.begin(), well_formed.end(), [](bool b) { return b; });
    if (all_well_formed && n > 1) {
        const AdjacencyGraph g = build_graph(layout, boxes, opts);
        const auto nbrs = g.neighbours();
        std::vector<int> component(n, -1);
        std::vector<std::size_t> sizes;
        for (std::size_t s = 0; s < n; ++s) {
            if (component[s] >= 0) continue;
            const int id = static_cast<int>(sizes.size());
            std::size_t size = 0;
            std::vector<std::size_t> stack{s};
            component[s] = id;
            while (!stack.empty()) {
                const std::size_t u = stack.back();
                stack.pop_back();
                ++size;
                for (std::size_t w : nbrs[u]) {
                    if (component[w] < 0) {
                        component[w] = id;
                        stack.push_back(w);
                    }
                }
            }
            sizes.push_back(size);
        }
        if (sizes.size() > 1) {
            // Components are numbered by lowest member, so max_element keeps
            // the lowest-indexed one among equally large components.
            const int main = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
            Violation orphan{ViolationKind::orphan_room, {}, "adjacency graph is disconnected"};
            for (std::size_t i = 0; i < n; ++i) {
                if (component[i] != main) orphan.rooms.push_back(i);
            }
            report.violations.push_back(std::move(orphan));
        }
    }

    report.valid = report.violations.empty();
    return report;
}

ValidityReport validate_text(std::string_view text, const ValidityOptions& opts) {
    Layout layout;
    try {
        layout = parse_layout(text);
    } catch (const ParseError& e) {
        ValidityReport report;
        report.valid = false;
        report.violations.push_back({ViolationKind::malformed_polygon, {}, std::string("parse failure: ") + e.what()});
        return report;
    }
    return validate(layout, opts);
}

}  // namespace plantext
