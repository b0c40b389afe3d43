#include "plantext/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <optional>

#include "plantext/rng.hpp"

namespace plantext {

namespace {

struct Rect {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;
    int width() const { return x1 - x0; }
    int height() const { return y1 - y0; }
};

bool overlaps(const Rect& a, const Rect& b) {
    return a.x0 < b.x1 && b.x0 < a.x1 && a.y0 < b.y1 && b.y0 < a.y1;
}

int shared_wall(const Rect& a, const Rect& b) {
    if (a.y1 == b.y0 || a.y0 == b.y1) return std::max(0, std::min(a.x1, b.x1) - std::max(a.x0, b.x0));
    if (a.x1 == b.x0 || a.x0 == b.x1) return std::max(0, std::min(a.y1, b.y1) - std::max(a.y0, b.y0));
    return 0;
}

struct Shape {
    int w = 0;
    int h = 0;
};

// Rectangles within a 2:1 aspect bound whose area is nearest the target,
// then progressively smaller fallbacks. Ties are shuffled.
std::vector<Shape> candidate_shapes(int target, int grid, Rng& rng) {
    std::vector<Shape> all;
    const int longest = std::min(grid, target);
    for (int w = 2; w <= longest; ++w) {
        for (int h = 2; h <= longest; ++h) {
            if (std::max(w, h) > 2 * std::min(w, h)) continue;
            if (w * h > target + target / 2) continue;
            all.push_back({w, h});
        }
    }
    rng.shuffle(std::span<Shape>(all));
    int best = INT32_MAX;
    for (const Shape& s : all) best = std::min(best, std::abs(s.w * s.h - target));
    std::vector<Shape> nearest;
    std::vector<Shape> smaller;
    for (const Shape& s : all) {
        if (std::abs(s.w * s.h - target) == best) {
            nearest.push_back(s);
        } else if (s.w * s.h < target) {
            smaller.push_back(s);
        }
    }
    std::stable_sort(smaller.begin(), smaller.end(),
                     [](const Shape& a, const Shape& b) { return a.w * a.h > b.w * b.h; });
    nearest.insert(nearest.end(), smaller.begin(), smaller.end());
    return nearest;
}

enum Side { kNorth, kEast, kSouth, kWest };

Side side_of(CompassOctant d) {
    switch (d) {
        case CompassOctant::N: return kNorth;
        case CompassOctant::E: return kEast;
        case CompassOctant::W: return kWest;
        default: return kSouth;
    }
}

// Every placement of a w x h rectangle against `side` of `parent` sharing at
// least `need` units of wall.
std::vector<Rect> slide_positions(const Rect& parent, Side side, int w, int h, int need) {
    std::vector<Rect> out;
    if (side == kNorth || side == kSouth) {
        const int y0 = side == kNorth ? parent.y1 : parent.y0 - h;
        for (int x0 = parent.x0 - w + need; x0 <= parent.x1 - need; ++x0) out.push_back({x0, y0, x0 + w, y0 + h});
    } else {
        const int x0 = side == kEast ? parent.x1 : parent.x0 - w;
        for (int y0 = parent.y0 - h + need; y0 <= parent.y1 - need; ++y0) out.push_back({x0, y0, x0 + w, y0 + h});
    }
    return out;
}

bool is_cardinal(CompassOctant d) {
    return d == CompassOctant::N || d == CompassOctant::E || d == CompassOctant::S || d == CompassOctant::W;
}

std::vector<std::vector<std::size_t>> adjacency_lists(const GenSpec& spec) {
    std::vector<std::vector<std::size_t>> adj(spec.rooms.size());
    for (auto [a, b] : spec.connectivity) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& list : adj) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return adj;
}

std::size_t root_of(const GenSpec& spec) {
    for (std::size_t i = 0; i < spec.rooms.size(); ++i) {
        if (spec.rooms[i].kind == RoomType::living_room) return i;
    }
    return 0;
}

}  // namespace

void check_config(const GenConfig& cfg) {
    if (cfg.coarse_grid <= 0 || kGridExtent % cfg.coarse_grid != 0) {
        throw std::invalid_argument("coarse_grid must divide 256");
    }
    if (cfg.categories.empty()) throw std::invalid_argument("categories must not be empty");
    if (cfg.max_backtracks < 0) throw std::invalid_argument("max_backtracks must be >= 0");
    for (const AreaRange& r : cfg.area_ranges) {
        if (r.lo < 4 || r.hi < r.lo) throw std::invalid_argument("area ranges must satisfy 4 <= lo <= hi");
    }
    if (cfg.max_corridors < 0 || cfg.max_corridors > 2) throw std::invalid_argument("max_corridors must be 0..2");
    if (cfg.min_attach_wall < 1) throw std::invalid_argument("min_attach_wall must be >= 1");
}

void check_spec(const GenSpec& spec) {
    const std::size_t n = spec.rooms.size();
    int living = 0;
    int kitchens = 0;
    int corridors = 0;
    for (const RoomRequest& r : spec.rooms) {
        living += r.kind == RoomType::living_room;
        kitchens += r.kind == RoomType::kitchen;
        corridors += r.kind == RoomType::corridor;
        if (r.target_area < 4) throw SpecError("target areas must be at least 4 coarse cells");
    }
    if (living != 1) throw SpecError("spec needs exactly one living_room");
    if (kitchens != 1) throw SpecError("spec needs exactly one kitchen");
    if (corridors > 2) throw SpecError("spec allows at most two corridors");
    if (!is_cardinal(spec.entrance_side)) throw SpecError("entrance side must be N, E, S or W");
    for (auto [a, b] : spec.connectivity) {
        if (a >= n || b >= n) throw SpecError("connectivity edge refers to a missing room");
        if (a == b) throw SpecError("connectivity edge is a self loop");
    }
    const auto adj = adjacency_lists(spec);
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t reached = 0;
    while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        ++reached;
        for (std::size_t v : adj[u]) {
            if (!seen[v]) {
                seen[v] = true;
                stack.push_back(v);
            }
        }
    }
    if (reached != n) throw SpecError("connectivity graph is disconnected");
}

GenFailure::GenFailure(std::size_t room, int attempts)
    : std::runtime_error("could not place room " + std::to_string(room) + " after " + std::to_string(attempts) +
                         " attempts"),
      room_(room),
      attempts_(attempts) {}

Layout generate_layout(const GenSpec& spec, const GenConfig& cfg) {
    check_config(cfg);
    check_spec(spec);
    const std::size_t n = spec.rooms.size();
    const int grid = cfg.coarse_grid;
    const auto adj = adjacency_lists(spec);
    const std::size_t root = root_of(spec);
    const Side entrance = side_of(spec.entrance_side);

    std::size_t blocked = root;
    const int attempts = cfg.max_backtracks + 1;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(attempt)));
        std::vector<std::optional<Rect>> placed(n);

        // Root near the grid centre.
        {
            const auto shapes = candidate_shapes(spec.rooms[root].target_area, grid, rng);
            const Shape s = shapes.front();
            const int x0 = (grid - s.w) / 2;
            const int y0 = (grid - s.h) / 2;
            placed[root] = Rect{x0, y0, x0 + s.w, y0 + s.h};
        }

        // Breadth-first order with seed-shuffled neighbour lists.
        std::vector<std::size_t> order;
        std::vector<std::size_t> parent(n, root);
        {
            std::vector<bool> seen(n, false);
            std::deque<std::size_t> queue{root};
            seen[root] = true;
            while (!queue.empty()) {
                const std::size_t u = queue.front();
                queue.pop_front();
                order.push_back(u);
                std::vector<std::size_t> next = adj[u];
                rng.shuffle(std::span<std::size_t>(next));
                for (std::size_t v : next) {
                    if (!seen[v]) {
                        seen[v] = true;
                        parent[v] = u;
                        queue.push_back(v);
                    }
                }
            }
        }

        bool ok = true;
        for (std::size_t k = 1; k < order.size() && ok; ++k) {
            const std::size_t u = order[k];
            const Rect& par = *placed[parent[u]];
            std::vector<std::size_t> also;
            for (std::size_t v : adj[u]) {
                if (v != parent[u] && placed[v]) also.push_back(v);
            }

            std::array<Side, 4> sides{kNorth, kEast, kSouth, kWest};
            rng.shuffle(std::span<Side>(sides));
            if (parent[u] == root) {
                // Keep the entrance wall of the root room on the outside.
                std::stable_partition(sides.begin(), sides.end(), [&](Side s) { return s != entrance; });
            }

            bool done = false;
            for (const Shape& shape : candidate_shapes(spec.rooms[u].target_area, grid, rng)) {
                for (Side side : sides) {
                    const bool horizontal_wall = side == kNorth || side == kSouth;
                    const int child_side = horizontal_wall ? shape.w : shape.h;
                    const int parent_side = horizontal_wall ? par.width() : par.height();
                    const int need = std::min({cfg.min_attach_wall, child_side, parent_side});
                    auto positions = slide_positions(par, side, shape.w, shape.h, need);
                    rng.shuffle(std::span<Rect>(positions));
                    for (const Rect& r : positions) {
                        if (r.x0 < 0 || r.y0 < 0 || r.x1 > grid || r.y1 > grid) continue;
                        bool clear = true;
                        for (std::size_t j = 0; j < n && clear; ++j) {
                            if (placed[j] && overlaps(r, *placed[j])) clear = false;
                        }
                        if (!clear) continue;
                        if (!std::all_of(also.begin(), also.end(),
                                         [&](std::size_t v) { return shared_wall(r, *placed[v]) >= 1; })) {
                            continue;
                        }
                        placed[u] = r;
                        done = true;
                        break;
                    }
                    if (done) break;
                }
                if (done) break;
            }
            if (!done) {
                ok = false;
                blocked = u;
            }
        }
        if (!ok) continue;

        Layout coarse;
        coarse.rooms.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Rect& r = *placed[i];
            // Corner order matches the reference notation: top-right first,
            // then counter-clockwise.
            coarse.rooms.push_back(Room{spec.rooms[i].kind,
                                        {{r.x1, r.y1}, {r.x0, r.y1}, {r.x0, r.y0}, {r.x1, r.y0}}});
        }
        return scale_to_bbox(coarse, grid);
    }
    throw GenFailure(blocked, attempts);
}

GenSpec sample_spec(CategoryKey category, std::uint64_t seed, const GenConfig& cfg) {
    SpecRequest req;
    req.category = category;
    return sample_spec(req, seed, cfg);
}

GenSpec sample_spec(const SpecRequest& request, std::uint64_t seed, const GenConfig& cfg) {
    check_config(cfg);
    if (request.category.bedrooms < 0 || request.category.bathrooms < 0) {
        throw SpecError("room counts must be non-negative");
    }
    Rng rng(seed);
    GenSpec spec;
    spec.seed = derive_seed(seed, 0xa11ce);

    const auto add = [&](RoomType t) {
        const AreaRange r = cfg.area_range(t);
        spec.rooms.push_back({t, static_cast<int>(rng.uniform(r.lo, r.hi))});
    };
    add(RoomType::living_room);
    add(RoomType::kitchen);
    int corridors = 0;
    if (request.corridors) {
        corridors = std::clamp(*request.corridors, 0, 2);
    } else {
        for (int k = 0; k < cfg.max_corridors; ++k) corridors += rng.bernoulli(cfg.corridor_probability);
    }
    for (int k = 0; k < corridors; ++k) add(RoomType::corridor);
    for (int k = 0; k < request.category.bedrooms; ++k) add(RoomType::bedroom);
    for (int k = 0; k < request.category.bathrooms; ++k) add(RoomType::bathroom);

    const std::size_t n = spec.rooms.size();
    const auto kind = [&](std::size_t i) { return spec.rooms[i].kind; };
    const auto separated = [&](RoomType a, RoomType b) {
        return std::any_of(request.separated_types.begin(), request.separated_types.end(),
                           [&](const auto& p) { return (p.first == a && p.second == b) || (p.first == b && p.second == a); });
    };
    const auto weight = [](RoomType t) {
        switch (t) {
            case RoomType::corridor: return 3;
            case RoomType::living_room: return 2;
            case RoomType::bathroom: return 0;
            default: return 1;
        }
    };

    // Neighbours a room of this area can plausibly host along its perimeter.
    const auto capacity = [&](std::size_t i) {
        const double perimeter = 4.0 * std::sqrt(static_cast<double>(spec.rooms[i].target_area));
        return std::max(2, static_cast<int>(perimeter / (cfg.min_attach_wall + 1)));
    };
    std::vector<int> degree(n, 0);
    const auto link = [&](std::size_t a, std::size_t b) {
        spec.connectivity.emplace_back(a, b);
        ++degree[a];
        ++degree[b];
    };

    // Living room and corridors form the circulation hub.
    std::vector<std::size_t> in_tree{0};
    for (std::size_t i = 2; i < 2 + static_cast<std::size_t>(corridors); ++i) {
        const std::size_t p = in_tree[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(in_tree.size()) - 1))];
        link(p, i);
        in_tree.push_back(i);
    }
    std::deque<std::size_t> pending;
    pending.push_back(1);
    for (std::size_t i = 2 + static_cast<std::size_t>(corridors); i < n; ++i) pending.push_back(i);
    {
        std::vector<std::size_t> tmp(pending.begin(), pending.end());
        rng.shuffle(std::span<std::size_t>(tmp));
        pending.assign(tmp.begin(), tmp.end());
    }
    std::size_t deferred = 0;
    while (!pending.empty()) {
        const std::size_t u = pending.front();
        pending.pop_front();
        const bool relaxed = deferred > pending.size();
        std::vector<std::size_t> options;
        std::vector<int> weights;
        for (std::size_t p : in_tree) {
            if (!relaxed && (separated(kind(u), kind(p)) || weight(kind(p)) == 0 || degree[p] >= capacity(p))) {
                continue;
            }
            options.push_back(p);
            weights.push_back(relaxed ? 1 : weight(kind(p)));
        }
        if (options.empty()) {
            pending.push_back(u);
            ++deferred;
            continue;
        }
        deferred = 0;
        const int total = std::accumulate(weights.begin(), weights.end(), 0);
        std::int64_t pick = rng.uniform(0, total - 1);
        std::size_t chosen = options.back();
        for (std::size_t k = 0; k < options.size(); ++k) {
            pick -= weights[k];
            if (pick < 0) {
                chosen = options[k];
                break;
            }
        }
        link(chosen, u);
        in_tree.push_back(u);
    }

    for (const auto& [a, b] : request.linked_types) {
        std::vector<std::size_t> as;
        std::vector<std::size_t> bs;
        for (std::size_t i = 0; i < n; ++i) {
            if (kind(i) == a) as.push_back(i);
            if (kind(i) == b) bs.push_back(i);
        }
        if (as.empty() || bs.empty() || a == b) continue;
        const std::size_t x = as[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(as.size()) - 1))];
        const std::size_t y = bs[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(bs.size()) - 1))];
        const bool present = std::any_of(spec.connectivity.begin(), spec.connectivity.end(), [&](const auto& e) {
            return (e.first == x && e.second == y) || (e.first == y && e.second == x);
        });
        if (!present) spec.connectivity.emplace_back(x, y);
    }

    constexpr std::array<CompassOctant, 4> sides{CompassOctant::N, CompassOctant::E, CompassOctant::S,
                                                 CompassOctant::W};
    spec.entrance_side = sides[static_cast<std::size_t>(rng.uniform(0, 3))];
    return spec;
}

}  // namespace plantext
