#pragma once

// Geometric validity of a layout: every room a simple rectilinear polygon
// with positive area, room interiors pairwise disjoint (shared walls are
// fine), and the wall-sharing graph connected.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "plantext/layout.hpp"

namespace plantext {

struct ValidityOptions {
    /// Minimum collinear wall overlap, in grid units, for two rooms to count
    /// as adjacent. Point contact never counts.
    std::int64_t min_shared_wall = 1;
};

enum class ViolationKind { malformed_polygon, self_intersecting, overlapping_pair, orphan_room };

std::string_view to_string(ViolationKind k);

struct Violation {
    ViolationKind kind = ViolationKind::malformed_polygon;
    std::vector<std::size_t> rooms;
    std::string detail;
    friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidityReport {
    bool valid = true;
    std::vector<Violation> violations;

    bool has(ViolationKind k) const;
};

struct AdjacencyEdge {
    std::size_t a = 0;  // a < b
    std::size_t b = 0;
    std::int64_t shared_length = 0;
    friend bool operator==(const AdjacencyEdge&, const AdjacencyEdge&) = default;
};

struct AdjacencyGraph {
    std::size_t node_count = 0;
    std::vector<AdjacencyEdge> edges;  // sorted by (a, b)

    bool adjacent(std::size_t i, std::size_t j) const;
    std::vector<std::vector<std::size_t>> neighbours() const;
};

class MalformedRoomError : public std::invalid_argument {
public:
    MalformedRoomError(std::size_t room, const std::string& detail);
    std::size_t room() const noexcept { return room_; }

private:
    std::size_t room_;
};

/// Why a single room is not a simple, rectilinear, positive-area polygon;
/// nullopt when it is well formed.
std::optional<Violation> check_room(const Room& room, std::size_t index);

/// Total collinear boundary overlap between two rooms.
std::int64_t shared_wall_length(const Room& a, const Room& b);

/// True when the open interiors of two well-formed rooms intersect.
bool interiors_overlap(const Room& a, const Room& b);

/// Throws MalformedRoomError naming the first room that fails check_room.
AdjacencyGraph adjacency_graph(const Layout& layout, const ValidityOptions& opts = {});

ValidityReport validate(const Layout& layout, const ValidityOptions& opts = {});

/// Parses then validates. Parse failures are folded into the report as a
/// malformed_polygon violation carrying the parser's message.
ValidityReport validate_text(std::string_view text, const ValidityOptions& opts = {});

}  // namespace plantext
