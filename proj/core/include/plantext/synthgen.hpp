#pragma once

// Synthetic residential floor plans. Rooms are grown one at a time on a
// coarse grid: each new room is an axis-aligned rectangle pressed against a
// room it must connect to, so every requested connection becomes a shared
// wall. The finished plan is scaled onto the 256 grid.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "plantext/layout.hpp"
#include "plantext/semantics.hpp"

namespace plantext {

struct RoomRequest {
    RoomType kind = RoomType::bedroom;
    int target_area = 4;  // coarse cells
    friend bool operator==(const RoomRequest&, const RoomRequest&) = default;
};

struct GenSpec {
    std::vector<RoomRequest> rooms;
    std::vector<std::pair<std::size_t, std::size_t>> connectivity;
    CompassOctant entrance_side = CompassOctant::S;  // one of N, E, S, W
    std::uint64_t seed = 0;
    friend bool operator==(const GenSpec&, const GenSpec&) = default;
};

struct AreaRange {
    int lo = 4;
    int hi = 4;
};

struct GenConfig {
    int coarse_grid = 32;
    std::vector<CategoryKey> categories{kTrainingCategories.begin(), kTrainingCategories.end()};
    int max_backtracks = 50;
    /// Indexed by RoomType.
    std::array<AreaRange, 5> area_ranges{{{4, 9}, {9, 20}, {4, 12}, {6, 16}, {12, 30}}};
    double corridor_probability = 0.5;
    int max_corridors = 2;
    /// Wall a child room shares with the room it attaches to, in coarse
    /// units, capped by the length of the shorter of the two sides.
    int min_attach_wall = 3;

    AreaRange area_range(RoomType t) const { return area_ranges[static_cast<std::size_t>(t)]; }
};

/// Throws std::invalid_argument if the config is unusable.
void check_config(const GenConfig& cfg);

class SpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Throws SpecError when a GenSpec breaks its invariants.
void check_spec(const GenSpec& spec);

class GenFailure : public std::runtime_error {
public:
    GenFailure(std::size_t room, int attempts);
    std::size_t room() const noexcept { return room_; }
    int attempts() const noexcept { return attempts_; }

private:
    std::size_t room_;
    int attempts_;
};

/// Deterministic in (spec, cfg). Throws SpecError or GenFailure.
Layout generate_layout(const GenSpec& spec, const GenConfig& cfg = {});

/// Extra structure a caller wants in a sampled spec.
struct SpecRequest {
    CategoryKey category{1, 1};
    /// Fixed corridor count; sampled when unset.
    std::optional<int> corridors;
    /// Connect one room of the first type to one of the second.
    std::vector<std::pair<RoomType, RoomType>> linked_types;
    /// Never attach a room of either type directly to the other.
    std::vector<std::pair<RoomType, RoomType>> separated_types;
};

GenSpec sample_spec(CategoryKey category, std::uint64_t seed, const GenConfig& cfg = {});
GenSpec sample_spec(const SpecRequest& request, std::uint64_t seed, const GenConfig& cfg = {});

}  // namespace plantext
