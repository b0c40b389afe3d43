#pragma once

// Floor-plan domain types and the textual layout language.
//
// A layout is written as a sequence of rooms, each a label followed by its
// corner coordinates on the 256x256 grid:
//
//   bedroom: (13,12),(8,12),(8,9),(13,9), kitchen: (8,12),(0,12),(0,9),(8,9)
//
// All geometry is integer-exact; nothing in this header uses floating point
// except the convenience accessors that convert exact values for display.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace plantext {

inline constexpr int kGridExtent = 256;

enum class RoomType : std::uint8_t { bathroom, bedroom, corridor, kitchen, living_room };

inline constexpr std::array<RoomType, 5> kAllRoomTypes = {
    RoomType::bathroom, RoomType::bedroom, RoomType::corridor, RoomType::kitchen,
    RoomType::living_room};

/// Canonical label, e.g. "living_room".
std::string_view to_label(RoomType t);
/// Prose form used in prompts, e.g. "living room".
std::string_view to_words(RoomType t);
/// Accepts both the canonical and the prose form.
std::optional<RoomType> room_type_from_label(std::string_view label);

struct Point {
    int x = 0;
    int y = 0;
    friend constexpr auto operator<=>(const Point&, const Point&) = default;
};

struct Room {
    RoomType kind = RoomType::bedroom;
    std::vector<Point> vertices;
    friend bool operator==(const Room&, const Room&) = default;
};

struct Layout {
    std::vector<Room> rooms;
    friend bool operator==(const Layout&, const Layout&) = default;
};

struct CategoryKey {
    int bedrooms = 0;
    int bathrooms = 0;
    friend constexpr auto operator<=>(const CategoryKey&, const CategoryKey&) = default;
};

/// "B/T", e.g. "2/1".
std::string to_string(CategoryKey c);
CategoryKey category_from_string(std::string_view text);

/// The six bedroom/bathroom classes the synthetic corpus is built from.
inline constexpr std::array<CategoryKey, 6> kTrainingCategories = {
    CategoryKey{1, 1}, CategoryKey{2, 1}, CategoryKey{2, 2},
    CategoryKey{3, 2}, CategoryKey{4, 2}, CategoryKey{4, 3}};

class ParseError : public std::runtime_error {
public:
    enum class Kind { empty_input, unknown_label, malformed_point, out_of_range, too_few_vertices };

    ParseError(Kind kind, std::size_t offset, const std::string& detail);

    Kind kind() const noexcept { return kind_; }
    /// Byte offset into the input where the problem was detected.
    std::size_t offset() const noexcept { return offset_; }

private:
    Kind kind_;
    std::size_t offset_;
};

std::string_view to_string(ParseError::Kind k);

Layout parse_layout(std::string_view text);
std::string serialize_layout(const Layout& layout);

/// serialize_layout(parse_layout(text)); throws ParseError like parse_layout.
std::string canonicalize(std::string_view text);

/// Shoelace sum; positive for counter-clockwise vertex order.
std::int64_t signed_doubled_area(std::span<const Point> vertices);

/// Room area held as twice its value so it stays an integer.
struct Area {
    std::int64_t doubled = 0;
    double value() const { return static_cast<double>(doubled) / 2.0; }
    friend constexpr auto operator<=>(const Area&, const Area&) = default;
};

class DegenerateRoomError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Absolute enclosed area. Throws DegenerateRoomError for zero area.
Area room_area(const Room& room);

/// Exact centroid as (x_num / denom, y_num / denom) with denom > 0.
struct RationalPoint {
    std::int64_t x_num = 0;
    std::int64_t y_num = 0;
    std::int64_t denom = 1;
    double x() const { return static_cast<double>(x_num) / static_cast<double>(denom); }
    double y() const { return static_cast<double>(y_num) / static_cast<double>(denom); }
};

/// Area centroid from polygon first moments. Throws DegenerateRoomError.
RationalPoint room_centroid(const Room& room);

struct BoundingBox {
    int min_x = 0;
    int min_y = 0;
    int max_x = 0;
    int max_y = 0;
    int width() const { return max_x - min_x; }
    int height() const { return max_y - min_y; }
    friend constexpr bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

BoundingBox bounding_box(const Room& room);
/// Tight box over every vertex of every room. Requires at least one vertex.
BoundingBox bounding_box(const Layout& layout);

class ScaleError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Maps a layout drawn on a coarse integer grid onto the 256 grid with the
/// integer factor 256 / coarse_grid, then centers the tight bounding box.
/// Throws ScaleError if coarse_grid does not divide 256 or the layout's
/// extent exceeds coarse_grid.
Layout scale_to_bbox(const Layout& layout, int coarse_grid = 32);

CategoryKey category_of(const Layout& layout);

int count_rooms(const Layout& layout, RoomType kind);

Layout translated(const Layout& layout, int dx, int dy);

}  // namespace plantext
