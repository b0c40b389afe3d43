#pragma once

// Natural-language annotations a layout supports, the prompt grammar they
// render to, and prompt correctness by membership.
//
// Six annotation categories exist:
//   RG   "a house with five rooms"
//   RS   "a house with two bedrooms and three bathrooms"
//   AP   "the living room is adjacent to the bedroom"
//   AN   "the kitchen is not adjacent to the bathroom"
//   LU   "the bathroom is in the south east side of the house"
//   LNU  "a bedroom is in the north side of the house"
//
// A subject written with "the" asserts exactly one room of that type exists;
// "a" asserts two or more.

#include <array>
#include <compare>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "plantext/layout.hpp"
#include "plantext/validity.hpp"

namespace plantext {

enum class CompassOctant : std::uint8_t { N, NE, E, SE, S, SW, W, NW };

inline constexpr std::array<CompassOctant, 8> kAllOctants = {
    CompassOctant::N, CompassOctant::NE, CompassOctant::E, CompassOctant::SE,
    CompassOctant::S, CompassOctant::SW, CompassOctant::W, CompassOctant::NW};

std::string_view to_string(CompassOctant d);  // "NE"
std::string_view to_words(CompassOctant d);   // "north east"

enum class AnnotationCategory { RG, RS, AP, AN, LU, LNU };

inline constexpr std::array<AnnotationCategory, 6> kAllCategories = {
    AnnotationCategory::RG, AnnotationCategory::RS, AnnotationCategory::AP,
    AnnotationCategory::AN, AnnotationCategory::LU, AnnotationCategory::LNU};

std::string_view to_string(AnnotationCategory c);
std::optional<AnnotationCategory> annotation_category_from_string(std::string_view s);

inline constexpr int kMaxAnnotatedCount = 10;

struct RoomCount {
    int rooms = 0;
    friend auto operator<=>(const RoomCount&, const RoomCount&) = default;
};

struct BedBathCount {
    int bedrooms = 0;
    int bathrooms = 0;
    friend auto operator<=>(const BedBathCount&, const BedBathCount&) = default;
};

struct Adjacency {
    RoomType subject = RoomType::bedroom;
    bool subject_unique = true;
    RoomType object = RoomType::kitchen;
    bool negated = false;  // AN when true, AP otherwise
    friend auto operator<=>(const Adjacency&, const Adjacency&) = default;
};

struct Location {
    RoomType subject = RoomType::bedroom;
    bool unique = true;  // LU when true, LNU otherwise
    CompassOctant direction = CompassOctant::N;
    friend auto operator<=>(const Location&, const Location&) = default;
};

using Annotation = std::variant<RoomCount, BedBathCount, Adjacency, Location>;
using AnnotationSet = std::set<Annotation>;

AnnotationCategory category_of(const Annotation& a);

/// Every annotation that can be rendered: counts 1..10, all ordered pairs of
/// distinct room types under both articles, all octants.
std::vector<Annotation> enumerate_annotations();

/// Exact centroid minus layout centre, scaled to an integer vector. The
/// result has the same direction as the real offset.
struct OffsetVector {
    std::int64_t dx = 0;
    std::int64_t dy = 0;
    /// Distance scale: the real offset equals (dx, dy) / scale.
    std::int64_t scale = 1;
};

OffsetVector centroid_offset(const Room& room, const BoundingBox& layout_box);

/// Fraction of the smaller bounding-box side treated as "the centre".
inline constexpr int kDeadzonePercent = 5;

/// Compass sector of a direction, North = +y. Sectors are 45 degrees wide,
/// half-open and clockwise: NE covers bearings [22.5, 67.5). Returns nullopt
/// when the offset is shorter than the deadzone radius.
std::optional<CompassOctant> classify_octant(const OffsetVector& offset, int min_box_side);

/// Direction classification only, without a deadzone. (0,0) has no
/// direction and yields nullopt.
std::optional<CompassOctant> octant_of_direction(std::int64_t dx, std::int64_t dy);

class InvalidLayoutError : public std::invalid_argument {
public:
    explicit InvalidLayoutError(ValidityReport report);
    const ValidityReport& report() const noexcept { return report_; }

private:
    ValidityReport report_;
};

/// Throws InvalidLayoutError unless the layout is valid.
AnnotationSet extract_annotations(const Layout& layout, const ValidityOptions& opts = {});

std::string render_annotation(const Annotation& a);

class PromptParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Case-insensitive, whitespace-tolerant inverse of render_annotation.
/// Also accepts "one bathrooms", "three bedroom" and "west east" (read as
/// west), which occur in the published prompt list.
Annotation parse_prompt(std::string_view text);

/// parse_prompt(prompt) is among extract_annotations(layout). Throws
/// PromptParseError or InvalidLayoutError; those are not "incorrect".
bool check_correctness(std::string_view prompt, const Layout& layout, const ValidityOptions& opts = {});

}  // namespace plantext
