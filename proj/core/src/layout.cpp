#include "plantext/layout.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>

namespace plantext {

std::string_view to_label(RoomType t) {
    switch (t) {
        case RoomType::bathroom: return "bathroom";
        case RoomType::bedroom: return "bedroom";
        case RoomType::corridor: return "corridor";
        case RoomType::kitchen: return "kitchen";
        case RoomType::living_room: return "living_room";
    }
    return "unknown";
}

std::string_view to_words(RoomType t) {
    return t == RoomType::living_room ? std::string_view{"living room"} : to_label(t);
}

std::optional<RoomType> room_type_from_label(std::string_view label) {
    std::string lower(label);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (RoomType t : kAllRoomTypes) {
        if (lower == to_label(t) || lower == to_words(t)) return t;
    }
    return std::nullopt;
}

std::string to_string(CategoryKey c) {
    return std::to_string(c.bedrooms) + "/" + std::to_string(c.bathrooms);
}

CategoryKey category_from_string(std::string_view text) {
    const auto slash = text.find('/');
    CategoryKey out;
    if (slash == std::string_view::npos) {
        throw std::invalid_argument("category must look like B/T: " + std::string(text));
    }
    const auto parse_count = [&](std::string_view part, int& dst) {
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), dst);
        if (ec != std::errc{} || ptr != part.data() + part.size() || dst < 0) {
            throw std::invalid_argument("category must look like B/T: " + std::string(text));
        }
    };
    parse_count(text.substr(0, slash), out.bedrooms);
    parse_count(text.substr(slash + 1), out.bathrooms);
    return out;
}

std::string_view to_string(ParseError::Kind k) {
    switch (k) {
        case ParseError::Kind::empty_input: return "empty_input";
        case ParseError::Kind::unknown_label: return "unknown_label";
        case ParseError::Kind::malformed_point: return "malformed_point";
        case ParseError::Kind::out_of_range: return "out_of_range";
        case ParseError::Kind::too_few_vertices: return "too_few_vertices";
    }
    return "unknown";
}

ParseError::ParseError(Kind kind, std::size_t offset, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + " at byte " + std::to_string(offset) +
                         ": " + detail),
      kind_(kind),
      offset_(offset) {}

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

class LayoutParser {
public:
    explicit LayoutParser(std::string_view text) : text_(text) {}

    Layout run() {
        skip_ws();
        if (at_end()) throw ParseError(ParseError::Kind::empty_input, pos_, "no rooms");
        Layout out;
        while (true) {
            out.rooms.push_back(room());
            skip_ws();
            if (at_end()) {
                if (separated_) {
                    throw ParseError(ParseError::Kind::unknown_label, pos_, "expected room after ','");
                }
                break;
            }
            if (!separated_) {
                throw ParseError(ParseError::Kind::malformed_point, pos_, "expected ',' or end of input");
            }
        }
        return out;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }
    void skip_ws() {
        while (!at_end() && is_space(text_[pos_])) ++pos_;
    }

    Room room() {
        const std::size_t start = pos_;
        const std::size_t colon = text_.find(':', pos_);
        if (colon == std::string_view::npos) {
            throw ParseError(ParseError::Kind::unknown_label, start, "expected '<label>:'");
        }
        std::string_view label = text_.substr(pos_, colon - pos_);
        while (!label.empty() && is_space(label.back())) label.remove_suffix(1);
        const auto kind = room_type_from_label(label);
        if (!kind) {
            throw ParseError(ParseError::Kind::unknown_label, start,
                             "unknown room label '" + std::string(label.substr(0, 32)) + "'");
        }
        pos_ = colon + 1;
        Room r{*kind, {}};
        skip_ws();
        r.vertices.push_back(point());
        separated_ = false;
        while (true) {
            skip_ws();
            if (peek() != ',') break;
            ++pos_;
            skip_ws();
            if (peek() != '(') {  // room separator
                separated_ = true;
                break;
            }
            r.vertices.push_back(point());
        }
        if (r.vertices.size() < 3) {
            throw ParseError(ParseError::Kind::too_few_vertices, start,
                             std::to_string(r.vertices.size()) + " vertices, need at least 3");
        }
        return r;
    }

    Point point() {
        if (peek() != '(') throw ParseError(ParseError::Kind::malformed_point, pos_, "expected '('");
        ++pos_;
        skip_ws();
        const int x = coordinate();
        skip_ws();
        if (peek() != ',') throw ParseError(ParseError::Kind::malformed_point, pos_, "expected ','");
        ++pos_;
        skip_ws();
        const int y = coordinate();
        skip_ws();
        if (peek() != ')') throw ParseError(ParseError::Kind::malformed_point, pos_, "expected ')'");
        ++pos_;
        return {x, y};
    }

    int coordinate() {
        const std::size_t start = pos_;
        std::size_t end = pos_;
        if (end < text_.size() && text_[end] == '-') ++end;
        while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
        const std::string_view digits = text_.substr(start, end - start);
        if (digits.empty() || digits == "-") {
            throw ParseError(ParseError::Kind::malformed_point, start, "expected integer");
        }
        long long value = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
        if (ec == std::errc::result_out_of_range || value < 0 || value > kGridExtent) {
            throw ParseError(ParseError::Kind::out_of_range, start,
                             "coordinate " + std::string(digits.substr(0, 24)) + " outside [0,256]");
        }
        pos_ = end;
        return static_cast<int>(value);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    bool separated_ = false;
};

}  // namespace

Layout parse_layout(std::string_view text) { return LayoutParser(text).run(); }

std::string serialize_layout(const Layout& layout) {
    std::string out;
    out.reserve(layout.rooms.size() * 48);
    for (std::size_t i = 0; i < layout.rooms.size(); ++i) {
        if (i) out += ", ";
        const Room& r = layout.rooms[i];
        out += to_label(r.kind);
        out += ": ";
        for (std::size_t v = 0; v < r.vertices.size(); ++v) {
            if (v) out += ',';
            out += '(';
            out += std::to_string(r.vertices[v].x);
            out += ',';
            out += std::to_string(r.vertices[v].y);
            out += ')';
        }
    }
    return out;
}

std::string canonicalize(std::string_view text) { return serialize_layout(parse_layout(text)); }

std::int64_t signed_doubled_area(std::span<const Point> vertices) {
    std::int64_t sum = 0;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = vertices[i];
        const Point& b = vertices[(i + 1) % n];
        sum += static_cast<std::int64_t>(a.x) * b.y - static_cast<std::int64_t>(b.x) * a.y;
    }
    return sum;
}

Area room_area(const Room& room) {
    const std::int64_t s = signed_doubled_area(room.vertices);
    if (s == 0) throw DegenerateRoomError("room has zero area");
    return Area{s < 0 ? -s : s};
}

RationalPoint room_centroid(const Room& room) {
    const auto& v = room.vertices;
    const std::size_t n = v.size();
    std::int64_t s = 0;
    std::int64_t mx = 0;
    std::int64_t my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = v[i];
        const Point& b = v[(i + 1) % n];
        const std::int64_t cross = static_cast<std::int64_t>(a.x) * b.y - static_cast<std::int64_t>(b.x) * a.y;
        s += cross;
        mx += (a.x + b.x) * cross;
        my += (a.y + b.y) * cross;
    }
    if (s == 0) throw DegenerateRoomError("room has zero area");
    // centroid = moment / (6 * area) = moment / (3 * s)
    std::int64_t denom = 3 * s;
    if (denom < 0) {
        denom = -denom;
        mx = -mx;
        my = -my;
    }
    return {mx, my, denom};
}

BoundingBox bounding_box(const Room& room) {
    if (room.vertices.empty()) throw std::invalid_argument("room has no vertices");
    BoundingBox box{std::numeric_limits<int>::max(), std::numeric_limits<int>::max(),
                    std::numeric_limits<int>::min(), std::numeric_limits<int>::min()};
    for (const Point& p : room.vertices) {
        box.min_x = std::min(box.min_x, p.x);
        box.min_y = std::min(box.min_y, p.y);
        box.max_x = std::max(box.max_x, p.x);
        box.max_y = std::max(box.max_y, p.y);
    }
    return box;
}

BoundingBox bounding_box(const Layout& layout) {
    if (layout.rooms.empty()) throw std::invalid_argument("layout has no rooms");
    BoundingBox box = bounding_box(layout.rooms.front());
    for (const Room& r : layout.rooms) {
        const BoundingBox b = bounding_box(r);
        box.min_x = std::min(box.min_x, b.min_x);
        box.min_y = std::min(box.min_y, b.min_y);
        box.max_x = std::max(box.max_x, b.max_x);
        box.max_y = std::max(box.max_y, b.max_y);
    }
    return box;
}

Layout scale_to_bbox(const Layout& layout, int coarse_grid) {
    if (coarse_grid <= 0 || kGridExtent % coarse_grid != 0) {
        throw ScaleError("coarse grid " + std::to_string(coarse_grid) + " does not divide 256");
    }
    const int factor = kGridExtent / coarse_grid;
    const BoundingBox box = bounding_box(layout);
    if (box.width() > coarse_grid || box.height() > coarse_grid) {
        throw ScaleError("layout extent " + std::to_string(box.width()) + "x" +
                         std::to_string(box.height()) + " exceeds coarse grid " +
                         std::to_string(coarse_grid));
    }
    const int off_x = (kGridExtent - box.width() * factor) / 2;
    const int off_y = (kGridExtent - box.height() * factor) / 2;
    Layout out = layout;
    for (Room& r : out.rooms) {
        for (Point& p : r.vertices) {
            p.x = (p.x - box.min_x) * factor + off_x;
            p.y = (p.y - box.min_y) * factor + off_y;
        }
    }
    return out;
}

int count_rooms(const Layout& layout, RoomType kind) {
    return static_cast<int>(std::count_if(layout.rooms.begin(), layout.rooms.end(),
                                          [&](const Room& r) { return r.kind == kind; }));
}

CategoryKey category_of(const Layout& layout) {
    return {count_rooms(layout, RoomType::bedroom), count_rooms(layout, RoomType::bathroom)};
}

Layout translated(const Layout& layout, int dx, int dy) {
    Layout out = layout;
    for (Room& r : out.rooms) {
        for (Point& p : r.vertices) {
            p.x += dx;
            p.y += dy;
        }
    }
    return out;
}

}  // namespace plantext
