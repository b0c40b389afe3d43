#include "plantext/semantics.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace plantext {

namespace {

constexpr std::array<std::string_view, 11> kNumberWords = {
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten"};

std::string number_word(int n) {
    if (n >= 0 && n <= kMaxAnnotatedCount) return std::string(kNumberWords[static_cast<std::size_t>(n)]);
    return std::to_string(n);
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

__extension__ typedef __int128 i128;

}  // namespace

std::string_view to_string(CompassOctant d) {
    constexpr std::array<std::string_view, 8> names = {"N", "NE", "E", "SE", "S", "SW", "W", "NW"};
    return names[static_cast<std::size_t>(d)];
}

std::string_view to_words(CompassOctant d) {
    constexpr std::array<std::string_view, 8> words = {
        "north", "north east", "east", "south east", "south", "south west", "west", "north west"};
    return words[static_cast<std::size_t>(d)];
}

std::string_view to_string(AnnotationCategory c) {
    switch (c) {
        case AnnotationCategory::RG: return "RG";
        case AnnotationCategory::RS: return "RS";
        case AnnotationCategory::AP: return "AP";
        case AnnotationCategory::AN: return "AN";
        case AnnotationCategory::LU: return "LU";
        case AnnotationCategory::LNU: return "LNU";
    }
    return "?";
}

std::optional<AnnotationCategory> annotation_category_from_string(std::string_view s) {
    for (AnnotationCategory c : kAllCategories) {
        if (to_string(c) == s) return c;
    }
    return std::nullopt;
}

AnnotationCategory category_of(const Annotation& a) {
    return std::visit(overloaded{
                          [](const RoomCount&) { return AnnotationCategory::RG; },
                          [](const BedBathCount&) { return AnnotationCategory::RS; },
                          [](const Adjacency& x) { return x.negated ? AnnotationCategory::AN : AnnotationCategory::AP; },
                          [](const Location& x) { return x.unique ? AnnotationCategory::LU : AnnotationCategory::LNU; },
                      },
                      a);
}

std::vector<Annotation> enumerate_annotations() {
    std::vector<Annotation> out;
    for (int n = 1; n <= kMaxAnnotatedCount; ++n) out.emplace_back(RoomCount{n});
    for (int b = 1; b <= kMaxAnnotatedCount; ++b) {
        for (int t = 1; t <= kMaxAnnotatedCount; ++t) out.emplace_back(BedBathCount{b, t});
    }
    for (RoomType s : kAllRoomTypes) {
        for (bool unique : {true, false}) {
            for (RoomType o : kAllRoomTypes) {
                if (o == s) continue;
                for (bool negated : {false, true}) out.emplace_back(Adjacency{s, unique, o, negated});
            }
            for (CompassOctant d : kAllOctants) out.emplace_back(Location{s, unique, d});
        }
    }
    return out;
}

OffsetVector centroid_offset(const Room& room, const BoundingBox& box) {
    const RationalPoint c = room_centroid(room);
    // c = m / D and centre = s / 2, so offset = (2m - D s) / (2D).
    const std::int64_t sx = static_cast<std::int64_t>(box.min_x) + box.max_x;
    const std::int64_t sy = static_cast<std::int64_t>(box.min_y) + box.max_y;
    return {2 * c.x_num - c.denom * sx, 2 * c.y_num - c.denom * sy, 2 * c.denom};
}

std::optional<CompassOctant> octant_of_direction(std::int64_t x, std::int64_t y) {
    if (x == 0 && y == 0) return std::nullopt;
    int quadrant = 0;
    i128 a = 0;  // offset from the quadrant's starting axis
    i128 b = 0;  // along the starting axis, always > 0
    if (x >= 0 && y > 0) {
        quadrant = 0, a = x, b = y;
    } else if (x > 0 && y <= 0) {
        quadrant = 1, a = -static_cast<i128>(y), b = x;
    } else if (x <= 0 && y < 0) {
        quadrant = 2, a = -static_cast<i128>(x), b = -static_cast<i128>(y);
    } else {
        quadrant = 3, a = y, b = -static_cast<i128>(x);
    }
    // Angle from the starting axis is atan(a / b). tan(22.5) = sqrt2 - 1 and
    // tan(67.5) = sqrt2 + 1, so both tests reduce to comparing squares.
    int sub = 1;
    if ((a + b) * (a + b) < 2 * b * b) {
        sub = 0;
    } else if (a >= b && (a - b) * (a - b) >= 2 * b * b) {
        sub = 2;
    }
    return static_cast<CompassOctant>((2 * quadrant + sub) % 8);
}

std::optional<CompassOctant> classify_octant(const OffsetVector& v, int min_box_side) {
    // |v| / scale < min_side * 5 / 100
    const i128 len2 = static_cast<i128>(v.dx) * v.dx + static_cast<i128>(v.dy) * v.dy;
    const i128 radius = static_cast<i128>(min_box_side) * v.scale * kDeadzonePercent;
    if (len2 * 100 * 100 < radius * radius) return std::nullopt;
    return octant_of_direction(v.dx, v.dy);
}

namespace {

std::string describe(const ValidityReport& r) {
    std::string out = "layout is invalid";
    for (const Violation& v : r.violations) {
        out += "; ";
        out += to_string(v.kind);
        if (!v.detail.empty()) out += " (" + v.detail + ")";
    }
    return out;
}

}  // namespace

InvalidLayoutError::InvalidLayoutError(ValidityReport report)
    : std::invalid_argument(describe(report)), report_(std::move(report)) {}

AnnotationSet extract_annotations(const Layout& layout, const ValidityOptions& opts) {
    ValidityReport report = validate(layout, opts);
    if (!report.valid) throw InvalidLayoutError(std::move(report));

    AnnotationSet out;
    const int n = static_cast<int>(layout.rooms.size());
    std::array<int, 5> count{};
    for (const Room& r : layout.rooms) ++count[static_cast<std::size_t>(r.kind)];
    const auto count_of = [&](RoomType t) { return count[static_cast<std::size_t>(t)]; };

    if (n >= 1 && n <= kMaxAnnotatedCount) out.insert(RoomCount{n});
    const int beds = count_of(RoomType::bedroom);
    const int baths = count_of(RoomType::bathroom);
    if (beds >= 1 && baths >= 1 && beds <= kMaxAnnotatedCount && baths <= kMaxAnnotatedCount) {
        out.insert(BedBathCount{beds, baths});
    }

    const AdjacencyGraph graph = adjacency_graph(layout, opts);
    const auto nbrs = graph.neighbours();
    for (RoomType s : kAllRoomTypes) {
        if (count_of(s) == 0) continue;
        const bool unique = count_of(s) == 1;
        for (RoomType o : kAllRoomTypes) {
            if (o == s || count_of(o) == 0) continue;
            bool some_adjacent = false;
            bool some_apart = false;
            for (std::size_t i = 0; i < layout.rooms.size(); ++i) {
                if (layout.rooms[i].kind != s) continue;
                const bool touches = std::any_of(nbrs[i].begin(), nbrs[i].end(), [&](std::size_t j) {
                    return layout.rooms[j].kind == o;
                });
                (touches ? some_adjacent : some_apart) = true;
            }
            if (some_adjacent) out.insert(Adjacency{s, unique, o, false});
            if (some_apart) out.insert(Adjacency{s, unique, o, true});
        }
    }

    const BoundingBox box = bounding_box(layout);
    const int min_side = std::min(box.width(), box.height());
    for (const Room& r : layout.rooms) {
        if (auto d = classify_octant(centroid_offset(r, box), min_side)) {
            out.insert(Location{r.kind, count_of(r.kind) == 1, *d});
        }
    }
    return out;
}

std::string render_annotation(const Annotation& a) {
    const auto plural = [](int n, std::string_view noun) {
        std::string s = number_word(n) + " " + std::string(noun);
        if (n != 1) s += 's';
        return s;
    };
    return std::visit(
        overloaded{
            [&](const RoomCount& x) { return "a house with " + plural(x.rooms, "room"); },
            [&](const BedBathCount& x) {
                return "a house with " + plural(x.bedrooms, "bedroom") + " and " + plural(x.bathrooms, "bathroom");
            },
            [](const Adjacency& x) {
                std::string s = x.subject_unique ? "the " : "a ";
                s += to_words(x.subject);
                s += x.negated ? " is not adjacent to the " : " is adjacent to the ";
                s += to_words(x.object);
                return s;
            },
            [](const Location& x) {
                std::string s = x.unique ? "the " : "a ";
                s += to_words(x.subject);
                s += " is in the ";
                s += to_words(x.direction);
                s += " side of the house";
                return s;
            },
        },
        a);
}

namespace {

std::vector<std::string> tokenize(std::string_view text) {
    std::string lowered(text);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::istringstream in(lowered);
    std::vector<std::string> raw;
    for (std::string tok; in >> tok;) raw.push_back(tok);
    if (!raw.empty()) {
        std::string& last = raw.back();
        while (!last.empty() && last.back() == '.') last.pop_back();
        if (last.empty()) raw.pop_back();
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == "living" && i + 1 < raw.size() && raw[i + 1] == "room") {
            out.emplace_back("living_room");
            ++i;
        } else {
            out.push_back(raw[i]);
        }
    }
    return out;
}

[[noreturn]] void fail(std::string_view text, const std::string& why) {
    throw PromptParseError(why + ": \"" + std::string(text) + "\"");
}

int parse_number(std::string_view text, const std::string& word) {
    for (int n = 1; n <= kMaxAnnotatedCount; ++n) {
        if (kNumberWords[static_cast<std::size_t>(n)] == word) return n;
    }
    fail(text, "unknown number word '" + word + "'");
}

bool is_noun(const std::string& word, std::string_view singular) {
    return word == singular || (word.size() == singular.size() + 1 && word.starts_with(singular) && word.back() == 's');
}

RoomType parse_room(std::string_view text, const std::string& word) {
    if (auto t = room_type_from_label(word)) return *t;
    fail(text, "unknown room type '" + word + "'");
}

CompassOctant parse_direction(std::string_view text, const std::vector<std::string>& words) {
    std::string joined;
    for (const auto& w : words) {
        if (!joined.empty()) joined += ' ';
        joined += w;
    }
    for (CompassOctant d : kAllOctants) {
        if (to_words(d) == joined) return d;
    }
    if (joined == "west east") return CompassOctant::W;
    fail(text, "unknown direction '" + joined + "'");
}

}  // namespace

Annotation parse_prompt(std::string_view text) {
    const std::vector<std::string> t = tokenize(text);
    const auto at = [&](std::size_t i) -> const std::string& {
        static const std::string empty;
        return i < t.size() ? t[i] : empty;
    };
    if (t.empty()) fail(text, "empty prompt");

    if (at(0) == "a" && at(1) == "house" && at(2) == "with") {
        if (t.size() == 5 && is_noun(at(4), "room")) return RoomCount{parse_number(text, at(3))};
        if (t.size() == 8 && is_noun(at(4), "bedroom") && at(5) == "and" && is_noun(at(7), "bathroom")) {
            return BedBathCount{parse_number(text, at(3)), parse_number(text, at(6))};
        }
        fail(text, "unrecognized room-count template");
    }

    if ((at(0) == "the" || at(0) == "a") && at(2) == "is") {
        const bool unique = at(0) == "the";
        const RoomType subject = parse_room(text, at(1));
        std::size_t i = 3;
        const bool negated = at(i) == "not";
        if (negated) ++i;
        if (at(i) == "adjacent" && at(i + 1) == "to" && at(i + 2) == "the" && t.size() == i + 4) {
            const RoomType object = parse_room(text, at(i + 3));
            if (object == subject) fail(text, "a room type cannot be adjacent to itself");
            return Adjacency{subject, unique, object, negated};
        }
        if (!negated && at(3) == "in" && at(4) == "the" && t.size() >= 10 && at(t.size() - 4) == "side" &&
            at(t.size() - 3) == "of" && at(t.size() - 2) == "the" && at(t.size() - 1) == "house") {
            const std::vector<std::string> dir(t.begin() + 5, t.end() - 4);
            return Location{subject, unique, parse_direction(text, dir)};
        }
    }
    fail(text, "unrecognized prompt template");
}

bool check_correctness(std::string_view prompt, const Layout& layout, const ValidityOptions& opts) {
    const Annotation wanted = parse_prompt(prompt);
    const AnnotationSet have = extract_annotations(layout, opts);
    return have.contains(wanted);
}

}  // namespace plantext
