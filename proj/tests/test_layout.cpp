#include "doctest.h"

#include <algorithm>

#include "oracles.hpp"
#include "plantext/layout.hpp"
#include "plantext/rng.hpp"
#include "plantext/synthgen.hpp"

using namespace plantext;

namespace {

Room rect(RoomType t, int x0, int y0, int x1, int y1) {
    return Room{t, {{x1, y1}, {x0, y1}, {x0, y0}, {x1, y0}}};
}

ParseError::Kind parse_kind(std::string_view text) {
    try {
        parse_layout(text);
    } catch (const ParseError& e) {
        return e.kind();
    }
    FAIL("expected a parse error for: " << text);
    return ParseError::Kind::empty_input;
}

}  // namespace

TEST_CASE("reference bedroom string parses to one four-vertex room") {
    const Layout l = parse_layout("bedroom: (13,12),(8,12),(8,9),(13,9)");
    REQUIRE(l.rooms.size() == 1);
    CHECK(l.rooms[0].kind == RoomType::bedroom);
    CHECK(l.rooms[0].vertices == std::vector<Point>{{13, 12}, {8, 12}, {8, 9}, {13, 9}});
    CHECK(serialize_layout(l) == "bedroom: (13,12),(8,12),(8,9),(13,9)");
}

TEST_CASE("parse accepts both living room spellings and loose whitespace") {
    const Layout a = parse_layout("living room: (0,0),(4,0),(4,4),(0,4), kitchen: (4,0),(8,0),(8,4),(4,4)");
    const Layout b = parse_layout("  living_room:(0,0) , (4,0),(4,4) ,(0,4),kitchen: ( 4 , 0 ),(8,0),(8,4),(4,4)  ");
    CHECK(a == b);
    CHECK(serialize_layout(a) == "living_room: (0,0),(4,0),(4,4),(0,4), kitchen: (4,0),(8,0),(8,4),(4,4)");
    CHECK(canonicalize(serialize_layout(a)) == serialize_layout(a));
    CHECK(parse_layout("BEDROOM: (0,0),(1,0),(1,1)").rooms[0].kind == RoomType::bedroom);
}

TEST_CASE("parse errors carry their kind and offset") {
    CHECK(parse_kind("") == ParseError::Kind::empty_input);
    CHECK(parse_kind("   ") == ParseError::Kind::empty_input);
    CHECK(parse_kind("garage: (0,0),(1,0),(1,1)") == ParseError::Kind::unknown_label);
    CHECK(parse_kind("bedroom: (0,0),(1,0),(1,") == ParseError::Kind::malformed_point);
    CHECK(parse_kind("bedroom: (0,0),(1,0),(x,1)") == ParseError::Kind::malformed_point);
    CHECK(parse_kind("bedroom: (0,0),(257,0),(1,1)") == ParseError::Kind::out_of_range);
    CHECK(parse_kind("bedroom: (0,0),(-1,0),(1,1)") == ParseError::Kind::out_of_range);
    CHECK(parse_kind("bedroom: (1,1)") == ParseError::Kind::too_few_vertices);
    CHECK(parse_kind("bedroom: (0,0),(1,0),(1,1),") == ParseError::Kind::unknown_label);
    try {
        parse_layout("bedroom: (0,0),(1,0),(1,1), sauna: (0,0),(1,0),(1,1)");
        FAIL("expected error");
    } catch (const ParseError& e) {
        CHECK(e.kind() == ParseError::Kind::unknown_label);
        CHECK(e.offset() == 28);
    }
}

TEST_CASE("room_area by shoelace") {
    CHECK(room_area(Room{RoomType::bedroom, {{0, 0}, {1, 0}, {1, 1}, {0, 1}}}).value() == 1.0);
    CHECK(room_area(parse_layout("bedroom: (13,12),(8,12),(8,9),(13,9)").rooms[0]).value() == 15.0);
    CHECK(room_area(Room{RoomType::corridor, {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}}).value() == 3.0);
    CHECK_THROWS_AS(room_area(Room{RoomType::bedroom, {{0, 0}, {5, 0}, {9, 0}}}), DegenerateRoomError);
}

TEST_CASE("room_area invariances") {
    Rng rng(11);
    for (int t = 0; t < 200; ++t) {
        const int x0 = static_cast<int>(rng.uniform(0, 20)), y0 = static_cast<int>(rng.uniform(0, 20));
        const int w = static_cast<int>(rng.uniform(1, 10)), h = static_cast<int>(rng.uniform(1, 10));
        const int k = static_cast<int>(rng.uniform(1, 4));
        const Room r = rect(RoomType::kitchen, x0, y0, x0 + w, y0 + h);
        const Room moved = rect(RoomType::kitchen, x0 + 3, y0 + 7, x0 + 3 + w, y0 + 7 + h);
        const Room rotated = rect(RoomType::kitchen, -y0 - h + 40, x0, -y0 + 40, x0 + w);
        const Room scaled = rect(RoomType::kitchen, k * x0, k * y0, k * (x0 + w), k * (y0 + h));
        CHECK(room_area(r) == room_area(moved));
        CHECK(room_area(r) == room_area(rotated));
        CHECK(room_area(scaled).doubled == k * k * room_area(r).doubled);
        CHECK(room_area(r).doubled == 2 * oracle::rasterize(r).cells());
    }
}

TEST_CASE("centroid is exact") {
    const RationalPoint c = room_centroid(parse_layout("bedroom: (13,12),(8,12),(8,9),(13,9)").rooms[0]);
    CHECK(c.x() == 10.5);
    CHECK(c.y() == 10.5);
    // L shape: three unit cells centred at (0.5,0.5), (1.5,0.5), (0.5,1.5).
    const RationalPoint l = room_centroid(Room{RoomType::corridor, {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}});
    CHECK(l.x_num * 6 == 5 * l.denom);
    CHECK(l.y_num * 6 == 5 * l.denom);
}

TEST_CASE("scale_to_bbox") {
    SUBCASE("factor one over a full-extent layout is the identity") {
        const Layout l{{rect(RoomType::bedroom, 0, 0, 128, 256), rect(RoomType::kitchen, 128, 0, 256, 256)}};
        CHECK(scale_to_bbox(l, 256) == l);
    }
    SUBCASE("coarse grid 32 multiplies by 8 and centres") {
        const Layout l{{rect(RoomType::bedroom, 0, 0, 5, 4), rect(RoomType::kitchen, 5, 0, 9, 4)}};
        const Layout s = scale_to_bbox(l, 32);
        const BoundingBox box = bounding_box(s);
        CHECK(box.width() == 72);
        CHECK(box.height() == 32);
        CHECK(box.min_x + box.max_x == 256);
        CHECK(box.min_y + box.max_y == 256);
        // Shared edge x=5 becomes x=40 plus the centring offset.
        CHECK(s.rooms[0].vertices[0].x == 40 + box.min_x);
        CHECK(s.rooms[1].vertices[1].x == 40 + box.min_x);
        CHECK(category_of(s) == category_of(l));
    }
    SUBCASE("too wide") {
        const Layout l{{rect(RoomType::bedroom, 0, 0, 33, 4)}};
        CHECK_THROWS_AS(scale_to_bbox(l, 32), ScaleError);
        CHECK_THROWS_AS(scale_to_bbox(l, 30), ScaleError);
    }
}

TEST_CASE("category_of counts bedrooms and bathrooms") {
    const Layout l{{rect(RoomType::bedroom, 0, 0, 1, 1), rect(RoomType::bedroom, 1, 0, 2, 1),
                    rect(RoomType::bathroom, 2, 0, 3, 1), rect(RoomType::kitchen, 3, 0, 4, 1)}};
    CHECK(category_of(l) == CategoryKey{2, 1});
    CHECK(category_of(Layout{{rect(RoomType::corridor, 0, 0, 1, 4)}}) == CategoryKey{0, 0});
    CHECK(to_string(CategoryKey{4, 3}) == "4/3");
    CHECK(category_from_string("4/3") == CategoryKey{4, 3});
    CHECK_THROWS(category_from_string("4-3"));
}

TEST_CASE("round trip over generated layouts") {
    const GenConfig cfg;
    int mismatches = 0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const Layout l = generate_layout(sample_spec(cfg.categories[i % 6], derive_seed(99, i), cfg), cfg);
        const std::string text = serialize_layout(l);
        if (parse_layout(text) != l) ++mismatches;
        if (serialize_layout(parse_layout(text)) != text) ++mismatches;
        // A loosely spaced variant canonicalizes back to the same bytes.
        std::string loose = text;
        std::replace(loose.begin(), loose.end(), '_', ' ');
        if (canonicalize(loose) != text) ++mismatches;
    }
    CHECK(mismatches == 0);
}
