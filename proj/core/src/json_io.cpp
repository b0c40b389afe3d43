#include "plantext/json_io.hpp"

#include <stdexcept>
#include <variant>

namespace plantext {

using nlohmann::json;

json to_json(const Violation& v) {
    return {{"kind", std::string(to_string(v.kind))}, {"rooms", v.rooms}, {"detail", v.detail}};
}

json to_json(const ValidityReport& r) {
    json violations = json::array();
    for (const Violation& v : r.violations) violations.push_back(to_json(v));
    return {{"valid", r.valid}, {"violations", std::move(violations)}};
}

json to_json(const AdjacencyGraph& g) {
    json edges = json::array();
    for (const AdjacencyEdge& e : g.edges) edges.push_back({{"a", e.a}, {"b", e.b}, {"shared_length", e.shared_length}});
    return {{"nodes", g.node_count}, {"edges", std::move(edges)}};
}

json to_json(const Annotation& a) {
    json j;
    j["category"] = std::string(to_string(category_of(a)));
    j["text"] = render_annotation(a);
    if (const auto* x = std::get_if<RoomCount>(&a)) {
        j["rooms"] = x->rooms;
    } else if (const auto* x = std::get_if<BedBathCount>(&a)) {
        j["bedrooms"] = x->bedrooms;
        j["bathrooms"] = x->bathrooms;
    } else if (const auto* x = std::get_if<Adjacency>(&a)) {
        j["subject"] = std::string(to_label(x->subject));
        j["subject_unique"] = x->subject_unique;
        j["object"] = std::string(to_label(x->object));
    } else if (const auto* x = std::get_if<Location>(&a)) {
        j["subject"] = std::string(to_label(x->subject));
        j["unique"] = x->unique;
        j["direction"] = std::string(to_string(x->direction));
    }
    return j;
}

json to_json(const AnnotationSet& s) {
    json out = json::array();
    for (const Annotation& a : s) out.push_back(to_json(a));
    return out;
}

json to_json(const ReferenceStats& s) {
    json mean = json::object();
    for (RoomType t : kAllRoomTypes) mean[std::string(to_label(t))] = s.mean[static_cast<std::size_t>(t)];
    json order = json::array();
    for (RoomType t : kAllRoomTypes) order.push_back(std::string(to_label(t)));
    json cats = json::array();
    for (CategoryKey c : s.training_categories) cats.push_back(to_string(c));
    return {{"bin_order", std::move(order)},
            {"mean_histogram", std::move(mean)},
            {"training_categories", std::move(cats)},
            {"layout_count", s.layout_count}};
}

ReferenceStats reference_stats_from_json(const json& j) {
    ReferenceStats s;
    const json& mean = j.at("mean_histogram");
    for (RoomType t : kAllRoomTypes) s.mean[static_cast<std::size_t>(t)] = mean.at(std::string(to_label(t))).get<double>();
    s.training_categories.clear();
    for (const json& c : j.at("training_categories")) s.training_categories.push_back(category_from_string(c.get<std::string>()));
    if (s.training_categories.empty()) throw std::invalid_argument("training_categories must not be empty");
    s.layout_count = j.value("layout_count", std::size_t{0});
    return s;
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json to_json(const PromptResult& r) {
    return {{"id", r.id},
            {"category", std::string(to_string(r.category))},
            {"n_samples", r.n_samples},
            {"n_valid", r.n_valid},
            {"validity_rate", r.validity_rate},
            {"correctness_rate", optional_number(r.correctness_rate)},
            {"ood_ratio", optional_number(r.ood_ratio)},
            {"wasserstein_in", optional_number(r.wasserstein_in)},
            {"wasserstein_out", optional_number(r.wasserstein_out)}};
}

GenConfig gen_config_from_json(const json& j) {
    GenConfig c;
    c.coarse_grid = j.value("coarse_grid", c.coarse_grid);
    c.max_backtracks = j.value("max_backtracks", c.max_backtracks);
    c.corridor_probability = j.value("corridor_probability", c.corridor_probability);
    c.max_corridors = j.value("max_corridors", c.max_corridors);
    c.min_attach_wall = j.value("min_attach_wall", c.min_attach_wall);
    if (j.contains("categories")) {
        c.categories.clear();
        for (const json& s : j.at("categories")) c.categories.push_back(category_from_string(s.get<std::string>()));
    }
    if (j.contains("area_ranges")) {
        for (const auto& [label, range] : j.at("area_ranges").items()) {
            const auto t = room_type_from_label(label);
            if (!t) throw std::invalid_argument("unknown room type in area_ranges: " + label);
            c.area_ranges[static_cast<std::size_t>(*t)] = {range.at(0).get<int>(), range.at(1).get<int>()};
        }
    }
    check_config(c);
    return c;
}

json to_json(const GenConfig& c) {
    json cats = json::array();
    for (CategoryKey k : c.categories) cats.push_back(to_string(k));
    json ranges = json::object();
    for (RoomType t : kAllRoomTypes) {
        const AreaRange r = c.area_range(t);
        ranges[std::string(to_label(t))] = {r.lo, r.hi};
    }
    return {{"coarse_grid", c.coarse_grid},          {"categories", std::move(cats)},
            {"max_backtracks", c.max_backtracks},    {"area_ranges", std::move(ranges)},
            {"corridor_probability", c.corridor_probability}, {"max_corridors", c.max_corridors},
            {"min_attach_wall", c.min_attach_wall}};
}

EndpointConfig endpoint_config_from_json(const json& j) {
    EndpointConfig c;
    c.base_url = j.value("base_url", c.base_url);
    c.path = j.value("path", c.path);
    c.auth_env = j.value("auth_env", c.auth_env);
    c.timeout = std::chrono::milliseconds(j.value("timeout_ms", static_cast<std::int64_t>(c.timeout.count())));
    c.max_in_flight = j.value("max_in_flight", c.max_in_flight);
    c.model = j.value("model", c.model);
    const std::string schema = j.value("schema", std::string("neutral"));
    if (schema == "neutral") {
        c.schema = WireSchema::neutral;
    } else if (schema == "openai_completions") {
        c.schema = WireSchema::openai_completions;
    } else {
        throw std::invalid_argument("unknown endpoint schema: " + schema);
    }
    if (j.contains("retry")) {
        const json& r = j.at("retry");
        c.retry.max_retries = r.value("max_retries", c.retry.max_retries);
        c.retry.initial_backoff =
            std::chrono::milliseconds(r.value("initial_backoff_ms", static_cast<std::int64_t>(c.retry.initial_backoff.count())));
        c.retry.max_backoff =
            std::chrono::milliseconds(r.value("max_backoff_ms", static_cast<std::int64_t>(c.retry.max_backoff.count())));
        c.retry.multiplier = r.value("multiplier", c.retry.multiplier);
    }
    return c;
}

SamplingParams sampling_params_from_json(const json& j, SamplingParams p) {
    p.temperature = j.value("temperature", p.temperature);
    p.top_p = j.value("top_p", p.top_p);
    p.max_tokens = j.value("max_tokens", p.max_tokens);
    p.n = j.value("n", p.n);
    if (j.contains("seed") && !j.at("seed").is_null()) p.seed = j.at("seed").get<std::uint64_t>();
    return p;
}

}  // namespace plantext
