#pragma once

// JSON forms of the domain values used by the CLI, the HTTP service and the
// stats/config files.

#include <nlohmann/json.hpp>

#include "plantext/genclient.hpp"
#include "plantext/metrics.hpp"
#include "plantext/semantics.hpp"
#include "plantext/synthgen.hpp"
#include "plantext/validity.hpp"

namespace plantext {

nlohmann::json to_json(const Violation& v);
nlohmann::json to_json(const ValidityReport& r);
nlohmann::json to_json(const AdjacencyGraph& g);

/// {"category": "AP", "text": ..., plus the annotation's fields}
nlohmann::json to_json(const Annotation& a);
nlohmann::json to_json(const AnnotationSet& s);

nlohmann::json to_json(const ReferenceStats& s);
ReferenceStats reference_stats_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PromptResult& r);

/// Missing keys keep their defaults.
GenConfig gen_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GenConfig& c);
EndpointConfig endpoint_config_from_json(const nlohmann::json& j);
SamplingParams sampling_params_from_json(const nlohmann::json& j, SamplingParams base = {});

}  // namespace plantext
