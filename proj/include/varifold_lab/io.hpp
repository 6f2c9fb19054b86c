#pragma once

// JSON encodings of sets, varifolds and planes. Every document carries
// "schema": 1 and a "type" tag; readers throw ConfigError on malformed input.

#include <string>
#include <variant>

#include <json.hpp>

#include "varifold_lab/metrics.hpp"
#include "varifold_lab/sets.hpp"
#include "varifold_lab/varifold.hpp"

namespace vlab {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

Json to_json(const Vec& v);
Json to_json(const Plane& p);  // list of frame columns
Json to_json(const SimplicialSet& e);
Json to_json(const PointCloudSet& e);
Json to_json(const DiscreteVarifold& v);

Vec vec_from_json(const Json& j);
/// Accepts a list of spanning vectors (not necessarily orthonormal).
Plane plane_from_json(const Json& j);
SimplicialSet simplicial_set_from_json(const Json& j);
PointCloudSet point_cloud_from_json(const Json& j);
DiscreteVarifold varifold_from_json(const Json& j);

/// A set document of either type.
SampledSet sampled_set_from_json(const Json& j);

/// A varifold document as is, or var(E) of a set document (one atom per
/// simplex, or a 16-plane Haar spread for point clouds).
DiscreteVarifold varifold_or_set_from_json(const Json& j, std::uint64_t seed = 1);

/// File helpers; failures to open or parse throw ConfigError.
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Deterministic rendering: two-space indent and a trailing newline.
std::string dump(const Json& j);

}  // namespace vlab
