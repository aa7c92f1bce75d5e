#pragma once

// JSON readers and writers for the input files and reports.

#include <string>

#include "json.hpp"
#include "motivic/kring.hpp"
#include "motivic/measures.hpp"
#include "motivic/span_site.hpp"
#include "motivic/toric.hpp"

namespace motivic::io {

using json = nlohmann::ordered_json;

/// Parses a file; throws SchemaError with the path on I/O or syntax errors.
json load_json(const std::string& path);
std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

/// Array of {kind, slots, dims, compact}; slots missing from `dims` must be
/// builtins or declared by an earlier record.
RelationSet relations_from_json(const json& doc);

/// {rank, rays, maximal_cones} or a builtin name such as "P2" or "Hirzebruch(1)".
toric::Fan fan_from_json(const json& doc);
/// Accepts a builtin name, else reads the file.
toric::Fan load_fan(const std::string& name_or_path);
json fan_to_json(const toric::Fan& fan);

/// {generator, measure, value} or a list of them.
MeasureRegistry registry_from_json(const json& doc);

/// Toric objects as {fan, cells} or {fan, open_rays}; `fan` as in fan_from_json.
toric::ToricObject object_from_json(const json& doc);
json object_to_json(const toric::ToricObject& obj);

/// {objects: [{name, dim, compact, backend_ref}], morphisms: [{name, src,
/// window, map, tgt}], squares: [{id, kind, corners, flags, refinement}],
/// pullbacks: [{first, second, composite}]}. Objects with a backend_ref make
/// a toric site.
site::SitePresentation site_from_json(const json& doc);
json site_to_json(const site::SitePresentation& site);

json value_to_json(const MeasureValue& v);
json kclass_to_json(const KClass& k);

}  // namespace motivic::io
