// JSON and CSV forms of the library types. Every top-level document carries
// {"schema": "goh-atlas/1"}.

#pragma once

#include <json.hpp>
#include <string>

#include "goh_atlas/freelie.hpp"
#include "goh_atlas/goh.hpp"
#include "goh_atlas/metabelian.hpp"
#include "goh_atlas/polyfield.hpp"
#include "goh_atlas/trajectories.hpp"

namespace goh_atlas::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "goh-atlas/1";

/// Adds the schema tag in front of the other keys.
json document(const json& body);
/// Throws InvalidArgument unless the schema tag is present and known.
void check_schema(const json& doc);

/// Pretty JSON with doubles printed as %.17g; non-finite doubles become null.
std::string dump(const json& j);

json to_json(const Poly& p);
Poly poly_from_json(const json& j, int n);

json to_json(const Frame& frame);
Frame frame_from_json(const json& j);

json to_json(const LyndonBasis& basis);
json to_json(const StructureTable& table);

json to_json(const GohSystem<Rational>& sys);

json to_json(const MetabelianVerdict& v);

/// {t, values}: values[i] is the point (or control value) at t[i].
json to_json(const SampledCurve& c);
SampledCurve curve_from_json(const json& j);
json to_json(const Control& u);
Control control_from_json(const json& j);

json to_json(const ExtremalResiduals& res);
json to_json(const AbnormalRecovery& rec);
json to_json(const Containment& c);
json to_json(const VarietyTrace& trace);

/// x1,x2,branch_id rows, one per polyline vertex.
std::string polylines_csv(const VarietyTrace& trace);

json read_json_file(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace goh_atlas::io
