#pragma once

#include "sfpde/audit.hpp"
#include "sfpde/characteristics.hpp"
#include "sfpde/classify.hpp"
#include "sfpde/series.hpp"

#include "json.hpp"

#include <string>

namespace sfpde {

using Json = nlohmann::ordered_json;

/// Two-space indented text with a trailing newline.
std::string dump(const Json& j);

/// Finite doubles as numbers; infinities and NaN as strings.
Json json_number(double v);
Json to_json(cplx z);
Json to_json(const CaseClass& cc);
Json to_json(const A2Report& r);
Json to_json(const DoubleSeries& s);
Json to_json(const AuditReport& r);
Json to_json(const DecayReport& r);
Json to_json(const PositionReport& r);
Json to_json(const PhiReport& r);
Json to_json(const ReconstructReport& r);
Json to_json(const EscapeReport& r);
/// Summary of a trace without the samples.
Json trace_summary(const CharTrace& tr);

}  // namespace sfpde
