#pragma once

#include <json.hpp>

#include "ffst/harness/report.hpp"

namespace ffst::io {

/// Full report as JSON. Non-finite numbers are written as the strings
/// "inf", "-inf" and "nan" so that the document stays valid JSON.
nlohmann::json report_to_json(const harness::Report& r);

/// Inverse of report_to_json. Throws InvalidArgument on a malformed document.
harness::Report report_from_json(const nlohmann::json& j);

}  // namespace ffst::io
