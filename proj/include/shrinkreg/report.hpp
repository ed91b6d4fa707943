#pragma once

#include "shrinkreg/crossval.hpp"
#include "shrinkreg/rmse_table.hpp"

#include <json.hpp>

#include <string>

namespace shrinkreg {

using Json = nlohmann::ordered_json;

/// {command, config, results, seed, version}
Json report_envelope(const std::string& command, Json config, Json results, std::uint64_t seed);

Json cv_results_json(const CvReport& report);
Json to_json(const CvReport& report);
CvReport cv_report_from_json(const Json& doc);

Json rmse_results_json(const RmseTable& table);
Json to_json(const RmseTable& table);
RmseTable rmse_table_from_json(const Json& doc);

Json error_json(const std::string& code, const std::string& message);

std::string format_table(const CvReport& report);
std::string format_csv(const CvReport& report);
std::string format_table(const RmseTable& table);
std::string format_csv(const RmseTable& table);

}  // namespace shrinkreg
