#include "shrinkreg/report.hpp"

#include "shrinkreg/error.hpp"
#include "shrinkreg/version.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace shrinkreg {
namespace {

Json summary_json(const Summary& s) { return Json{{"mean", s.mean}, {"se", s.se}, {"sd", s.sd}}; }

Summary summary_from_json(const Json& j) {
  Summary s;
  s.mean = j.at("mean").get<double>();
  s.se = j.at("se").get<double>();
  s.sd = j.value("sd", 0.0);
  return s;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string rmse_command(const RmseTable& table) {
  return table.delta_label == "noncentrality" ? "risk-curve" : "simulate";
}

}  // namespace

Json report_envelope(const std::string& command, Json config, Json results, std::uint64_t seed) {
  Json doc;
  doc["command"] = command;
  doc["config"] = std::move(config);
  doc["results"] = std::move(results);
  doc["seed"] = seed;
  doc["version"] = kVersion;
  return doc;
}

Json cv_results_json(const CvReport& report) {
  Json results = Json::array();
  for (const auto& e : report.entries) {
    results.push_back(Json{{"estimator", e.label},
                           {"raw", summary_json(e.raw)},
                           {"corrected", summary_json(e.corrected)}});
  }
  return results;
}

Json to_json(const CvReport& report) {
  Json config{{"k", report.k}, {"repetitions", report.repetitions}, {"alpha", report.alpha}};
  return report_envelope("cv", std::move(config), cv_results_json(report), report.seed);
}

CvReport cv_report_from_json(const Json& doc) {
  CvReport report;
  const Json& config = doc.at("config");
  report.k = config.at("k").get<int>();
  report.repetitions = config.at("repetitions").get<int>();
  report.alpha = config.at("alpha").get<double>();
  report.seed = doc.at("seed").get<std::uint64_t>();
  for (const auto& r : doc.at("results")) {
    report.entries.push_back(CvEntry{r.at("estimator").get<std::string>(),
                                     summary_from_json(r.at("raw")),
                                     summary_from_json(r.at("corrected"))});
  }
  return report;
}

Json rmse_results_json(const RmseTable& table) {
  Json results = Json::array();
  for (const auto& row : table.rows) {
    Json rmse = Json::object();
    for (std::size_t c = 0; c < table.kinds.size(); ++c) {
      rmse[std::string(to_string(table.kinds[c]))] = row.rmse[c];
    }
    results.push_back(Json{{table.delta_label, row.delta}, {"rmse", std::move(rmse)}});
  }
  return results;
}

Json to_json(const RmseTable& table) {
  Json kinds = Json::array();
  for (const auto k : table.kinds) kinds.push_back(std::string(to_string(k)));
  Json config{{"delta_label", table.delta_label},
              {"replications", table.replications},
              {"estimators", std::move(kinds)}};
  return report_envelope(rmse_command(table), std::move(config), rmse_results_json(table),
                         table.seed);
}

RmseTable rmse_table_from_json(const Json& doc) {
  RmseTable table;
  const Json& config = doc.at("config");
  table.delta_label = config.at("delta_label").get<std::string>();
  table.replications = config.at("replications").get<std::size_t>();
  for (const auto& k : config.at("estimators")) table.kinds.push_back(parse_kind(k.get<std::string>()));
  table.seed = doc.at("seed").get<std::uint64_t>();
  for (const auto& r : doc.at("results")) {
    RmseRow row;
    row.delta = r.at(table.delta_label).get<double>();
    for (const auto k : table.kinds) row.rmse.push_back(r.at("rmse").at(std::string(to_string(k))).get<double>());
    table.rows.push_back(std::move(row));
  }
  return table;
}

Json error_json(const std::string& code, const std::string& message) {
  return Json{{"error", Json{{"code", code}, {"message", message}}}, {"version", kVersion}};
}

std::string format_table(const CvReport& report) {
  std::size_t width = 9;
  for (const auto& e : report.entries) width = std::max(width, e.label.size());

  std::string out = fmt::format("{}-fold cross-validation, {} repetitions, seed {}\n", report.k,
                                report.repetitions, report.seed);
  out += fmt::format("{:<{}}  {:>10} {:>9} {:>9}  {:>10} {:>9} {:>9}\n", "estimator", width,
                     "raw", "se", "sd", "corrected", "se", "sd");
  for (const auto& e : report.entries) {
    out += fmt::format("{:<{}}  {:>10.4f} {:>9.5f} {:>9.5f}  {:>10.4f} {:>9.5f} {:>9.5f}\n",
                       e.label, width, e.raw.mean, e.raw.se, e.raw.sd, e.corrected.mean,
                       e.corrected.se, e.corrected.sd);
  }
  return out;
}

std::string format_csv(const CvReport& report) {
  std::string out = "estimator,raw_mean,raw_se,raw_sd,corrected_mean,corrected_se,corrected_sd\n";
  for (const auto& e : report.entries) {
    out += fmt::format("{},{},{},{},{},{},{}\n", csv_quote(e.label), e.raw.mean, e.raw.se,
                       e.raw.sd, e.corrected.mean, e.corrected.se, e.corrected.sd);
  }
  return out;
}

std::string format_table(const RmseTable& table) {
  std::string out;
  if (table.replications > 0) {
    out += fmt::format("relative MSE against UR, {} replications, seed {}\n", table.replications,
                       table.seed);
  } else {
    out += "relative asymptotic risk against UR\n";
  }
  out += fmt::format("{:>13}", table.delta_label);
  for (const auto k : table.kinds) out += fmt::format(" {:>8}", to_string(k));
  out += '\n';
  for (const auto& row : table.rows) {
    out += fmt::format("{:>13.4f}", row.delta);
    for (const double v : row.rmse) out += fmt::format(" {:>8.4f}", v);
    out += '\n';
  }
  return out;
}

std::string format_csv(const RmseTable& table) {
  std::string out = table.delta_label;
  for (const auto k : table.kinds) out += fmt::format(",{}", csv_quote(std::string(to_string(k))));
  out += '\n';
  for (const auto& row : table.rows) {
    out += fmt::format("{}", row.delta);
    for (const double v : row.rmse) out += fmt::format(",{}", v);
    out += '\n';
  }
  return out;
}

}  // namespace shrinkreg
