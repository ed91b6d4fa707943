#include "shrinkreg/cli.hpp"

#include "shrinkreg/asymptotics.hpp"
#include "shrinkreg/crossval.hpp"
#include "shrinkreg/error.hpp"
#include "shrinkreg/estimators.hpp"
#include "shrinkreg/io.hpp"
#include "shrinkreg/report.hpp"
#include "shrinkreg/simulation.hpp"
#include "shrinkreg/version.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>

namespace shrinkreg {
namespace {

struct Options {
  std::string data;
  std::string response;
  std::string full;
  std::vector<std::string> subs;
  std::string estimators;
  std::optional<int> k;
  std::optional<int> reps;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  int n = 50;
  int p1 = 4;
  int p2 = 6;
  std::string delta_grid;
  std::string format = "table";
  std::string out;
  std::string loss = "full";
  std::string formula = "derived";
};

/// "NAME:a,b,c" or "a,b,c".
struct SubModel {
  std::string name;
  std::vector<std::string> columns;
};

SubModel parse_sub(const std::string& text) {
  SubModel sub;
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    sub.name = text.substr(0, colon);
    sub.columns = split_list(std::string_view(text).substr(colon + 1));
  } else {
    sub.columns = split_list(text);
  }
  if (sub.columns.empty()) throw Error(ErrorCode::InvalidConfig, "empty sub-model: " + text);
  return sub;
}

std::vector<EstimatorKind> parse_kinds(const std::string& text) {
  std::vector<EstimatorKind> kinds;
  for (const auto& tag : split_list(text)) kinds.push_back(parse_kind(tag));
  if (kinds.empty()) throw Error(ErrorCode::InvalidConfig, "empty estimator list");
  return kinds;
}

double parse_double(std::string_view s) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw Error(ErrorCode::InvalidConfig, "not a number: " + std::string(s));
  }
  return value;
}

AnalysisSpec analysis_spec(const Options& o, const std::vector<std::string>& sub) {
  AnalysisSpec spec;
  spec.data = o.data;
  spec.response = o.response;
  spec.full = split_list(o.full);
  spec.sub = sub;
  return spec;
}

bool uses_restriction(EstimatorKind kind) { return kind != EstimatorKind::Unrestricted; }

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.out);
  if (!file) throw Error(ErrorCode::FileNotFound, "cannot write " + o.out);
  file << text;
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

int run_fit(const Options& o, std::ostream& out) {
  if (o.subs.size() > 1) throw Error(ErrorCode::InvalidConfig, "fit takes at most one --sub");
  const Analysis a = build_analysis(analysis_spec(o, o.subs.empty() ? std::vector<std::string>{}
                                                                     : parse_sub(o.subs[0]).columns));

  std::vector<FitResult> fits;
  if (!a.restriction) {
    fits.push_back(ols_fit(a.data));
  } else {
    const auto ctx = ShrinkageContext::from_pair(fit_pair(a.data, *a.restriction));
    const PretestRule rule = PretestRule::make(ctx.p2, o.alpha);
    std::vector<EstimatorKind> kinds{EstimatorKind::Unrestricted, EstimatorKind::Restricted};
    if (ctx.p2 >= 3) {
      kinds.push_back(EstimatorKind::Stein);
      kinds.push_back(EstimatorKind::PositiveStein);
    }
    kinds.push_back(EstimatorKind::Pretest);
    if (!o.estimators.empty()) kinds = parse_kinds(o.estimators);
    for (const auto kind : kinds) fits.push_back(estimate(kind, ctx, rule));
  }

  const auto& names = a.data.column_names;
  if (o.format == "json") {
    Json results = Json::array();
    for (const auto& f : fits) {
      Json beta = Json::object();
      for (std::size_t j = 0; j < names.size(); ++j) beta[names[j]] = f.beta(static_cast<Eigen::Index>(j));
      Json entry{{"estimator", std::string(to_string(f.kind))}, {"beta", beta}, {"s2", f.s2},
                 {"psi", f.psi}};
      if (f.alpha) entry["alpha"] = *f.alpha;
      if (f.degenerate) entry["degenerate"] = true;
      results.push_back(std::move(entry));
    }
    Json config{{"data", o.data}, {"response", a.response},
                {"sub", a.sub_columns}, {"nuisance", a.nuisance_columns}, {"alpha", o.alpha}};
    emit(o, dump(report_envelope("fit", std::move(config), std::move(results), o.seed)), out);
    return kExitOk;
  }

  std::string text;
  const char sep = o.format == "csv" ? ',' : ' ';
  if (o.format == "csv") {
    text += "term";
    for (const auto& f : fits) text += fmt::format(",{}", to_string(f.kind));
    text += '\n';
    for (std::size_t j = 0; j < names.size(); ++j) {
      text += names[j];
      for (const auto& f : fits) text += fmt::format("{}{}", sep, f.beta(static_cast<Eigen::Index>(j)));
      text += '\n';
    }
  } else {
    std::size_t width = 11;
    for (const auto& name : names) width = std::max(width, name.size());
    text += fmt::format("{:<{}}", "term", width);
    for (const auto& f : fits) text += fmt::format(" {:>10}", to_string(f.kind));
    text += '\n';
    for (std::size_t j = 0; j < names.size(); ++j) {
      text += fmt::format("{:<{}}", names[j], width);
      for (const auto& f : fits) text += fmt::format(" {:>10.5f}", f.beta(static_cast<Eigen::Index>(j)));
      text += '\n';
    }
    text += fmt::format("s2 = {:.6g}, psi = {:.6g} on {} restrictions\n", fits.front().s2,
                        fits.front().psi, a.nuisance_columns.size());
  }
  emit(o, text, out);
  return kExitOk;
}

int run_cv(const Options& o, std::ostream& out) {
  std::vector<SubModel> subs;
  for (const auto& s : o.subs) subs.push_back(parse_sub(s));
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (subs[i].name.empty() && subs.size() > 1) subs[i].name = fmt::format("sub{}", i + 1);
  }

  std::vector<EstimatorKind> kinds =
      o.estimators.empty()
          ? (subs.empty() ? std::vector<EstimatorKind>{EstimatorKind::Unrestricted}
                          : std::vector<EstimatorKind>{EstimatorKind::Unrestricted,
                                                       EstimatorKind::Restricted,
                                                       EstimatorKind::PositiveStein,
                                                       EstimatorKind::Pretest})
          : parse_kinds(o.estimators);

  CvConfig base;
  base.k = o.k.value_or(10);
  base.repetitions = o.reps.value_or(100);
  base.alpha = o.alpha;
  base.seed = o.seed;

  CvReport report;
  report.k = base.k;
  report.repetitions = base.repetitions;
  report.seed = base.seed;
  report.alpha = base.alpha;

  auto append = [&](const RegressionData& data, const CvConfig& cfg) {
    if (cfg.estimators.empty()) return;
    const CvReport part = repeated_cv(data, cfg);
    report.entries.insert(report.entries.end(), part.entries.begin(), part.entries.end());
  };

  // Fold assignments depend only on (seed, repetition, n), so every
  // sub-model below is assessed on the same splits.
  const bool want_ur = std::find(kinds.begin(), kinds.end(), EstimatorKind::Unrestricted) != kinds.end();
  if (subs.empty()) {
    for (const auto kind : kinds) {
      if (uses_restriction(kind)) {
        throw Error(ErrorCode::InvalidConfig,
                    std::string(to_string(kind)) + " needs a sub-model (--sub)");
      }
    }
    const Analysis a = build_analysis(analysis_spec(o, {}));
    CvConfig cfg = base;
    cfg.estimators.push_back(EstimatorSpec{EstimatorKind::Unrestricted, std::nullopt, "UR"});
    append(a.data, cfg);
  }
  for (std::size_t i = 0; i < subs.size(); ++i) {
    const Analysis a = build_analysis(analysis_spec(o, subs[i].columns));
    if (!a.restriction) {
      throw Error(ErrorCode::InvalidConfig, "sub-model equals the full model; nothing to restrict");
    }
    CvConfig cfg = base;
    if (i == 0 && want_ur) {
      cfg.estimators.push_back(EstimatorSpec{EstimatorKind::Unrestricted, std::nullopt, "UR"});
    }
    for (const auto kind : kinds) {
      if (!uses_restriction(kind)) continue;
      std::string label(to_string(kind));
      if (!subs[i].name.empty()) label += "(" + subs[i].name + ")";
      cfg.estimators.push_back(EstimatorSpec{kind, a.restriction, label});
    }
    append(a.data, cfg);
  }

  if (o.format == "json") {
    Json doc = to_json(report);
    doc["config"]["data"] = o.data;
    Json models = Json::array();
    for (const auto& s : subs) models.push_back(Json{{"name", s.name}, {"columns", s.columns}});
    doc["config"]["submodels"] = std::move(models);
    emit(o, dump(doc), out);
  } else if (o.format == "csv") {
    emit(o, format_csv(report), out);
  } else {
    emit(o, format_table(report), out);
  }
  return kExitOk;
}

void emit_rmse(const Options& o, const RmseTable& table, Json extra, std::ostream& out) {
  if (o.format == "json") {
    Json doc = to_json(table);
    for (auto& [key, value] : extra.items()) doc["config"][key] = value;
    emit(o, dump(doc), out);
  } else if (o.format == "csv") {
    emit(o, format_csv(table), out);
  } else {
    emit(o, format_table(table), out);
  }
}

int run_simulate(const Options& o, std::ostream& out) {
  SimConfig cfg;
  cfg.n = o.n;
  cfg.p1 = o.p1;
  cfg.p2 = o.p2;
  cfg.replications = static_cast<std::size_t>(o.reps.value_or(2000));
  if (o.reps && *o.reps < 1) throw Error(ErrorCode::InvalidConfig, "--reps must be positive");
  cfg.alpha = o.alpha;
  cfg.seed = o.seed;
  if (!o.delta_grid.empty()) cfg.delta_grid = parse_delta_grid(o.delta_grid);
  if (!o.estimators.empty()) cfg.kinds = parse_kinds(o.estimators);
  cfg.loss = o.loss == "main" ? LossScope::Main : LossScope::Full;
  const RmseTable table = rmse_sweep(cfg);
  emit_rmse(o, table,
            Json{{"n", cfg.n}, {"p1", cfg.p1}, {"p2", cfg.p2}, {"alpha", cfg.alpha}, {"loss", o.loss}},
            out);
  return kExitOk;
}

int run_risk_curve(const Options& o, std::ostream& out) {
  Eigen::MatrixXd C;
  int p2 = o.p2;
  int p = o.p1 + o.p2;
  if (!o.data.empty()) {
    if (o.subs.size() != 1) throw Error(ErrorCode::InvalidConfig, "risk-curve with --data needs one --sub");
    const Analysis a = build_analysis(analysis_spec(o, parse_sub(o.subs[0]).columns));
    if (!a.restriction) throw Error(ErrorCode::InvalidConfig, "sub-model equals the full model");
    p = static_cast<int>(a.data.cols());
    p2 = static_cast<int>(a.restriction->p2());
    C = a.data.X.transpose() * a.data.X / static_cast<double>(a.data.rows());
  } else {
    if (o.p1 < 0 || o.p2 < 1) throw Error(ErrorCode::InvalidConfig, "need p1 >= 0 and p2 >= 1");
    C = Eigen::MatrixXd::Identity(p, p);
  }
  const auto H = LinearRestriction::nuisance_subset(p, p2).H;
  const auto alt = LocalAlternative::make(Eigen::VectorXd::Unit(p2, 0), 1.0, C, H,
                                          Eigen::MatrixXd::Identity(p, p));

  std::vector<EstimatorKind> kinds{EstimatorKind::Restricted, EstimatorKind::Pretest};
  if (p2 >= 3) kinds = {EstimatorKind::Restricted, EstimatorKind::Stein,
                        EstimatorKind::PositiveStein, EstimatorKind::Pretest};
  if (!o.estimators.empty()) kinds = parse_kinds(o.estimators);
  const auto grid = parse_delta_grid(o.delta_grid.empty() ? "0:50:51" : o.delta_grid);
  const auto formula = o.formula == "printed" ? RiskFormula::AsPrinted : RiskFormula::Derived;

  const RmseTable table = risk_curve(alt, kinds, grid, o.alpha, formula);
  emit_rmse(o, table, Json{{"p", p}, {"p2", p2}, {"alpha", o.alpha}, {"formula", o.formula}}, out);
  return kExitOk;
}

bool wants_json(int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string_view arg = argv[i];
    if (arg == "--format=json") return true;
    if (arg == "--format" && i + 1 < argc && std::string_view(argv[i + 1]) == "json") return true;
  }
  return false;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConfig:
    case ErrorCode::InvalidLevel:
    case ErrorCode::UnknownKind:
    case ErrorCode::MissingAlpha:
    case ErrorCode::TooFewRestrictions: return kExitUsage;
    default: return kExitData;
  }
}

}  // namespace

std::vector<double> parse_delta_grid(std::string_view text) {
  std::vector<double> grid;
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split_list(text, ':');
    if (parts.size() != 3) throw Error(ErrorCode::InvalidConfig, "grid range must be start:stop:count");
    const double start = parse_double(parts[0]);
    const double stop = parse_double(parts[1]);
    const double count = parse_double(parts[2]);
    if (!(count >= 1.0) || count != std::floor(count)) {
      throw Error(ErrorCode::InvalidConfig, "grid count must be a positive integer");
    }
    const auto m = static_cast<int>(count);
    for (int i = 0; i < m; ++i) {
      grid.push_back(m == 1 ? start : start + (stop - start) * static_cast<double>(i) / (m - 1));
    }
  } else {
    for (const auto& item : split_list(text)) grid.push_back(parse_double(item));
  }
  if (grid.empty()) throw Error(ErrorCode::InvalidConfig, "empty grid");
  return grid;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shrinkage, pretest and restricted least-squares estimation", "shrinkreg"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Options o;

  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", o.format, "table, json or csv")
        ->check(CLI::IsMember({"table", "json", "csv"}));
    cmd->add_option("--out", o.out, "write the report to this file");
  };
  auto add_data = [&](CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("--data", o.data, "bundled dataset (prostate, galapagos, state) or CSV path");
    if (required) opt->required();
    cmd->add_option("--response", o.response, "response column");
    cmd->add_option("--full", o.full, "comma-separated full-model covariates");
    cmd->add_option("--sub", o.subs, "sub-model covariates, optionally NAME:a,b,c; repeatable");
    cmd->add_option("--alpha", o.alpha, "pretest level");
  };

  auto* fit = app.add_subcommand("fit", "fit every estimator on one dataset");
  add_data(fit, true);
  fit->add_option("--estimators", o.estimators, "comma-separated list of UR,R,S,S+,PT");
  add_format(fit);

  auto* cv = app.add_subcommand("cv", "repeated K-fold cross-validation");
  add_data(cv, true);
  cv->add_option("--k", o.k, "number of folds")->check(CLI::PositiveNumber);
  cv->add_option("--reps", o.reps, "repetitions")->check(CLI::PositiveNumber);
  cv->add_option("--seed", o.seed, "random seed");
  cv->add_option("--estimators", o.estimators, "comma-separated list of UR,R,S,S+,PT");
  add_format(cv);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo relative MSE over a delta grid");
  sim->add_option("--n", o.n, "sample size");
  sim->add_option("--p1", o.p1, "retained coefficients");
  sim->add_option("--p2", o.p2, "restricted coefficients");
  sim->add_option("--reps", o.reps, "replications per grid point")->check(CLI::PositiveNumber);
  sim->add_option("--alpha", o.alpha, "pretest level");
  sim->add_option("--seed", o.seed, "random seed");
  sim->add_option("--delta-grid", o.delta_grid, "a,b,c or start:stop:count");
  sim->add_option("--estimators", o.estimators, "comma-separated list of R,S,S+,PT");
  sim->add_option("--loss", o.loss, "full or main")->check(CLI::IsMember({"full", "main"}));
  add_format(sim);

  auto* risk = app.add_subcommand("risk-curve", "asymptotic relative risk over a noncentrality grid");
  risk->add_option("--p1", o.p1, "retained coefficients");
  risk->add_option("--p2", o.p2, "restricted coefficients");
  risk->add_option("--delta-grid", o.delta_grid, "a,b,c or start:stop:count");
  risk->add_option("--estimators", o.estimators, "comma-separated list of R,S,S+,PT");
  risk->add_option("--formula", o.formula, "derived or printed")
      ->check(CLI::IsMember({"derived", "printed"}));
  add_data(risk, false);
  add_format(risk);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    if (wants_json(argc, argv)) out << dump(error_json("UsageError", e.what()));
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (fit->parsed()) return run_fit(o, out);
    if (cv->parsed()) return run_cv(o, out);
    if (sim->parsed()) return run_simulate(o, out);
    return run_risk_curve(o, out);
  } catch (const Error& e) {
    if (o.format == "json") {
      out << dump(error_json(std::string(to_string(e.code())), e.what()));
    }
    err << "shrinkreg: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

}  // namespace shrinkreg
