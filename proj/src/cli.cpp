// Copyright 2026 The tempval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tempval/cli.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <sstream>
#include <string_view>
#include <tuple>
#include <utility>

#include "CLI11.hpp"
#include "json.hpp"
#include "tempval/agreement.hpp"
#include "tempval/curve_json.hpp"
#include "tempval/dataset.hpp"
#include "tempval/errors.hpp"
#include "tempval/regression_metrics.hpp"
#include "tempval/scenarios.hpp"
#include "tempval/text_dedup.hpp"
#include "tempval/validity.hpp"

namespace tempval::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

void CliConfig::validate() const {
  const LogBase base(log_base);
  domain().validate();
  if (max_evaluations == 0) throw ArgumentError("max-evals must be positive");
  fit_options().validate();
  (void)base;
}

WorkingDomain CliConfig::domain() const {
  WorkingDomain d = WorkingDomain::default_for(LogBase(log_base));
  if (domain_min) d.lower = *domain_min;
  if (domain_max) d.upper = *domain_max;
  d.grid_n = grid_n;
  return d;
}

FitOptions CliConfig::fit_options() const {
  FitOptions options;
  options.domain = domain();
  options.multistart_alphas = multistart_alphas;
  options.solver.max_evaluations = max_evaluations;
  return options;
}

namespace {

// Bad flag values or combinations; maps to kExitUsage.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Runs a step that consumes file contents: value errors raised there are data
// errors, not usage errors.
template <typename F>
auto from_data(F&& step) -> decltype(step()) {
  try {
    return step();
  } catch (const ArgumentError& e) {
    throw DataError(0, "", e.what());
  } catch (const DomainError& e) {
    throw DataError(0, "", e.what());
  }
}

std::string num(double v) { return fmt::format("{:.10g}", v); }

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + '"';
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(0, "", "cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

// Nonblank lines of a JSONL file, with their 1-based line numbers.
std::vector<std::pair<std::size_t, json>> read_jsonl(const fs::path& path) {
  std::vector<std::pair<std::size_t, json>> records;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    try {
      records.emplace_back(i + 1, json::parse(lines[i]));
    } catch (const json::parse_error&) {
      throw DataError(i + 1, "", "malformed JSON");
    }
  }
  return records;
}

const json* at_path(const json& doc, std::string_view dotted) {
  const json* node = &doc;
  std::size_t start = 0;
  while (start <= dotted.size()) {
    const auto pos = dotted.find('.', start);
    const std::string key(dotted.substr(start, pos - start));
    if (!node->is_object()) return nullptr;
    const auto it = node->find(key);
    if (it == node->end()) return nullptr;
    node = &*it;
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return node;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& line : read_lines(path)) {
    if (trim(line).empty()) continue;
    rows.push_back(split_fields(line, ','));
  }
  return rows;
}

bool looks_like_json(const fs::path& path) {
  if (path.extension() == ".json") return true;
  std::ifstream in(path);
  char c = 0;
  while (in.get(c)) {
    if (!std::isspace(static_cast<unsigned char>(c))) return c == '[' || c == '{';
  }
  return false;
}

std::vector<AnnotationPoint> points_from_json(const json& doc) {
  const json& list = doc.is_object() && doc.contains("points") ? doc["points"] : doc;
  if (!list.is_array()) throw DataError(0, "points", "expected an array of points");
  std::vector<AnnotationPoint> points;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const json& p = list[i];
    const std::string field = "points[" + std::to_string(i) + "]";
    if (p.is_array() && p.size() == 2 && p[0].is_number() && p[1].is_number()) {
      points.push_back({p[0].get<double>(), p[1].get<double>()});
    } else if (p.is_object() && p.contains("x") && p.contains("y") && p["x"].is_number() &&
               p["y"].is_number()) {
      points.push_back({p["x"].get<double>(), p["y"].get<double>()});
    } else {
      throw DataError(0, field, "expected [x, y] or {\"x\": .., \"y\": ..}");
    }
  }
  return points;
}

// CSV of x,y rows (an optional non-numeric header is skipped) or JSON.
std::vector<AnnotationPoint> read_points(const fs::path& path) {
  std::vector<AnnotationPoint> points;
  if (looks_like_json(path)) {
    std::ifstream in(path);
    try {
      points = points_from_json(json::parse(in));
    } catch (const json::parse_error&) {
      throw DataError(0, "", "malformed JSON in " + path.string());
    }
  } else {
    const auto lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (trim(lines[i]).empty()) continue;
      const auto fields = split_fields(lines[i], ',');
      const auto x = fields.size() == 2 ? parse_double(fields[0]) : std::nullopt;
      const auto y = fields.size() == 2 ? parse_double(fields[1]) : std::nullopt;
      if (!x || !y) {
        if (points.empty() && fields.size() == 2 && !x) continue;  // header
        throw DataError(i + 1, "", "expected two numeric columns x,y");
      }
      points.push_back({*x, *y});
    }
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    try {
      points[i].validate();
    } catch (const ArgumentError& e) {
      throw DataError(0, "points[" + std::to_string(i) + "]", e.what());
    }
  }
  return points;
}

struct Output {
  std::ostream& out;
  std::unique_ptr<std::ofstream> file;

  static Output open(std::ostream& fallback, const std::string& path) {
    if (path.empty() || path == "-") return {fallback, nullptr};
    auto file = std::make_unique<std::ofstream>(path);
    if (!*file) throw DataError(0, "", "cannot write " + path);
    std::ostream& ref = *file;
    return {ref, std::move(file)};
  }
};

void print_json(std::ostream& out, const ordered_json& doc) { out << doc.dump(2) << '\n'; }

// ---- fit ------------------------------------------------------------------

struct FitArgs {
  std::string points_file;
  std::string family = "all";
};

ordered_json fit_to_json(const FitResult& r, LogBase base) {
  ordered_json j;
  j["family"] = std::string(family_name(r.family()));
  j["params"] = params_to_json(r.params);
  j["amplitude"] = r.s_fit;
  j["auc"] = r.auc;
  j["f_max"] = r.f_max;
  j["s_final"] = r.s_final;
  j["ssr"] = r.ssr;
  j["rmse"] = r.rmse;
  j["iterations"] = r.iterations;
  j["evaluations"] = r.evaluations;
  j["converged"] = r.converged;
  j["curve"] = curve_to_json(r.auc_curve(base));
  j["proportional_curve"] = curve_to_json(r.proportional_curve(base));
  return j;
}

int cmd_fit(const CliConfig& cfg, const FitArgs& args, std::ostream& out) {
  std::vector<Family> families;
  if (args.family == "all") {
    families.assign(kAllFamilies.begin(), kAllFamilies.end());
  } else {
    try {
      families.push_back(parse_family(args.family));
    } catch (const ArgumentError& e) {
      throw UsageError(e.what());
    }
  }
  const auto points = read_points(args.points_file);
  const LogBase base(cfg.log_base);
  const FitOptions options = cfg.fit_options();

  std::vector<FitResult> results;
  for (Family f : families) results.push_back(from_data([&] { return fit(points, f, options); }));

  if (cfg.format == OutputFormat::json) {
    ordered_json doc;
    doc["log_base"] = base.value();
    doc["points"] = points.size();
    doc["fits"] = ordered_json::array();
    for (const auto& r : results) doc["fits"].push_back(fit_to_json(r, base));
    print_json(out, doc);
    return kExitOk;
  }
  out << "family,param1,param2,param3,amplitude,auc,f_max,s_final,ssr,rmse,converged\n";
  for (const auto& r : results) {
    const auto p = to_vector(r.params);
    out << family_name(r.family());
    for (std::size_t i = 0; i < 3; ++i) out << ',' << (i < p.size() ? num(p[i]) : "");
    out << ',' << num(r.s_fit) << ',' << num(r.auc) << ',' << num(r.f_max) << ','
        << num(r.s_final) << ',' << num(r.ssr) << ',' << num(r.rmse) << ','
        << (r.converged ? "true" : "false") << '\n';
  }
  return kExitOk;
}

// ---- scenarios ------------------------------------------------------------

int cmd_scenarios(const CliConfig& cfg, std::ostream& out) {
  // Scenario points are in base-1.1 units, whatever the configured base.
  FitOptions options = cfg.fit_options();
  WorkingDomain domain = WorkingDomain::default_for(LogBase{});
  if (cfg.domain_min) domain.lower = *cfg.domain_min;
  if (cfg.domain_max) domain.upper = *cfg.domain_max;
  domain.grid_n = cfg.grid_n;
  options.domain = domain;
  const auto rows = run_scenarios(options, cfg.threads);

  if (cfg.format == OutputFormat::json) {
    ordered_json doc = ordered_json::array();
    for (std::size_t s = 0; s < rows.size(); ++s) {
      ordered_json row;
      row["scenario"] = std::string(rows[s].scenario->id);
      row["name"] = std::string(rows[s].scenario->name);
      row["rmse"] = ordered_json::object();
      row["reference"] = ordered_json::object();
      for (const auto& cell : rows[s].cells) {
        const std::string key(family_name(cell.family));
        row["rmse"][key] = cell.fit.rmse;
        row["reference"][key] = reference_rmse(s, cell.family);
      }
      row["lowest"] = std::string(family_name(rows[s].best()));
      row["highest"] = std::string(family_name(rows[s].worst()));
      doc.push_back(row);
    }
    print_json(out, doc);
    return kExitOk;
  }
  out << "scenario,name";
  for (Family f : kAllFamilies) out << ',' << family_name(f) << ',' << family_name(f) << "_ref";
  out << ",lowest,highest\n";
  for (std::size_t s = 0; s < rows.size(); ++s) {
    out << rows[s].scenario->id << ',' << csv_field(rows[s].scenario->name);
    for (const auto& cell : rows[s].cells) {
      out << ',' << fmt::format("{:.4f}", cell.fit.rmse) << ','
          << fmt::format("{:.4f}", reference_rmse(s, cell.family));
    }
    out << ',' << family_name(rows[s].best()) << ',' << family_name(rows[s].worst()) << '\n';
  }
  return kExitOk;
}

// ---- convert --------------------------------------------------------------

struct ConvertArgs {
  std::optional<double> value;
  std::vector<double> params;
  std::optional<double> from_base;
  std::optional<double> to_base;
  std::vector<double> minutes;
  bool table = false;
  std::vector<double> bases = {1.1, 2.0, 10.0};
  std::optional<int> digits;
};

// Three decimals while that leaves a significant digit, scientific below.
std::string format_ratio(double cr) {
  if (cr == 0.0 || cr >= 1e-3) return fmt::format("{:.3f}", cr);
  return fmt::format("{:.3e}", cr);
}

int cmd_convert(const CliConfig& cfg, const ConvertArgs& args, std::ostream& out) {
  const int modes = (args.value ? 1 : 0) + (args.params.empty() ? 0 : 1) +
                    ((args.table || !args.minutes.empty()) ? 1 : 0);
  if (modes != 1) throw UsageError("convert needs exactly one of --value, --params, --minutes/--table");
  const auto fmt_value = [&](double v) {
    return args.digits ? fmt::format("{:.{}f}", v, *args.digits) : num(v);
  };

  if (args.table || !args.minutes.empty()) {
    struct Stamp {
      std::string label;
      double minutes;
    };
    std::vector<Stamp> stamps;
    if (args.table) {
      stamps = {{"1 minute", 1.0},    {"1 hour", 60.0},      {"1 day", 1440.0},
                {"1 week", 10080.0},  {"1 month", 43200.0},  {"1 year", 525600.0},
                {"1 decade", 5256000.0}};
    }
    for (double m : args.minutes) stamps.push_back({num(m), m});
    std::vector<LogBase> bases;
    for (double b : args.bases) bases.emplace_back(b);

    ordered_json rows = ordered_json::array();
    if (cfg.format == OutputFormat::csv) out << "timestamp,minutes,base,t_log,cr,percent\n";
    for (const auto& stamp : stamps) {
      for (const auto& base : bases) {
        const auto row = compression_row(stamp.minutes, base);
        if (cfg.format == OutputFormat::json) {
          rows.push_back({{"timestamp", stamp.label},
                          {"minutes", row.minutes},
                          {"base", base.value()},
                          {"t_log", row.log_value},
                          {"cr", row.ratio},
                          {"percent", row.percent}});
        } else {
          out << stamp.label << ',' << num(stamp.minutes) << ',' << num(base.value()) << ','
              << fmt::format("{:.2f}", row.log_value) << ',' << format_ratio(row.ratio) << ','
              << fmt::format("{:.1f}", row.percent) << '\n';
        }
      }
    }
    if (cfg.format == OutputFormat::json) print_json(out, rows);
    return kExitOk;
  }

  if (!args.to_base) throw UsageError("--to-base is required");
  const LogBase from(args.from_base.value_or(cfg.log_base));
  const LogBase to(*args.to_base);
  if (args.value) {
    const double converted = convert_log_value({*args.value, from}, to).value;
    if (cfg.format == OutputFormat::json) {
      print_json(out, {{"from_base", from.value()},
                       {"to_base", to.value()},
                       {"value", *args.value},
                       {"converted", converted}});
    } else {
      out << "value,converted\n" << num(*args.value) << ',' << fmt_value(converted) << '\n';
    }
    return kExitOk;
  }
  const SkewNormalParams p{args.params[0], args.params[1], args.params[2]};
  p.validate();
  const auto c = convert_params(p, from, to);
  if (cfg.format == OutputFormat::json) {
    print_json(out, {{"from_base", from.value()},
                     {"to_base", to.value()},
                     {"params", params_to_json(c)}});
  } else {
    out << "location,scale,skewness\n"
        << fmt_value(c.xi) << ',' << fmt_value(c.omega) << ',' << num(c.alpha) << '\n';
  }
  return kExitOk;
}

// ---- validity / emit ------------------------------------------------------

struct ValidityArgs {
  std::string curve_file;
  std::vector<double> at;
  std::vector<double> interval;
  bool peak = false;
};

int cmd_validity(const CliConfig& cfg, const ValidityArgs& args, std::ostream& out) {
  const int modes = (args.at.empty() ? 0 : 1) + (args.interval.empty() ? 0 : 1) + (args.peak ? 1 : 0);
  if (modes != 1) throw UsageError("validity needs exactly one of --at, --interval, --peak");
  for (double m : args.at) (void)to_log(m);
  std::optional<IntervalQuery> query;
  if (!args.interval.empty()) query.emplace(args.interval[0], args.interval[1]);

  const ValidityCurve curve = from_data([&] { return load_curve(args.curve_file); });
  const bool as_json = cfg.format == OutputFormat::json;

  if (!args.at.empty()) {
    ordered_json rows = ordered_json::array();
    if (!as_json) out << "minutes,value\n";
    for (double m : args.at) {
      const double v = validity_at(curve, m);
      if (as_json) {
        rows.push_back({{"minutes", m}, {"value", v}});
      } else {
        out << num(m) << ',' << num(v) << '\n';
      }
    }
    if (as_json) print_json(out, rows);
  } else if (query) {
    const double p = interval_probability(curve, *query);
    if (as_json) {
      print_json(out, {{"a", query->a()}, {"b", query->b()}, {"probability", p}});
    } else {
      out << "a,b,probability\n" << num(query->a()) << ',' << num(query->b()) << ',' << num(p) << '\n';
    }
  } else {
    const Peak peak = locate_peak(curve);
    const double minutes = from_log({peak.x, curve.base});
    if (as_json) {
      print_json(out, {{"minutes", minutes}, {"log_value", peak.x}, {"value", peak.value}});
    } else {
      out << "minutes,log_value,value\n"
          << num(minutes) << ',' << num(peak.x) << ',' << num(peak.value) << '\n';
    }
  }
  return kExitOk;
}

struct EmitArgs {
  std::string curve_file;
  std::size_t n = 200;
  std::vector<double> domain;  // minutes; default spans the curve's working domain
  std::string out_path;
};

int cmd_emit(const CliConfig& cfg, const EmitArgs& args, std::ostream& out) {
  if (args.n < 2) throw UsageError("--n must be at least 2");
  if (!args.domain.empty()) (void)IntervalQuery(args.domain[0], args.domain[1]);
  const ValidityCurve curve = from_data([&] { return load_curve(args.curve_file); });
  double from = 1.0;
  double to = from_log({curve.domain.upper, curve.base});
  if (!args.domain.empty()) {
    from = args.domain[0];
    to = args.domain[1];
  } else {
    from = std::max(1.0, from_log({curve.domain.lower, curve.base}));
  }
  const auto samples = sample_curve(curve, args.n, from, to);

  Output sink = Output::open(out, args.out_path);
  if (cfg.format == OutputFormat::json) {
    ordered_json doc;
    doc["curve"] = curve_to_json(curve);
    doc["samples"] = ordered_json::array();
    for (const auto& s : samples) {
      doc["samples"].push_back({{"t_minutes", s.minutes}, {"t_log", s.log_value}, {"value", s.value}});
    }
    print_json(sink.out, doc);
  } else {
    sink.out << "t_minutes,t_log,value\n";
    for (const auto& s : samples) {
      sink.out << num(s.minutes) << ',' << num(s.log_value) << ',' << num(s.value) << '\n';
    }
  }
  return kExitOk;
}

// ---- eval -----------------------------------------------------------------

struct EvalArgs {
  std::string pred_file;
  std::string gold_file;
  bool raw = false;
  std::string spearman_mode = "mean";
};

struct TargetRecord {
  std::optional<std::string> id;
  std::array<double, 3> value{};
  double log_base = kDefaultLogBase;
};

// Accepts {"target": {location, scale, skewness}} records (the dataset format)
// or the three keys at top level.
std::vector<TargetRecord> read_targets(const fs::path& path) {
  std::vector<TargetRecord> out;
  for (const auto& [line, doc] : read_jsonl(path)) {
    if (!doc.is_object()) throw DataError(line, "", "expected a JSON object");
    const json& src = doc.contains("target") ? doc["target"] : doc;
    TargetRecord rec;
    static constexpr std::array<const char*, 3> kKeys = {"location", "scale", "skewness"};
    for (std::size_t k = 0; k < 3; ++k) {
      const auto it = src.find(kKeys[k]);
      if (it == src.end()) throw DataError(line, kKeys[k], "missing field");
      if (!it->is_number()) throw DataError(line, kKeys[k], "expected a number");
      rec.value[k] = it->get<double>();
      if (!std::isfinite(rec.value[k])) throw DataError(line, kKeys[k], "not finite");
    }
    if (const auto it = doc.find("id"); it != doc.end() && it->is_string()) rec.id = it->get<std::string>();
    if (const auto it = doc.find("log_base"); it != doc.end()) {
      if (!it->is_number() || !(it->get<double>() > 1.0)) throw DataError(line, "log_base", "must be > 1");
      rec.log_base = it->get<double>();
    }
    out.push_back(rec);
  }
  if (out.empty()) throw DataError(0, "", path.string() + " holds no records");
  return out;
}

// Pairs predictions with gold by id when every record carries a unique one,
// by position otherwise.
std::vector<std::size_t> align(const std::vector<TargetRecord>& pred,
                               const std::vector<TargetRecord>& gold) {
  const auto all_ids = [](const std::vector<TargetRecord>& v) {
    std::set<std::string> seen;
    for (const auto& r : v) {
      if (!r.id || !seen.insert(*r.id).second) return false;
    }
    return true;
  };
  if (pred.size() != gold.size()) {
    throw DataError(0, "", fmt::format("{} predictions for {} gold records", pred.size(), gold.size()));
  }
  std::vector<std::size_t> order(gold.size());
  if (!all_ids(pred) || !all_ids(gold)) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    return order;
  }
  std::map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < pred.size(); ++i) by_id[*pred[i].id] = i;
  for (std::size_t g = 0; g < gold.size(); ++g) {
    const auto it = by_id.find(*gold[g].id);
    if (it == by_id.end()) throw DataError(0, "id", "no prediction for " + *gold[g].id);
    order[g] = it->second;
  }
  return order;
}

ordered_json report_json(const metrics::RegressionReport& r) {
  ordered_json j;
  j["n"] = r.n;
  j["mse"] = r.mse;
  j["mae"] = r.mae;
  j["r2"] = opt_json(r.r2);
  j["spearman"] = opt_json(r.spearman);
  j["nll"] = r.nll;
  j["crps"] = r.crps;
  return j;
}

int cmd_eval(const CliConfig& cfg, const EvalArgs& args, std::ostream& out) {
  const auto mode = args.spearman_mode == "pooled" ? metrics::SpearmanMode::pooled
                                                   : metrics::SpearmanMode::per_parameter_mean;
  const auto pred = read_targets(args.pred_file);
  const auto gold = read_targets(args.gold_file);
  const auto order = align(pred, gold);

  std::vector<std::array<double, 3>> p(gold.size());
  std::vector<std::array<double, 3>> g(gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto& src = pred[order[i]];
    // Location and scale follow the axis; skewness is base-free.
    const double factor = src.log_base == gold[i].log_base
                              ? 1.0
                              : std::log(src.log_base) / std::log(gold[i].log_base);
    p[i] = {src.value[0] * factor, src.value[1] * factor, src.value[2]};
    g[i] = gold[i].value;
  }
  if (!args.raw) {
    from_data([&] {
      const auto stats = data::zscore_fit(g);
      for (auto& v : p) v = data::zscore_apply(stats, v);
      for (auto& v : g) v = data::zscore_apply(stats, v);
      return 0;
    });
  }
  const auto report = from_data([&] { return metrics::parameter_report(p, g, mode); });

  static constexpr std::array<const char*, 3> kNames = {"location", "scale", "skewness"};
  if (cfg.format == OutputFormat::json) {
    ordered_json doc;
    doc["zscored"] = !args.raw;
    for (std::size_t k = 0; k < 3; ++k) doc[kNames[k]] = report_json(report.per_parameter[k]);
    doc["average"] = report_json(report.averaged);
    print_json(out, doc);
    return kExitOk;
  }
  const auto row = [&](const char* name, auto get) {
    out << name;
    for (const auto& r : report.per_parameter) out << ',' << get(r);
    out << ',' << get(report.averaged) << '\n';
  };
  out << "metric,location,scale,skewness,average\n";
  row("mse", [](const auto& r) { return num(r.mse); });
  row("mae", [](const auto& r) { return num(r.mae); });
  row("r2", [](const auto& r) { return opt_num(r.r2); });
  row("spearman", [](const auto& r) { return opt_num(r.spearman); });
  row("nll", [](const auto& r) { return num(r.nll); });
  row("crps", [](const auto& r) { return num(r.crps); });
  return kExitOk;
}

// ---- agreement ------------------------------------------------------------

struct AgreementArgs {
  std::string icc_file;
  std::vector<std::string> jaccard_files;
  std::vector<std::string> pk_files;
  std::string kappa_file;
  std::vector<std::string> merge;
  std::optional<std::size_t> window;
  int icc_model = 2;
};

std::vector<std::vector<double>> numeric_rows(const fs::path& path) {
  const auto rows = read_csv(path);
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<double> values;
    bool numeric = true;
    for (const auto& cell : rows[i]) {
      const auto v = parse_double(cell);
      if (!v) {
        numeric = false;
        break;
      }
      values.push_back(*v);
    }
    if (!numeric) {
      if (i == 0) continue;  // header
      throw DataError(i + 1, "", "non-numeric cell");
    }
    out.push_back(std::move(values));
  }
  return out;
}

std::vector<std::set<std::string>> label_sets(const fs::path& path) {
  std::vector<std::set<std::string>> out;
  for (const auto& line : read_lines(path)) {
    std::set<std::string> labels;
    for (auto& field : split_fields(line, ',')) {
      if (!field.empty()) labels.insert(std::move(field));
    }
    out.push_back(std::move(labels));
  }
  while (!out.empty() && out.back().empty()) out.pop_back();  // trailing blank lines
  return out;
}

// One segmentation per line: the sequence length, then boundary positions.
std::vector<metrics::Segmentation> segmentations(const fs::path& path) {
  std::vector<metrics::Segmentation> out;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    std::istringstream fields(lines[i]);
    std::vector<std::size_t> values;
    std::string token;
    while (fields >> token) {
      std::size_t v = 0;
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
      if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw DataError(i + 1, "", "expected non-negative integers");
      }
      values.push_back(v);
    }
    try {
      out.emplace_back(values[0], std::vector<std::size_t>(values.begin() + 1, values.end()));
    } catch (const ArgumentError& e) {
      throw DataError(i + 1, "", e.what());
    }
  }
  return out;
}

// Header row of labels (first cell ignored), then one row per label.
metrics::ConfusionMatrix confusion_matrix(const fs::path& path) {
  const auto rows = read_csv(path);
  if (rows.size() < 2) throw DataError(0, "", "confusion matrix needs a header and rows");
  std::vector<std::string> labels(rows[0].begin() + 1, rows[0].end());
  std::vector<std::vector<std::uint64_t>> counts;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != labels.size() + 1 || rows[i][0] != labels[i - 1]) {
      throw DataError(i + 1, "", "row must start with label '" +
                                     (i - 1 < labels.size() ? labels[i - 1] : std::string("?")) +
                                     "' and hold one count per column");
    }
    std::vector<std::uint64_t> row;
    for (std::size_t j = 1; j < rows[i].size(); ++j) {
      std::uint64_t v = 0;
      const auto& cell = rows[i][j];
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw DataError(i + 1, labels[j - 1], "expected a count");
      }
      row.push_back(v);
    }
    counts.push_back(std::move(row));
  }
  return from_data([&] { return metrics::ConfusionMatrix(labels, counts); });
}

void emit_metrics(const CliConfig& cfg, std::ostream& out,
                  const std::vector<std::pair<std::string, std::optional<double>>>& values) {
  if (cfg.format == OutputFormat::json) {
    ordered_json doc;
    for (const auto& [k, v] : values) doc[k] = opt_json(v);
    print_json(out, doc);
    return;
  }
  out << "metric,value\n";
  for (const auto& [k, v] : values) out << k << ',' << opt_num(v) << '\n';
}

int cmd_agreement(const CliConfig& cfg, const AgreementArgs& args, std::ostream& out) {
  const int modes = (args.icc_file.empty() ? 0 : 1) + (args.jaccard_files.empty() ? 0 : 1) +
                    (args.pk_files.empty() ? 0 : 1) + (args.kappa_file.empty() ? 0 : 1);
  if (modes != 1) throw UsageError("agreement needs exactly one of --icc, --jaccard, --pk, --kappa");
  if (!args.merge.empty() && args.kappa_file.empty()) throw UsageError("--merge applies to --kappa");
  if (args.window && *args.window == 0) throw UsageError("--window must be positive");

  if (!args.icc_file.empty()) {
    const auto model = args.icc_model == 3 ? metrics::IccModel::two_way_mixed_consistency
                                           : metrics::IccModel::two_way_random_absolute;
    const auto value = from_data([&] {
      return metrics::icc(metrics::RaterMatrix(numeric_rows(args.icc_file)), model);
    });
    emit_metrics(cfg, out, {{args.icc_model == 3 ? "icc_3_1" : "icc_2_1", value}});
    return kExitOk;
  }
  if (!args.jaccard_files.empty()) {
    const auto a = label_sets(args.jaccard_files[0]);
    const auto b = label_sets(args.jaccard_files[1]);
    if (a.size() != b.size() || a.empty()) throw DataError(0, "", "label files must have equal, nonzero line counts");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += metrics::jaccard(a[i], b[i]);
    emit_metrics(cfg, out, {{"items", static_cast<double>(a.size())},
                            {"jaccard_mean", sum / static_cast<double>(a.size())}});
    return kExitOk;
  }
  if (!args.pk_files.empty()) {
    const auto ref = segmentations(args.pk_files[0]);
    const auto hyp = segmentations(args.pk_files[1]);
    if (ref.size() != hyp.size() || ref.empty()) throw DataError(0, "", "segmentation files must have equal, nonzero line counts");
    double sum = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      sum += from_data([&] { return metrics::pk(ref[i], hyp[i], args.window); });
    }
    emit_metrics(cfg, out, {{"items", static_cast<double>(ref.size())},
                            {"pk_mean", sum / static_cast<double>(ref.size())}});
    return kExitOk;
  }
  auto matrix = confusion_matrix(args.kappa_file);
  for (const auto& spec : args.merge) {
    const auto group = split_fields(spec, '+');
    matrix = from_data([&] { return metrics::merge_labels(matrix, group); });
  }
  emit_metrics(cfg, out, {{"total", static_cast<double>(matrix.total())},
                          {"micro_precision", from_data([&] { return metrics::micro_precision(matrix); })},
                          {"kappa", from_data([&] { return metrics::cohens_kappa(matrix); })}});
  return kExitOk;
}

// ---- dedup ----------------------------------------------------------------

struct DedupArgs {
  std::string file;
  double threshold = 0.7;
  std::string field = "parent_text";
  std::string out_path;
};

int cmd_dedup(const CliConfig& cfg, const DedupArgs& args, std::ostream& out, std::ostream& err) {
  if (!(args.threshold > 0.0) || args.threshold > 1.0) throw UsageError("--threshold must lie in (0, 1]");
  const auto lines = read_lines(args.file);
  std::vector<std::size_t> line_of;
  std::vector<std::string> texts;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    json doc;
    try {
      doc = json::parse(lines[i]);
    } catch (const json::parse_error&) {
      throw DataError(i + 1, "", "malformed JSON");
    }
    const json* text = at_path(doc, args.field);
    if (text == nullptr || !text->is_string()) throw DataError(i + 1, args.field, "missing text field");
    const json* id = at_path(doc, "id");
    line_of.push_back(i);
    texts.push_back(text->get<std::string>());
    ids.push_back(id != nullptr && id->is_string() ? id->get<std::string>() : "");
  }
  const auto report = data::tfidf_dedup(texts, args.threshold);

  if (!args.out_path.empty()) {
    Output sink = Output::open(out, args.out_path);
    for (std::size_t k : report.kept) sink.out << lines[line_of[k]] << '\n';
  }
  err << fmt::format("kept {} of {} records\n", report.kept.size(), texts.size());
  if (cfg.format == OutputFormat::json) {
    ordered_json doc;
    doc["total"] = texts.size();
    doc["kept"] = report.kept.size();
    doc["pairs"] = ordered_json::array();
    for (const auto& p : report.pairs) {
      doc["pairs"].push_back({{"kept_line", line_of[p.first] + 1},
                              {"removed_line", line_of[p.second] + 1},
                              {"kept_id", ids[p.first]},
                              {"removed_id", ids[p.second]},
                              {"similarity", p.similarity}});
    }
    print_json(out, doc);
    return kExitOk;
  }
  out << "kept_line,removed_line,kept_id,removed_id,similarity\n";
  for (const auto& p : report.pairs) {
    out << line_of[p.first] + 1 << ',' << line_of[p.second] + 1 << ',' << csv_field(ids[p.first]) << ','
        << csv_field(ids[p.second]) << ',' << fmt::format("{:.6f}", p.similarity) << '\n';
  }
  return kExitOk;
}

// ---- stats ----------------------------------------------------------------

struct StatsArgs {
  std::string file;
  std::string mapping_file;
  bool split = false;
  std::vector<double> ratios = {0.7, 0.2, 0.1};
};

int cmd_stats(const CliConfig& cfg, const StatsArgs& args, std::ostream& out, std::ostream& err) {
  data::SplitSpec spec{args.ratios[0], args.ratios[1], args.ratios[2], cfg.seed};
  if (args.split) spec.validate();
  std::vector<std::string> warnings;
  data::LoadOptions options;
  options.warnings = &warnings;
  if (!args.mapping_file.empty()) options.mapping = data::FieldMapping::load(args.mapping_file);
  const auto samples = data::load_samples(args.file, options);
  for (const auto& w : warnings) err << "warning: " << w << '\n';

  std::vector<std::tuple<std::string, std::string, double>> rows;
  rows.emplace_back("count", "samples", static_cast<double>(samples.size()));
  const auto dist = data::axis_distribution(samples);
  for (std::size_t a = 0; a < dist.size(); ++a) {
    rows.emplace_back("axis", std::string(data::axis_label(data::kAllAxes[a])), static_cast<double>(dist[a]));
  }
  if (samples.size() >= 2) {
    const auto z = from_data([&] { return data::zscore_fit(samples); });
    static constexpr std::array<const char*, 3> kNames = {"location", "scale", "skewness"};
    for (std::size_t k = 0; k < 3; ++k) rows.emplace_back("target_mean", kNames[k], z.mean[k]);
    for (std::size_t k = 0; k < 3; ++k) rows.emplace_back("target_sd", kNames[k], z.sd[k]);
  }
  if (!samples.empty()) {
    // Whitespace tokens only; subword tokenizers count differently.
    double parent_sum = 0.0;
    double sub_sum = 0.0;
    std::size_t parent_max = 0;
    std::size_t parent_min = static_cast<std::size_t>(-1);
    for (const auto& s : samples) {
      const auto t = data::whitespace_tokens(s.parent_text);
      parent_sum += static_cast<double>(t);
      parent_max = std::max(parent_max, t);
      parent_min = std::min(parent_min, t);
      for (const auto& axis : s.axes) {
        for (const auto& sub : axis) sub_sum += static_cast<double>(data::whitespace_tokens(sub));
      }
    }
    const double n = static_cast<double>(samples.size());
    rows.emplace_back("tokens_approx", "parent_mean", parent_sum / n);
    rows.emplace_back("tokens_approx", "parent_min", static_cast<double>(parent_min));
    rows.emplace_back("tokens_approx", "parent_max", static_cast<double>(parent_max));
    rows.emplace_back("tokens_approx", "subtexts_mean", sub_sum / n);
  }
  if (args.split) {
    const auto split = from_data([&] { return data::stratified_split_indices(samples, spec); });
    rows.emplace_back("split", "train", static_cast<double>(split.train.size()));
    rows.emplace_back("split", "validation", static_cast<double>(split.validation.size()));
    rows.emplace_back("split", "test", static_cast<double>(split.test.size()));
  }

  if (cfg.format == OutputFormat::json) {
    ordered_json doc = ordered_json::object();
    for (const auto& [section, key, value] : rows) doc[section][key] = value;
    print_json(out, doc);
    return kExitOk;
  }
  out << "section,key,value\n";
  for (const auto& [section, key, value] : rows) out << section << ',' << csv_field(key) << ',' << num(value) << '\n';
  return kExitOk;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Temporal validity curves: fitting, conversion, queries and evaluation", "tempval"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "INI/TOML file of option = value lines; flags override it");

  CliConfig cfg;
  std::string format = "csv";
  std::vector<double> alphas;
  app.add_option("--log-base", cfg.log_base, "Log base of time values (default 1.1)");
  app.add_option("--domain-min", cfg.domain_min, "Lower end of the working domain (log units)");
  app.add_option("--domain-max", cfg.domain_max, "Upper end of the working domain (log units)");
  app.add_option("--grid-n", cfg.grid_n, "Grid nodes on the working domain");
  app.add_option("--max-evals", cfg.max_evaluations, "Residual evaluations per fit start");
  app.add_option("--multistart-alphas", alphas, "Skew-normal starting shapes")->delimiter(',');
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", cfg.seed, "Seed for randomized steps");
  app.add_option("--threads", cfg.threads, "Worker threads (0 = hardware)");

  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "Fit validity curves to annotation points");
  fit_cmd->add_option("points", fit_args.points_file, "CSV (x,y) or JSON points file")->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--family", fit_args.family, "Family name or 'all'");

  auto* scenarios_cmd = app.add_subcommand("scenarios", "Fit the six reference scenarios");

  ConvertArgs convert_args;
  auto* convert_cmd = app.add_subcommand("convert", "Convert log values between bases");
  convert_cmd->add_option("--value", convert_args.value, "Log value to convert");
  convert_cmd->add_option("--params", convert_args.params, "location scale skewness")->expected(3);
  convert_cmd->add_option("--from-base", convert_args.from_base, "Source base (default --log-base)");
  convert_cmd->add_option("--to-base", convert_args.to_base, "Target base");
  convert_cmd->add_option("--minutes", convert_args.minutes, "Minutes for a compression report");
  convert_cmd->add_flag("--table", convert_args.table, "Compression report for the standard timestamps");
  convert_cmd->add_option("--bases", convert_args.bases, "Bases of the compression report")->delimiter(',');
  convert_cmd->add_option("--digits", convert_args.digits, "Fixed decimals for converted values");

  ValidityArgs validity_args;
  auto* validity_cmd = app.add_subcommand("validity", "Query a curve file");
  validity_cmd->add_option("curve", validity_args.curve_file, "Curve JSON")->required()->check(CLI::ExistingFile);
  validity_cmd->add_option("--at", validity_args.at, "Minutes since publication");
  validity_cmd->add_option("--interval", validity_args.interval, "Interval [a, b] in minutes")->expected(2);
  validity_cmd->add_flag("--peak", validity_args.peak, "Peak location");

  EmitArgs emit_args;
  auto* emit_cmd = app.add_subcommand("emit", "Sample a curve for plotting");
  emit_cmd->add_option("curve", emit_args.curve_file, "Curve JSON")->required()->check(CLI::ExistingFile);
  emit_cmd->add_option("--n", emit_args.n, "Number of rows");
  emit_cmd->add_option("--domain", emit_args.domain, "Range in minutes")->expected(2);
  emit_cmd->add_option("--out", emit_args.out_path, "Output file (default stdout)");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Score predicted parameters against gold");
  eval_cmd->add_option("predictions", eval_args.pred_file, "Predictions JSONL")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("gold", eval_args.gold_file, "Gold JSONL")->required()->check(CLI::ExistingFile);
  eval_cmd->add_flag("--raw", eval_args.raw, "Score raw values instead of gold z-scores");
  eval_cmd->add_option("--spearman", eval_args.spearman_mode, "mean or pooled")
      ->check(CLI::IsMember({"mean", "pooled"}));

  AgreementArgs agreement_args;
  auto* agreement_cmd = app.add_subcommand("agreement", "Inter-annotator agreement");
  agreement_cmd->add_option("--icc", agreement_args.icc_file, "CSV, items x raters")->check(CLI::ExistingFile);
  agreement_cmd->add_option("--icc-model", agreement_args.icc_model, "2 = ICC(2,1), 3 = ICC(3,1)")
      ->check(CLI::IsMember({2, 3}));
  agreement_cmd->add_option("--jaccard", agreement_args.jaccard_files, "Two label-set files")
      ->expected(2)->check(CLI::ExistingFile);
  agreement_cmd->add_option("--pk", agreement_args.pk_files, "Reference and hypothesis segmentations")
      ->expected(2)->check(CLI::ExistingFile);
  agreement_cmd->add_option("--window", agreement_args.window, "Pk window (default: half mean segment)");
  agreement_cmd->add_option("--kappa", agreement_args.kappa_file, "Confusion matrix CSV")->check(CLI::ExistingFile);
  agreement_cmd->add_option("--merge", agreement_args.merge, "Labels to merge, joined by '+'");

  DedupArgs dedup_args;
  auto* dedup_cmd = app.add_subcommand("dedup", "Near-duplicate filtering with TF-IDF cosine");
  dedup_cmd->add_option("file", dedup_args.file, "JSONL")->required()->check(CLI::ExistingFile);
  dedup_cmd->add_option("--threshold", dedup_args.threshold, "Similarity above which a text is dropped");
  dedup_cmd->add_option("--field", dedup_args.field, "Dotted path of the text field");
  dedup_cmd->add_option("--out", dedup_args.out_path, "Write kept records here");

  StatsArgs stats_args;
  auto* stats_cmd = app.add_subcommand("stats", "Dataset statistics");
  stats_cmd->add_option("file", stats_args.file, "Dataset JSONL")->required()->check(CLI::ExistingFile);
  stats_cmd->add_option("--mapping", stats_args.mapping_file, "Field mapping JSON")->check(CLI::ExistingFile);
  stats_cmd->add_flag("--split", stats_args.split, "Report stratified split sizes");
  stats_cmd->add_option("--ratios", stats_args.ratios, "train validation test")->expected(3);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    if (dynamic_cast<const CLI::RequiredError*>(&e) != nullptr ||
        dynamic_cast<const CLI::ExtrasError*>(&e) != nullptr) {
      err << app.help();
    }
    return kExitUsage;
  }

  try {
    if (!alphas.empty()) cfg.multistart_alphas = alphas;
    cfg.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
    cfg.validate();

    if (fit_cmd->parsed()) return cmd_fit(cfg, fit_args, out);
    if (scenarios_cmd->parsed()) return cmd_scenarios(cfg, out);
    if (convert_cmd->parsed()) return cmd_convert(cfg, convert_args, out);
    if (validity_cmd->parsed()) return cmd_validity(cfg, validity_args, out);
    if (emit_cmd->parsed()) return cmd_emit(cfg, emit_args, out);
    if (eval_cmd->parsed()) return cmd_eval(cfg, eval_args, out);
    if (agreement_cmd->parsed()) return cmd_agreement(cfg, agreement_args, out);
    if (dedup_cmd->parsed()) return cmd_dedup(cfg, dedup_args, out, err);
    if (stats_cmd->parsed()) return cmd_stats(cfg, stats_args, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    // NumericError, SemanticsError and I/O failures: the input cannot support the request.
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace tempval::cli
