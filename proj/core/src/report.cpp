#include "hypmax/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>

#include "experiments/summaries.hpp"
#include "hypmax/errors.hpp"

namespace hypmax {

namespace {

std::string csv_field(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17e", v.get<double>());
    return buf;
  }
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Json ExperimentReport::to_json() const {
  Json j = Json::object();
  j["experiment"] = experiment;
  j["params"] = params;
  j["records"] = records;
  j["summary"] = summary;
  j["seed"] = seed;
  j["version"] = version;
  return j;
}

std::string ExperimentReport::to_csv() const {
  std::vector<std::string> keys;
  for (const Json& rec : records) {
    for (const auto& [k, v] : rec.items()) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    }
  }
  std::string out;
  for (std::size_t i = 0; i < keys.size(); ++i) out += (i ? "," : "") + csv_field(keys[i]);
  out += '\n';
  for (const Json& rec : records) {
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (i) out += ',';
      if (rec.contains(keys[i])) out += csv_field(rec[keys[i]]);
    }
    out += '\n';
  }
  return out;
}

bool ExperimentReport::passed() const { return summary.value("pass", false); }

std::string version_string() { return HYPMAX_VERSION; }

std::string render(const ExperimentReport& report, ReportFormat format) {
  return format == ReportFormat::Json ? report.to_json().dump(2) + "\n" : report.to_csv();
}

void write_report_atomic(const ExperimentReport& report, const std::filesystem::path& path,
                         ReportFormat format) {
  const std::string text = render(report, format);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw UsageError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw UsageError("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

Json summarize(const std::string& experiment, const Json& params, const Json& records) {
  using Fn = Json (*)(const Json&, const Json&);
  static const std::map<std::string, Fn> table = {
      {"prop21", summarize_prop21},
      {"cor22", summarize_cor22},
      {"lemma31", summarize_lemma31},
      {"lemma32", summarize_lemma32},
      {"lemma33", summarize_lemma33},
      {"fs", summarize_fs},
      {"example41-case1", summarize_example41_case1},
      {"example41-case2", summarize_example41_case2},
      {"example41-case3", summarize_example41_case3},
      {"condition", summarize_condition},
      {"maximal", summarize_maximal},
  };
  const auto it = table.find(experiment);
  if (it == table.end()) throw UsageError("summarize: unknown experiment '" + experiment + "'");
  return it->second(params, records);
}

ExperimentReport finish(std::string experiment, Json params, Json records, std::uint64_t seed) {
  ExperimentReport rep;
  rep.summary = summarize(experiment, params, records);
  rep.experiment = std::move(experiment);
  rep.params = std::move(params);
  rep.records = std::move(records);
  rep.seed = seed;
  rep.version = version_string();
  return rep;
}

TrendCheck no_growth_trend(std::vector<std::pair<double, double>> kv, double factor) {
  TrendCheck t;
  if (kv.empty()) return t;
  std::stable_sort(kv.begin(), kv.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  const std::size_t half = (kv.size() + 1) / 2;
  for (std::size_t i = 0; i < kv.size(); ++i) {
    double& slot = i < half ? t.inner_max : t.outer_max;
    slot = std::max(slot, kv[i].second);
  }
  t.pass = t.outer_max <= factor * t.inner_max;
  std::vector<double> x, y;
  for (const auto& [k, v] : kv) {
    if (v > 0.0) {
      x.push_back(k);
      y.push_back(std::log(v));
    }
  }
  t.slope = fit_slope(x, y);
  return t;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return 0.0;
  const double mx = std::accumulate(x.begin(), x.begin() + n, 0.0) / n;
  const double my = std::accumulate(y.begin(), y.begin() + n, 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

Json log_json(double v) {
  if (std::isnan(v)) return "nan";
  if (v == INFINITY) return "inf";
  if (v == -INFINITY) return nullptr;
  return v;
}

double log_from_json(const Json& v) {
  if (v.is_null()) return -INFINITY;
  if (v.is_string()) return v.get<std::string>() == "inf" ? INFINITY : NAN;
  return v.get<double>();
}

}  // namespace hypmax
