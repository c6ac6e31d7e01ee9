#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "hypmax/sides.hpp"

namespace hypmax {

/// One verification run. `summary` is always a pure function of
/// (experiment, params, records); see summarize().
struct ExperimentReport {
  std::string experiment;
  Json params = Json::object();
  Json records = Json::array();
  Json summary = Json::object();
  std::uint64_t seed = 0;
  std::string version;

  /// Keys in the fixed order experiment, params, records, summary, seed, version.
  Json to_json() const;
  /// Header row from the union of record keys (first-seen order), then one
  /// row per record. Numbers in %.17e.
  std::string to_csv() const;
  bool passed() const;
};

enum class ReportFormat { Json, Csv };

std::string version_string();
std::string render(const ExperimentReport& report, ReportFormat format);
/// Writes through a temporary file in the same directory and renames it.
void write_report_atomic(const ExperimentReport& report, const std::filesystem::path& path,
                         ReportFormat format);

/// Recomputes the summary of any report produced by this library.
Json summarize(const std::string& experiment, const Json& params, const Json& records);

/// Values ordered by an increasing scale key and split in halves; the outer
/// (larger-key) half may not exceed `factor` times the inner half's maximum.
struct TrendCheck {
  double inner_max = 0.0;
  double outer_max = 0.0;
  double slope = 0.0;  // least squares of log(value) against the key
  bool pass = true;
};
TrendCheck no_growth_trend(std::vector<std::pair<double, double>> key_value, double factor);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

/// JSON cannot carry infinities; log quantities of -inf (empty sets) are
/// stored as null and read back as -inf.
Json log_json(double v);
double log_from_json(const Json& v);

}  // namespace hypmax
