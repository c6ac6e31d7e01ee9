#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hypmax/inequalities.hpp"
#include "hypmax/report.hpp"

namespace hypmax {

/// "ball:<R>", "annulus:<k>", "interval:<a>:<b>" for indicators; anything
/// else is read as a weight spec.
RadialFunction parse_radial_function(const std::string& spec, int n);

/// Shared by the Prop 2.1 and Cor 2.2 scans: B(0, s) and B(d e1, r) for
/// r, s in `radii` and `d_steps` interior distances in (|r - s|, r + s), plus
/// one contained and one disjoint control per pair where they exist.
struct GeometryScanOptions {
  int n = 2;
  std::vector<int> radii = {2, 3, 4, 5, 6, 7, 8, 9, 10};
  int d_steps = 4;
  long long samples = 100000;
  std::uint64_t seed = 42;
  int shards = 1;
  int threads = 1;
};

/// Ratio mu(B(0,s) n B(de1,r)) / e^((n-1)(r+s-d)/2) per cell.
ExperimentReport run_prop21_scan(const GeometryScanOptions& o);
/// Inner-ball and outer-ball containment fractions per overlapping cell.
ExperimentReport run_cor22_containment(const GeometryScanOptions& o);

struct Lemma31Options {
  int trials = 1000;
  std::vector<double> kappas = {2.718281828459045, 7.38905609893065};
  std::vector<double> ps = {1.0, 2.0};
  std::vector<double> deltas = {-0.5, 0.0, 0.5};
  std::vector<int> rs = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  int max_length = 50;
  std::uint64_t seed = 42;
  int threads = 1;
};
ExperimentReport run_lemma31_fuzz(const Lemma31Options& o);

struct Lemma32Options {
  int n = 2;
  double s = 2.0;
  std::string weight = "gamma:0.5";
  int j_max = 15;
  int r_max = 10;
  double tau_step = 0.1;
  int threads = 1;
};
ExperimentReport run_lemma32_scan(const Lemma32Options& o);

struct Lemma33Options {
  int n = 2;
  double s = 2.0;
  int r_max = 5;
  std::vector<double> lambda_fractions = {0.1, 0.3, 0.5, 0.9};
  std::optional<double> eta;  // default_eta(n) when unset
  std::vector<double> s_sweep = {1.1, 1.25, 1.5, 2.0, 4.0};
  int annulus = 5;
  double tau_step = 0.1;
  int threads = 1;
};
ExperimentReport run_lemma33_scan(const Lemma33Options& o);

struct FsOptions {
  int n = 2;
  double s = 2.0;
  std::vector<std::string> functions = {"ball:1", "annulus:3", "annulus:5"};
  std::vector<std::string> weights = {"const", "gamma:0.5"};
  double lambda_min = 1e-3;
  double lambda_max = 0.9;
  int lambda_count = 12;
  double tau_step = 0.1;
  int threads = 1;
};
ExperimentReport run_fs_scan(const FsOptions& o);

struct Example41Options {
  int which = 1;
  int n = 2;
  double p = 2.0;
  // case 1
  std::vector<double> gammas = {0.0, 0.3, 0.7, 1.0};
  double tau_max = 20.0;
  double tau_step = 0.5;
  int k_min = 3;
  int k_max = 10;
  // case 2
  int lambda_count = 20;
  double lambda_tau_lo = 6.0;
  double lambda_tau_hi = 20.0;
  std::vector<double> strong_radii = {10.0, 20.0, 30.0};
  std::vector<double> deltas = {-1.0, -0.5, 0.0, 0.5, 0.9};
  int j_max = 6;
  int cond_r_max = 6;
  // case 3
  double ap_gamma = 0.5;
  int r_max = 20;
  std::vector<double> loc_radii = {0.25, 0.5, 1.0};
  double table_step = 0.1;
  int threads = 1;
};
ExperimentReport run_example41(const Example41Options& o);

enum class ConditionKind { ApLoc, Eq13, Eq16 };
ConditionKind parse_condition(const std::string& name);
std::string condition_name(ConditionKind c);

struct ConditionOptions {
  std::string weight = "const";
  ConditionKind condition = ConditionKind::ApLoc;
  int n = 2;
  double p = 2.0;
  double delta = 0.0;
  std::optional<double> alpha;  // default p/(p - delta + 1)
  std::optional<double> beta;
  int j_max = 8;
  int r_max = 8;
  double tau_max = 20.0;
  double tau_step = 0.5;
  std::vector<double> loc_radii = {0.25, 0.5, 1.0};
  /// Declared finite bound on the ratio; without one, the scan passes when
  /// it shows no growth along its scale key.
  std::optional<double> bound;
  int threads = 1;
};
ExperimentReport run_condition_checks(const ConditionOptions& o);

struct MaximalOptions {
  std::string function = "ball:1";
  int n = 2;
  double tau_max = 10.0;
  double tau_step = 0.25;
  MaximalMode mode = MaximalMode::Full;
  int threads = 1;
};
ExperimentReport run_maximal(const MaximalOptions& o);

/// Pass thresholds, stored in every report's params.
inline constexpr double kTrendFactor = 1.1;
inline constexpr double kSlopeThreshold = 0.5;
inline constexpr double kNormSpread = 2.0;
inline constexpr double kWeakVariation = 0.10;
inline constexpr double kStrongGrowth = 1.5;
inline constexpr double kApGlobalThreshold = 1e3;
inline constexpr double kScalingTolerance = 1e-12;

}  // namespace hypmax
