#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "experiments/summaries.hpp"
#include "hypmax/errors.hpp"
#include "hypmax/experiments.hpp"
#include "hypmax/logmath.hpp"
#include "hypmax/parallel.hpp"
#include "hypmax/sampling.hpp"

namespace hypmax {

namespace {

const QuadratureSpec kQuad{};

double number(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw UsageError("bad number '" + std::string(s) + "'");
  }
  return v;
}

bool defective(double log_ratio) { return std::isnan(log_ratio) || log_ratio == INFINITY; }

Json sides_row(Json row, const IneqSides& s) {
  row["lhs_log"] = log_json(s.lhs_log);
  row["rhs_log"] = log_json(s.rhs_log);
  row["ratio_log"] = log_json(s.ratio_log);
  row["ratio"] = std::exp(s.ratio_log);
  return row;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (count < 1 || !(lo > 0.0) || !(hi >= lo)) throw UsageError("log_spaced: bad range");
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    out.push_back(std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))));
  }
  return out;
}

}  // namespace

RadialFunction parse_radial_function(const std::string& spec, int n) {
  const std::string_view v = spec;
  if (v.starts_with("ball:")) {
    const double r = number(v.substr(5));
    if (!(r > 0.0)) throw UsageError("ball radius must be > 0");
    return RadialFunction::indicator(RadialSet::ball(r));
  }
  if (v.starts_with("annulus:")) {
    const double k = number(v.substr(8));
    if (k < 1 || k != std::floor(k)) throw UsageError("annulus index must be an integer >= 1");
    return RadialFunction::indicator(RadialSet::annulus(static_cast<int>(k)));
  }
  if (v.starts_with("interval:")) {
    const std::string_view rest = v.substr(9);
    const std::size_t cut = rest.find(':');
    if (cut == std::string_view::npos) throw UsageError("expected interval:<a>:<b>");
    return RadialFunction::indicator(
        RadialSet::from_intervals({{number(rest.substr(0, cut)), number(rest.substr(cut + 1))}}));
  }
  return WeightSpec::parse(spec).radial(n);
}

// ---- arithmetic lemma -------------------------------------------------------

ExperimentReport run_lemma31_fuzz(const Lemma31Options& o) {
  if (o.trials < 1) throw UsageError("lemma31: trials must be >= 1");
  if (o.max_length < 1) throw UsageError("lemma31: max_length must be >= 1");
  if (o.kappas.empty() || o.ps.empty() || o.deltas.empty() || o.rs.empty()) {
    throw UsageError("lemma31: empty parameter grid");
  }
  for (double p : o.ps) {
    for (double delta : o.deltas) {
      if (!(delta > -p && delta < 1.0)) throw UsageError("lemma31: needs -p < delta < 1");
    }
  }
  std::vector<std::pair<std::vector<double>, std::vector<double>>> seqs(o.trials);
  for (int t = 0; t < o.trials; ++t) {
    RngStream rng(derive_seed(o.seed, static_cast<std::uint64_t>(t)), 0);
    const auto draw = [&](std::vector<double>& out) {
      out.resize(1 + static_cast<std::size_t>(rng.uniform() * o.max_length));
      for (double& v : out) v = rng.uniform() < 0.2 ? 0.0 : std::exp(3.0 * rng.normal());
    };
    draw(seqs[t].first);
    draw(seqs[t].second);
  }
  struct Grid {
    double kappa, p, delta;
    int r;
  };
  std::vector<Grid> grid;
  for (double kappa : o.kappas)
    for (double p : o.ps)
      for (double delta : o.deltas)
        for (int r : o.rs) grid.push_back({kappa, p, delta, r});

  std::vector<Json> rows(grid.size());
  parallel_for(grid.size(), o.threads, [&](std::size_t i) {
    const Grid& g = grid[i];
    long long violations = 0;
    double worst = kNegInf, scaling = 0.0;
    int worst_trial = -1;
    for (int t = 0; t < o.trials; ++t) {
      SeqPair sp{seqs[t].first, seqs[t].second, g.kappa, g.p, g.delta, g.r};
      const IneqSides s = lemma31_check(sp);
      if (s.ratio_log > 0.0 || defective(s.ratio_log)) ++violations;
      if (s.ratio_log > worst) {
        worst = s.ratio_log;
        worst_trial = t;
      }
      if (t % 10 == 0 && s.ratio_log > kNegInf) {
        for (double& v : sp.c) v *= 37.5;
        for (double& v : sp.d) v *= 37.5;
        scaling = std::max(scaling, std::fabs(lemma31_check(sp).ratio_log - s.ratio_log));
      }
    }
    rows[i] = Json{{"kappa", g.kappa},
                   {"p", g.p},
                   {"delta", g.delta},
                   {"r", g.r},
                   {"trials", o.trials},
                   {"violations", violations},
                   {"worst_ratio_log", log_json(worst)},
                   {"worst_trial", worst_trial},
                   {"constant", lemma31_constant(g.p, g.delta, g.kappa)},
                   {"max_scaling_error", scaling}};
  });
  Json params{{"trials", o.trials},   {"kappas", o.kappas}, {"ps", o.ps},
              {"deltas", o.deltas},   {"rs", o.rs},         {"max_length", o.max_length},
              {"seed", o.seed},
              {"thresholds", {{"scaling_tolerance", kScalingTolerance}}}};
  return finish("lemma31", std::move(params), Json(rows), o.seed);
}

Json summarize_lemma31(const Json& params, const Json& records) {
  long long violations = 0;
  double worst = kNegInf, scaling = 0.0, constant = 0.0;
  Json worst_cell = nullptr;
  for (const Json& rec : records) {
    violations += rec["violations"].get<long long>();
    scaling = std::max(scaling, rec["max_scaling_error"].get<double>());
    constant = std::max(constant, rec["constant"].get<double>());
    const double w = log_from_json(rec["worst_ratio_log"]);
    if (w > worst) {
      worst = w;
      worst_cell = Json{{"kappa", rec["kappa"]}, {"p", rec["p"]}, {"delta", rec["delta"]},
                        {"r", rec["r"]}, {"trial", rec["worst_trial"]}};
    }
  }
  const double tol = params["thresholds"]["scaling_tolerance"];
  return Json{{"max_ratio", std::exp(worst)},
              {"fitted_constant", std::exp(worst)},
              {"max_derived_constant", constant},
              {"worst_cell", worst_cell},
              {"violations", violations},
              {"max_scaling_error", scaling},
              {"pass", violations == 0 && scaling <= tol}};
}

// ---- bilinear set estimate ---------------------------------------------------

ExperimentReport run_lemma32_scan(const Lemma32Options& o) {
  if (o.j_max < 1 || o.r_max < 1) throw UsageError("lemma32: j_max and r_max must be >= 1");
  const WeightSpec w = WeightSpec::parse(o.weight);
  const RadialFunction wr = w.radial(o.n);
  const RadiusGrid grid = RadiusGrid::standard();
  const RadialFunction ms = m_s_table(wr, o.s, tau_grid(o.j_max, o.tau_step), grid, o.n, kQuad, o.threads);
  struct Cell {
    int j, l, r;
  };
  std::vector<Cell> cells;
  for (int j = 1; j <= o.j_max; ++j)
    for (int l = 1; l <= o.j_max; ++l)
      for (int r = 1; r <= o.r_max; ++r)
        if (std::abs(l - j) <= r) cells.push_back({j, l, r});
  std::vector<Json> rows(cells.size());
  parallel_for(cells.size(), o.threads, [&](std::size_t i) {
    const Cell& c = cells[i];
    const IneqSides s = lemma32_sides(RadialSet::annulus(c.j), RadialSet::annulus(c.l), wr, ms,
                                      o.s, c.r, o.n, kQuad);
    rows[i] = sides_row(Json{{"part", "annuli"}, {"weight", o.weight}, {"j", c.j}, {"l", c.l}, {"r", c.r}}, s);
  });
  const RadialFunction one = RadialFunction::constant(1.0);
  for (int r = 2; r <= std::max(2, o.r_max); ++r) {
    const IneqSides s = lemma32_sides(RadialSet::ball(2.0), RadialSet::ball(2.0), one, one, o.s, r,
                                      o.n, kQuad);
    rows.push_back(sides_row(Json{{"part", "ball"}, {"weight", "const"}, {"j", nullptr}, {"l", nullptr}, {"r", r}}, s));
  }
  Json params{{"n", o.n}, {"s", o.s}, {"weight", o.weight}, {"j_max", o.j_max},
              {"r_max", o.r_max}, {"tau_step", o.tau_step},
              {"thresholds", {{"trend_factor", kTrendFactor}}}};
  return finish("lemma32", std::move(params), Json(rows), 0);
}

Json summarize_lemma32(const Json& params, const Json& records) {
  double fitted = 0.0;
  bool finite = true;
  std::vector<std::pair<double, double>> ball;
  for (const Json& rec : records) {
    const double lr = log_from_json(rec["ratio_log"]);
    finite = finite && !defective(lr) && lr > kNegInf;
    if (rec["part"] == "annuli") fitted = std::max(fitted, std::exp(lr));
    else ball.emplace_back(rec["r"].get<double>(), std::exp(lr));
  }
  const TrendCheck t = no_growth_trend(ball, params["thresholds"]["trend_factor"]);
  return Json{{"max_ratio", fitted},
              {"fitted_constant", fitted},
              {"ball_inner_half_max", t.inner_max},
              {"ball_outer_half_max", t.outer_max},
              {"trend_slope", t.slope},
              {"all_finite", finite},
              {"pass", finite && t.pass}};
}

// ---- distributional estimate -------------------------------------------------

ExperimentReport run_lemma33_scan(const Lemma33Options& o) {
  if (o.r_max < 1) throw UsageError("lemma33: r_max must be >= 1");
  const double eta = o.eta.value_or(default_eta(o.n));
  if (!(eta > 0.0)) throw UsageError("lemma33: eta must be > 0");
  const RadiusGrid grid = RadiusGrid::standard();
  struct Part {
    std::string name, function, weight;
    double s;
  };
  std::vector<Part> parts = {{"ball", "ball:1", "const", o.s},
                             {"annulus", "annulus:" + std::to_string(o.annulus), "gamma:1", o.s}};
  for (double s : o.s_sweep) parts.push_back({"s_sweep", "ball:1", "const", s});
  std::vector<Json> rows;
  for (const Part& part : parts) {
    const Lemma33Context ctx(parse_radial_function(part.function, o.n), WeightSpec::parse(part.weight),
                             part.s, o.n, grid, kQuad, o.tau_step, o.threads);
    for (int r = 1; r <= o.r_max; ++r) {
      const double top = ctx.max_ar_a1(r);
      for (double frac : o.lambda_fractions) {
        const IneqSides s = ctx.sides(r, frac * top, eta);
        rows.push_back(sides_row(Json{{"part", part.name}, {"function", part.function},
                                      {"weight", part.weight}, {"s", part.s}, {"r", r},
                                      {"lambda_fraction", frac}, {"lambda", frac * top},
                                      {"eta", eta}},
                                 s));
      }
    }
  }
  Json params{{"n", o.n}, {"s", o.s}, {"r_max", o.r_max}, {"lambda_fractions", o.lambda_fractions},
              {"eta", eta}, {"s_sweep", o.s_sweep}, {"annulus", o.annulus}, {"tau_step", o.tau_step}};
  return finish("lemma33", std::move(params), Json(rows), 0);
}

Json summarize_lemma33(const Json&, const Json& records) {
  std::map<std::string, double> by_key;
  double fitted = 0.0;
  bool finite = true;
  for (const Json& rec : records) {
    const double lr = log_from_json(rec["ratio_log"]);
    finite = finite && !defective(lr);
    const double ratio = std::exp(lr);
    const std::string key = rec["part"].get<std::string>() + "@s=" + Json(rec["s"]).dump();
    by_key[key] = std::max(by_key[key], ratio);
    if (rec["part"] != "s_sweep") fitted = std::max(fitted, ratio);
  }
  Json per = Json::object();
  for (const auto& [k, v] : by_key) per[k] = v;
  return Json{{"max_ratio", fitted}, {"fitted_constant", fitted}, {"fitted_by_part", per},
              {"all_finite", finite}, {"pass", finite}};
}

// ---- weak type -----------------------------------------------------------------

ExperimentReport run_fs_scan(const FsOptions& o) {
  if (!(o.lambda_min > 0.0) || !(o.lambda_max >= o.lambda_min)) {
    throw UsageError("fs: needs 0 < lambda_min <= lambda_max");
  }
  if (o.functions.empty() || o.weights.empty()) throw UsageError("fs: empty function or weight list");
  const std::vector<double> lambdas = log_spaced(o.lambda_min, o.lambda_max, o.lambda_count);
  const RadiusGrid grid = RadiusGrid::standard();
  std::vector<Json> rows;
  for (const std::string& fname : o.functions) {
    const RadialFunction f = parse_radial_function(fname, o.n);
    for (const std::string& wname : o.weights) {
      const FsContext ctx(f, WeightSpec::parse(wname), o.s, o.n, o.lambda_min, grid, kQuad,
                          o.tau_step, o.threads);
      for (double lambda : lambdas) {
        rows.push_back(sides_row(Json{{"function", fname}, {"weight", wname}, {"s", o.s},
                                      {"lambda", lambda}},
                                 ctx.sides(lambda)));
      }
    }
  }
  Json params{{"n", o.n}, {"s", o.s}, {"functions", o.functions}, {"weights", o.weights},
              {"lambda_min", o.lambda_min}, {"lambda_max", o.lambda_max},
              {"lambda_count", o.lambda_count}, {"tau_step", o.tau_step},
              {"thresholds", {{"trend_factor", kTrendFactor}}}};
  return finish("fs", std::move(params), Json(rows), 0);
}

Json summarize_fs(const Json& params, const Json& records) {
  const double factor = params["thresholds"]["trend_factor"];
  std::map<std::string, std::vector<std::pair<double, double>>> groups;
  std::vector<std::string> order;
  bool finite = true;
  double fitted = 0.0;
  for (const Json& rec : records) {
    const double lr = log_from_json(rec["ratio_log"]);
    finite = finite && !defective(lr);
    const std::string key = rec["function"].get<std::string>() + " | " + rec["weight"].get<std::string>();
    if (!groups.count(key)) order.push_back(key);
    // Smaller lambda is the larger scale.
    groups[key].emplace_back(-rec["lambda"].get<double>(), std::exp(lr));
    fitted = std::max(fitted, std::exp(lr));
  }
  Json per = Json::array();
  bool all_trend = true;
  for (const std::string& key : order) {
    const TrendCheck t = no_growth_trend(groups[key], factor);
    all_trend = all_trend && t.pass;
    per.push_back(Json{{"group", key}, {"max_ratio", std::max(t.inner_max, t.outer_max)},
                       {"inner_half_max", t.inner_max}, {"outer_half_max", t.outer_max},
                       {"pass", t.pass}});
  }
  return Json{{"max_ratio", fitted}, {"fitted_constant", fitted}, {"groups", per},
              {"all_finite", finite}, {"pass", finite && all_trend}};
}

// ---- weight conditions -----------------------------------------------------------

ConditionKind parse_condition(const std::string& name) {
  if (name == "ap-loc") return ConditionKind::ApLoc;
  if (name == "eq13") return ConditionKind::Eq13;
  if (name == "eq16") return ConditionKind::Eq16;
  throw UsageError("unknown condition '" + name + "' (expected ap-loc, eq13 or eq16)");
}

std::string condition_name(ConditionKind c) {
  switch (c) {
    case ConditionKind::ApLoc: return "ap-loc";
    case ConditionKind::Eq13: return "eq13";
    case ConditionKind::Eq16: return "eq16";
  }
  return "?";
}

ExperimentReport run_condition_checks(const ConditionOptions& o) {
  const WeightSpec w = WeightSpec::parse(o.weight);
  if (!(o.p > 1.0)) throw UsageError("condition: p must be > 1");
  if (o.j_max < 1 || o.r_max < 1) throw UsageError("condition: j_max and r_max must be >= 1");
  if (o.bound && !(*o.bound > 0.0)) throw UsageError("condition: bound must be > 0");
  std::vector<Json> rows;
  Json params{{"weight", o.weight}, {"condition", condition_name(o.condition)}, {"n", o.n},
              {"p", o.p}};
  switch (o.condition) {
    case ConditionKind::ApLoc: {
      const std::vector<double> taus = tau_grid(o.tau_max, o.tau_step);
      for (double tau : taus) {
        for (double rad : o.loc_radii) {
          const double v = ap_loc_ratio(w, BallSpec{Point::on_axis(o.n, tau), rad}, o.p, kQuad);
          rows.push_back(Json{{"key", tau}, {"tau", tau}, {"radius", rad}, {"ratio", v},
                              {"ratio_log", std::log(v)}});
        }
      }
      params["tau_max"] = o.tau_max;
      params["tau_step"] = o.tau_step;
      params["loc_radii"] = o.loc_radii;
      break;
    }
    case ConditionKind::Eq13: {
      const double alpha = o.alpha.value_or(o.p / (o.p - o.delta + 1.0));
      const double beta = o.beta.value_or(alpha);
      struct Cell { int j, l, r; };
      std::vector<Cell> cells;
      for (int j = 1; j <= o.j_max; ++j)
        for (int l = 1; l <= o.j_max; ++l)
          for (int r = 1; r <= o.r_max; ++r)
            if (std::abs(l - j) <= r) cells.push_back({j, l, r});
      rows.resize(cells.size());
      parallel_for(cells.size(), o.threads, [&](std::size_t i) {
        const Cell& c = cells[i];
        const Condition13Args a{.r = c.r, .alpha = alpha, .beta = beta, .p = o.p, .n = o.n};
        const IneqSides s = condition13_sides(w, RadialSet::annulus(c.j), RadialSet::annulus(c.l), a, kQuad);
        rows[i] = sides_row(Json{{"key", c.r}, {"j", c.j}, {"l", c.l}, {"r", c.r}, {"alpha", alpha},
                                 {"beta", beta}},
                            s);
      });
      params["delta"] = o.delta;
      params["alpha"] = alpha;
      params["beta"] = beta;
      params["j_max"] = o.j_max;
      params["r_max"] = o.r_max;
      break;
    }
    case ConditionKind::Eq16: {
      struct Cell { int j, l, r; };
      std::vector<Cell> cells;
      for (int j = 1; j <= o.j_max; ++j)
        for (int l = 1; l <= o.j_max; ++l)
          for (int r = 1; r <= o.r_max; ++r)
            if (std::abs(l - j) <= r) cells.push_back({j, l, r});
      rows.resize(cells.size());
      parallel_for(cells.size(), o.threads, [&](std::size_t i) {
        const Cell& c = cells[i];
        const Condition16Args a{.j = c.j, .l = c.l, .r = c.r, .p = o.p, .delta = o.delta, .n = o.n};
        const double lr = condition16_cell_log_ratio(w, a, kQuad);
        rows[i] = Json{{"key", c.r}, {"j", c.j}, {"l", c.l}, {"r", c.r}, {"delta", o.delta},
                       {"ratio_log", log_json(lr)}, {"ratio", std::exp(lr)}};
      });
      params["delta"] = o.delta;
      params["j_max"] = o.j_max;
      params["r_max"] = o.r_max;
      break;
    }
  }
  params["bound"] = o.bound ? Json(*o.bound) : Json(nullptr);
  params["thresholds"] = Json{{"trend_factor", kTrendFactor}};
  return finish("condition", std::move(params), Json(rows), 0);
}

Json summarize_condition(const Json& params, const Json& records) {
  std::vector<std::pair<double, double>> kv;
  double max_ratio = 0.0;
  bool finite = true;
  for (const Json& rec : records) {
    const double lr = log_from_json(rec["ratio_log"]);
    finite = finite && !defective(lr);
    kv.emplace_back(rec["key"].get<double>(), std::exp(lr));
    max_ratio = std::max(max_ratio, std::exp(lr));
  }
  const TrendCheck t = no_growth_trend(kv, params["thresholds"]["trend_factor"]);
  const bool declared = !params["bound"].is_null();
  const bool pass = finite && !records.empty() &&
                    (declared ? max_ratio <= params["bound"].get<double>() : t.pass);
  return Json{{"max_ratio", max_ratio},
              {"fitted_constant", max_ratio},
              {"bound", params["bound"]},
              {"inner_half_max", t.inner_max},
              {"outer_half_max", t.outer_max},
              {"trend_slope", t.slope},
              {"all_finite", finite},
              {"pass", pass}};
}

// ---- maximal function table ---------------------------------------------------------

ExperimentReport run_maximal(const MaximalOptions& o) {
  const RadialFunction f = parse_radial_function(o.function, o.n);
  const std::vector<double> taus = tau_grid(o.tau_max, o.tau_step);
  const RadialFunction mf = maximal_table(f, taus, o.mode, RadiusGrid::standard(), o.n, kQuad, o.threads);
  std::vector<Json> rows;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double fv = f.value(taus[i]);
    const double m = mf.table_values()[i];
    rows.push_back(Json{{"tau", taus[i]}, {"f", fv}, {"Mf", m},
                        {"ratio", fv > 0.0 ? Json(m / fv) : Json(nullptr)}});
  }
  const char* mode = o.mode == MaximalMode::Full ? "full" : o.mode == MaximalMode::Local ? "local" : "far";
  Json params{{"function", o.function}, {"n", o.n}, {"tau_max", o.tau_max},
              {"tau_step", o.tau_step}, {"mode", mode}};
  return finish("maximal", std::move(params), Json(rows), 0);
}

Json summarize_maximal(const Json&, const Json& records) {
  double max_mf = 0.0, max_ratio = 0.0;
  for (const Json& rec : records) {
    max_mf = std::max(max_mf, rec["Mf"].get<double>());
    if (!rec["ratio"].is_null()) max_ratio = std::max(max_ratio, rec["ratio"].get<double>());
  }
  return Json{{"max_Mf", max_mf}, {"max_ratio", max_ratio}, {"pass", true}};
}

}  // namespace hypmax
