#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>

#include "hypmax/errors.hpp"
#include "hypmax/experiments.hpp"

namespace hypmax::cli {

namespace {

template <class T>
T parse_number(std::string_view s) {
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw UsageError("bad number '" + std::string(s) + "' in range");
  }
  return v;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    out.push_back(parse_number<double>(std::string_view(text).substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

std::vector<std::string> parse_string_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    out.push_back(text.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

// Effective configuration of one run. The output path and thread count only
// affect where and how fast a report is produced, so they are not echoed.
struct CliConfig {
  std::string subcommand;
  int n = 2;
  std::string weight;
  std::string condition;
  std::map<std::string, std::string> grids;
  long long samples = 100000;
  std::uint64_t seed = 42;
  int shards = 1;
  int threads = 1;
  std::string out;
  std::string format = "json";

  Json echo() const {
    Json g = Json::object();
    for (const auto& [k, v] : grids) g[k] = v;
    return Json{{"subcommand", subcommand}, {"n", n}, {"weight", weight},
                {"condition", condition},   {"grids", g}, {"samples", samples},
                {"seed", seed},             {"shards", shards}, {"format", format}};
  }
};

struct Leaf {
  CLI::App* app;
  std::function<ExperimentReport()> run;
};

void add_common(CLI::App* app, CliConfig& c, bool sampled) {
  app->add_option("--dim", c.n, "Dimension n >= 2")->check(CLI::Range(2, 64));
  app->add_option("--seed", c.seed, "Seed (no environment default)");
  app->add_option("--threads", c.threads, "Worker threads")->check(CLI::Range(1, 1024));
  app->add_option("--out", c.out, "Report path (written atomically)");
  app->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  if (sampled) {
    app->add_option("--samples", c.samples, "Monte Carlo samples per cell");
    app->add_option("--shards", c.shards, "Seed shards per cell");
  }
}

CLI::Option* add_grid(CLI::App* app, CliConfig& c, const std::string& name, const std::string& help) {
  return app->add_option_function<std::string>(
      "--" + name, [&c, name](const std::string& v) { c.grids[name] = v; }, help);
}

std::string grid_or(const CliConfig& c, const std::string& name, const std::string& fallback) {
  const auto it = c.grids.find(name);
  return it == c.grids.end() ? fallback : it->second;
}

int max_of(const std::vector<int>& v) { return *std::max_element(v.begin(), v.end()); }

}  // namespace

std::vector<int> parse_int_range(const std::string& text) {
  const std::size_t dots = text.find("..");
  if (dots == std::string::npos) return {parse_number<int>(text)};
  const int a = parse_number<int>(std::string_view(text).substr(0, dots));
  const int b = parse_number<int>(std::string_view(text).substr(dots + 2));
  if (b < a) throw UsageError("empty range '" + text + "'");
  std::vector<int> out;
  for (int i = a; i <= b; ++i) out.push_back(i);
  return out;
}

std::vector<double> parse_real_range(const std::string& text) {
  const std::size_t dots = text.find("..");
  if (dots == std::string::npos) return {parse_number<double>(text)};
  const std::string_view rest = std::string_view(text).substr(dots + 2);
  const std::size_t colon = rest.find(':');
  const double a = parse_number<double>(std::string_view(text).substr(0, dots));
  const double b = parse_number<double>(rest.substr(0, colon));
  const double step = colon == std::string_view::npos ? 1.0 : parse_number<double>(rest.substr(colon + 1));
  if (!(step > 0.0) || !(b >= a) || !std::isfinite(a) || !std::isfinite(b)) {
    throw UsageError("bad range '" + text + "'");
  }
  std::vector<double> out;
  const long long count = static_cast<long long>(std::floor((b - a) / step + 1e-9));
  if (count > 1000000) throw UsageError("range '" + text + "' is too long");
  for (long long i = 0; i <= count; ++i) out.push_back(a + i * step);
  if (b - out.back() > 1e-9 * step) out.push_back(b);
  return out;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical verification lab for weighted maximal inequalities on hyperbolic space",
               "hypmax"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  CliConfig c;
  std::vector<Leaf> leaves;

  // geom
  CLI::App* geom = app.add_subcommand("geom", "Geometric queries");
  geom->require_subcommand(1);
  std::string x_text = "0,0", y_text;
  double radius = 1.0;
  CLI::App* dist = geom->add_subcommand("distance", "Hyperbolic distance between two ball points");
  dist->add_option("--x", x_text, "Comma-separated coordinates of x");
  dist->add_option("--y", y_text, "Comma-separated coordinates of y")->required();
  CLI::App* vol = geom->add_subcommand("volume", "mu_n(B(x, r))");
  vol->add_option("--dim", c.n, "Dimension n >= 2")->check(CLI::Range(2, 64));
  vol->add_option("--radius", radius, "Hyperbolic radius")->required();

  // verify
  CLI::App* verify = app.add_subcommand("verify", "Verification campaigns");
  verify->require_subcommand(1);
  std::string d_steps = "4";
  for (const char* name : {"prop21", "cor22"}) {
    CLI::App* sub = verify->add_subcommand(
        name, std::string(name) == "prop21" ? "Intersection volume bound" : "Containment sandwich");
    add_common(sub, c, true);
    add_grid(sub, c, "radii", "Ball radii r, s as a..b");
    sub->add_option("--d-steps", d_steps, "Interior distances per (r, s)");
    const bool is_prop = std::string(name) == "prop21";
    leaves.push_back({sub, [&c, &d_steps, is_prop] {
      GeometryScanOptions o;
      o.n = c.n;
      o.radii = parse_int_range(grid_or(c, "radii", "2..10"));
      o.d_steps = parse_int_range(d_steps).front();
      o.samples = c.samples;
      o.seed = c.seed;
      o.shards = c.shards;
      o.threads = c.threads;
      return is_prop ? run_prop21_scan(o) : run_cor22_containment(o);
    }});
  }

  int trials = 1000;
  std::string kappas = "e,e2", ps = "1,2", deltas = "-0.5,0,0.5";
  CLI::App* l31 = verify->add_subcommand("lemma31", "Arithmetic lemma fuzz");
  add_common(l31, c, false);
  l31->add_option("--trials", trials, "Random sequence pairs");
  l31->add_option("--kappa", kappas, "Comma list; 'e' and 'e2' allowed");
  l31->add_option("--p", ps, "Comma list of p >= 1");
  l31->add_option("--delta", deltas, "Comma list with -p < delta < 1");
  add_grid(l31, c, "r", "Integer r range a..b");
  leaves.push_back({l31, [&] {
    Lemma31Options o;
    o.trials = trials;
    o.kappas.clear();
    for (const std::string& k : parse_string_list(kappas)) {
      o.kappas.push_back(k == "e" ? std::exp(1.0) : k == "e2" ? std::exp(2.0) : parse_number<double>(k));
    }
    o.ps = parse_real_list(ps);
    o.deltas = parse_real_list(deltas);
    o.rs = parse_int_range(grid_or(c, "r", "1..10"));
    o.seed = c.seed;
    o.threads = c.threads;
    return run_lemma31_fuzz(o);
  }});

  double s_exp = 2.0;
  CLI::App* l32 = verify->add_subcommand("lemma32", "Bilinear set estimate scan");
  add_common(l32, c, false);
  l32->add_option("--s", s_exp, "Exponent s > 1");
  l32->add_option("--weight", c.weight, "Weight spec (default gamma:0.5)");
  add_grid(l32, c, "j", "Annulus index range 1..J");
  add_grid(l32, c, "r", "Radius range 1..R");
  leaves.push_back({l32, [&] {
    Lemma32Options o;
    o.n = c.n;
    o.s = s_exp;
    if (!c.weight.empty()) o.weight = c.weight;
    o.j_max = max_of(parse_int_range(grid_or(c, "j", "1..15")));
    o.r_max = max_of(parse_int_range(grid_or(c, "r", "1..10")));
    o.threads = c.threads;
    return run_lemma32_scan(o);
  }});

  std::optional<double> eta;
  CLI::App* l33 = verify->add_subcommand("lemma33", "Distributional estimate scan");
  add_common(l33, c, false);
  l33->add_option("--s", s_exp, "Exponent s > 1");
  l33->add_option("--eta", eta, "Level constant (default mu(B(0,1))/mu(B(0,2)))");
  add_grid(l33, c, "r", "Radius range 1..R");
  leaves.push_back({l33, [&] {
    Lemma33Options o;
    o.n = c.n;
    o.s = s_exp;
    o.eta = eta;
    o.r_max = max_of(parse_int_range(grid_or(c, "r", "1..5")));
    o.threads = c.threads;
    return run_lemma33_scan(o);
  }});

  std::string functions = "ball:1,annulus:3,annulus:5", weights = "const,gamma:0.5";
  double lambda_min = 1e-3, lambda_max = 0.9;
  int lambda_count = 12;
  CLI::App* fs = verify->add_subcommand("fs", "Weak type (1,1) with M_s w on the right");
  add_common(fs, c, false);
  fs->add_option("--s", s_exp, "Exponent s >= 1 (1 is the M w variant)");
  fs->add_option("--functions", functions, "Comma list of ball:R, annulus:k, interval:a:b");
  fs->add_option("--weights", weights, "Comma list of weight specs");
  fs->add_option("--lambda-min", lambda_min);
  fs->add_option("--lambda-max", lambda_max);
  fs->add_option("--lambda-count", lambda_count);
  leaves.push_back({fs, [&] {
    FsOptions o;
    o.n = c.n;
    o.s = s_exp;
    o.functions = parse_string_list(functions);
    o.weights = parse_string_list(weights);
    o.lambda_min = lambda_min;
    o.lambda_max = lambda_max;
    o.lambda_count = lambda_count;
    o.threads = c.threads;
    c.weight = weights;
    return run_fs_scan(o);
  }});

  // experiment
  CLI::App* experiment = app.add_subcommand("experiment", "Counterexample reproductions");
  experiment->require_subcommand(1);
  int which = 1;
  double p = 2.0;
  CLI::App* ex = experiment->add_subcommand("example41", "Weights of the w_gamma family");
  add_common(ex, c, false);
  ex->add_option("--case", which, "1, 2 or 3")->required();
  ex->add_option("--p", p, "Exponent p > 1");
  add_grid(ex, c, "k", "Annulus index range for case 1");
  add_grid(ex, c, "r", "Radius range for case 3");
  leaves.push_back({ex, [&] {
    Example41Options o;
    o.which = which;
    o.n = c.n;
    o.p = p;
    const std::vector<int> ks = parse_int_range(grid_or(c, "k", "3..10"));
    o.k_min = ks.front();
    o.k_max = ks.back();
    o.r_max = max_of(parse_int_range(grid_or(c, "r", "1..20")));
    o.threads = c.threads;
    return run_example41(o);
  }});

  // check-weight
  std::optional<double> alpha, beta, bound;
  double delta = 0.0;
  CLI::App* cw = app.add_subcommand("check-weight", "Scan a weight condition");
  add_common(cw, c, false);
  cw->add_option("--weight", c.weight, "Weight spec")->required();
  cw->add_option("--condition", c.condition, "ap-loc, eq13 or eq16")->required();
  cw->add_option("--p", p, "Exponent p > 1");
  cw->add_option("--delta", delta, "delta < 1");
  cw->add_option("--alpha", alpha);
  cw->add_option("--beta", beta);
  cw->add_option("--bound", bound, "Declared finite bound on the ratio");
  add_grid(cw, c, "j", "Annulus index range 1..J");
  add_grid(cw, c, "r", "Radius range 1..R");
  add_grid(cw, c, "tau", "Centers for ap-loc as a..b:step");
  leaves.push_back({cw, [&] {
    ConditionOptions o;
    o.weight = c.weight;
    o.condition = parse_condition(c.condition);
    o.n = c.n;
    o.p = p;
    o.delta = delta;
    o.alpha = alpha;
    o.beta = beta;
    o.bound = bound;
    o.j_max = max_of(parse_int_range(grid_or(c, "j", "1..8")));
    o.r_max = max_of(parse_int_range(grid_or(c, "r", "1..8")));
    const std::vector<double> taus = parse_real_range(grid_or(c, "tau", "0..20:0.5"));
    if (taus.front() != 0.0 || taus.size() < 2) throw UsageError("--tau must look like 0..T:h");
    o.tau_max = taus.back();
    o.tau_step = taus[1] - taus[0];
    o.threads = c.threads;
    return run_condition_checks(o);
  }});

  // maximal
  std::string function = "ball:1", mode = "full";
  CLI::App* mx = app.add_subcommand("maximal", "Tabulate the centered maximal function");
  add_common(mx, c, false);
  mx->add_option("--function", function, "ball:R, annulus:k, interval:a:b or a weight spec");
  mx->add_option("--mode", mode, "full, local or far")->check(CLI::IsMember({"full", "local", "far"}));
  add_grid(mx, c, "tau", "Centers as 0..T:h");
  leaves.push_back({mx, [&] {
    MaximalOptions o;
    o.function = function;
    o.n = c.n;
    o.mode = mode == "full" ? MaximalMode::Full : mode == "local" ? MaximalMode::Local : MaximalMode::Far;
    const std::vector<double> taus = parse_real_range(grid_or(c, "tau", "0..10:0.25"));
    if (taus.front() != 0.0 || taus.size() < 2) throw UsageError("--tau must look like 0..T:h");
    o.tau_max = taus.back();
    o.tau_step = taus[1] - taus[0];
    o.threads = c.threads;
    c.weight = function;
    return run_maximal(o);
  }});

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    app.exit(e, err, err);
    return 2;
  }

  const CLI::App* active = &app;
  try {
    if (dist->parsed()) {
      const auto x = parse_real_list(x_text);
      const auto y = parse_real_list(y_text);
      if (x.size() != y.size()) throw UsageError("--x and --y need the same dimension");
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", distance(Point::from_coords(x), Point::from_coords(y)));
      out << buf << '\n';
      return 0;
    }
    if (vol->parsed()) {
      if (!(radius >= 0.0)) throw UsageError("--radius must be >= 0");
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.15g", ball_volume(c.n, radius));
      out << buf << '\n';
      return 0;
    }
    for (const Leaf& leaf : leaves) {
      if (!leaf.app->parsed()) continue;
      active = leaf.app;
      const std::string parent = leaf.app->get_parent() == &app ? "" : leaf.app->get_parent()->get_name() + " ";
      c.subcommand = parent + leaf.app->get_name();
      ExperimentReport report = leaf.run();
      report.seed = c.seed;
      report.params["config"] = c.echo();
      const ReportFormat format = c.format == "csv" ? ReportFormat::Csv : ReportFormat::Json;
      if (c.out.empty()) {
        out << render(report, format);
      } else {
        write_report_atomic(report, c.out, format);
        out << report.experiment << ": " << (report.passed() ? "pass" : "FAIL") << " -> " << c.out << '\n';
      }
      return report.passed() ? 0 : 1;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << active->help();
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n\n" << active->help();
    return 2;
  }
  err << app.help();
  return 2;
}

}  // namespace hypmax::cli
