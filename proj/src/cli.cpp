#include "profile_lab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "profile_lab/analysis.hpp"
#include "profile_lab/bidding_profile.hpp"
#include "profile_lab/excursion_profile.hpp"
#include "profile_lab/format.hpp"
#include "profile_lab/serialization.hpp"
#include "profile_lab/strategy_sim.hpp"

namespace profile_lab {

namespace {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr const char* kGridEnv = "PROFILE_LAB_DEFAULT_GRID";
constexpr double kDefaultH = 1e-3;
constexpr double kBiddingSMin = 0.035;
constexpr double kLinearSMin = 0.0415;

double parse_real(const std::string& text, const char* what) {
  if (text == "s_star" || text == "s*") return s_star();
  if (text == "sK" || text == "s_K") return solve_sK();
  if (text == "ln2") return std::numbers::ln2;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw InputError(std::string("cannot parse ") + what + " '" + text + "'");
  }
}

std::vector<double> spaced(double lo, double hi, int steps, bool log_scale) {
  if (steps < 2) throw InputError("--steps must be at least 2");
  if (!(lo < hi)) throw InputError("range minimum must be below its maximum");
  std::vector<double> xs(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    const double f = static_cast<double>(i) / (steps - 1);
    xs[static_cast<std::size_t>(i)] = log_scale ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
  }
  xs.back() = hi;
  return xs;
}

using Row = std::vector<double>;

void write_csv(std::ostream& out, const std::string& header, const std::vector<Row>& rows) {
  out << header << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_double(row[i]);
    }
    out << '\n';
  }
}

void emit_csv(const std::string& path, std::ostream& fallback, const std::string& header,
              const std::vector<Row>& rows) {
  if (path.empty()) {
    write_csv(fallback, header, rows);
    return;
  }
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  write_csv(f, header, rows);
}

struct GridChoice {
  std::optional<double> x_min;
  double h = kDefaultH;
};

GridChoice grid_from_env() {
  GridChoice g;
  const char* raw = std::getenv(kGridEnv);
  if (raw == nullptr || *raw == '\0') return g;
  const std::string text(raw);
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw InputError(std::string(kGridEnv) + " must be 'x_min,h', got '" + text + "'");
  }
  g.x_min = parse_real(text.substr(0, comma), kGridEnv);
  g.h = parse_real(text.substr(comma + 1), kGridEnv);
  return g;
}

// Window wide enough for the tail model yet short of underflow at the bottom.
double default_x_min(double decay_rate, double s) {
  return -std::min(30.0 / std::max(s, 0.5), 600.0 / decay_rate);
}

Row linear_row(double s) {
  const LinearTradeoff lt = linear_tradeoff(s);
  return {s, lt.excursion.rho, lt.excursion.chi, lt.strategy.rho, lt.strategy.chi, lt.K};
}

Row lower_row(double t) {
  const LowerBoundPoint lb = linear_lower_bound(t);
  return {t, lb.chi_ls, lb.rho_ls_raw, lb.rho_ls};
}

struct Options {
  std::string problem = "bidding";
  std::string s;
  std::string s_min;
  std::string s_max;
  std::string t;
  std::string t_min;
  std::string t_max;
  int steps = 200;
  bool log_scale = false;
  std::string x_min;
  std::string h;
  double tol = 1e-12;
  int max_iter = 10000;
  double tol_rel = 1e-4;
  double tol_abs = 1e-6;
  double target = 0.0;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  std::string out;
  std::string file;
  std::string which = "all";
};

void check_problem(const std::string& problem) {
  if (problem != "bidding" && problem != "linsearch") {
    throw InputError("--problem must be 'bidding' or 'linsearch', got '" + problem + "'");
  }
}

int cmd_tradeoff(const Options& o, std::ostream& out) {
  check_problem(o.problem);
  const bool bidding = o.problem == "bidding";
  const double upper = bidding ? 1.0 : s_star();
  std::vector<double> grid;
  if (!o.s.empty()) {
    grid = {parse_real(o.s, "--s")};
  } else {
    const double lo = o.s_min.empty() ? (bidding ? kBiddingSMin : kLinearSMin)
                                      : parse_real(o.s_min, "--s-min");
    const double hi = o.s_max.empty() ? upper : parse_real(o.s_max, "--s-max");
    const bool log_scale = o.log_scale || (o.s_min.empty() && o.s_max.empty());
    grid = spaced(lo, hi, o.steps, log_scale);
  }
  for (double s : grid) {
    if (!(s > 0.0 && s <= upper)) {
      throw InputError("s = " + format_double(s) + " outside (0, " + format_double(upper) + "]");
    }
  }
  std::vector<Row> rows;
  for (double s : grid) {
    if (bidding) {
      const TradeoffPoint p = bidding_tradeoff(s);
      rows.push_back({s, p.rho, p.chi});
    } else {
      rows.push_back(linear_row(s));
    }
  }
  emit_csv(o.out, out,
           bidding ? "s,rho,chi" : "s,rho_excursion,chi_excursion,rho_ls,chi_ls,K", rows);
  return kExitOk;
}

int cmd_lowerbound(const Options& o, std::ostream& out) {
  std::vector<double> grid;
  if (!o.t.empty()) {
    grid = {parse_real(o.t, "--t")};
  } else {
    const double lo = o.t_min.empty() ? 0.005 : parse_real(o.t_min, "--t-min");
    const double hi = o.t_max.empty() ? 1.0 : parse_real(o.t_max, "--t-max");
    grid = spaced(lo, hi, o.steps, o.log_scale);
  }
  for (double t : grid) {
    if (!(t > 0.0 && t <= 1.0)) throw InputError("t = " + format_double(t) + " outside (0, 1]");
  }
  std::vector<Row> rows;
  for (double t : grid) rows.push_back(lower_row(t));
  emit_csv(o.out, out, "t,chi_ls,rho_ls_raw,rho_ls_clamped", rows);
  return kExitOk;
}

int cmd_build(const Options& o, std::ostream& out) {
  check_problem(o.problem);
  if (o.s.empty()) throw InputError("--s is required");
  if (o.out.empty()) throw InputError("--out is required");
  const double s = parse_real(o.s, "--s");
  const bool bidding = o.problem == "bidding";
  if (bidding ? !(s > 0.0 && s <= 1.0) : !(s > 0.0 && s <= s_star())) {
    throw InputError("s = " + format_double(s) + " outside the problem's parameter range");
  }
  const GridChoice env = grid_from_env();
  BuildOptions opts;
  opts.h = o.h.empty() ? env.h : parse_real(o.h, "--h");
  const double rate = bidding ? bidding_tail_rate(s) : excursion_tail_rate(s);
  opts.x_min = !o.x_min.empty() ? parse_real(o.x_min, "--x-min")
                                : env.x_min.value_or(default_x_min(rate, s));
  opts.tol = o.tol;
  opts.max_iter = o.max_iter;

  nlohmann::ordered_json summary;
  summary["problem"] = o.problem;
  summary["s"] = s;
  if (bidding) {
    const BiddingProfile p = build_profile(s, opts);
    save_profile(o.out, p);
    summary["rho"] = p.rho;
    summary["chi"] = p.chi;
    summary["iterations"] = p.iterations;
    summary["last_delta"] = p.last_delta;
  } else {
    const ExcursionProfile p = build_excursion_profile(s, opts);
    save_profile(o.out, p);
    summary["rho"] = p.rho;
    summary["chi"] = p.chi;
    summary["K"] = p.K;
    summary["iterations"] = p.iterations;
    summary["last_delta"] = p.last_delta;
  }
  summary["x_min"] = opts.x_min;
  summary["h"] = opts.h;
  summary["out"] = o.out;
  out << summary.dump() << '\n';
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const AnyProfile any = load_profile(o.file);
  if (const auto* p = std::get_if<BiddingProfile>(&any)) {
    const VerificationReport r = verify(*p, o.tol_rel, o.tol_abs);
    out << to_json(r) << '\n';
    return r.passed ? kExitOk : kExitVerifyFailed;
  }
  const auto& q = std::get<ExcursionProfile>(any);
  const ExcursionReport r = verify_excursion(q, o.tol_rel, o.tol_abs);
  out << to_json(r) << '\n';
  return r.passed ? kExitOk : kExitVerifyFailed;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.samples == 0) throw InputError("--samples must be at least 1");
  const AnyProfile any = load_profile(o.file);
  SimOptions opts;
  opts.threads = o.threads;
  SimReport r;
  if (const auto* p = std::get_if<BiddingProfile>(&any)) {
    if (!(o.target > 0.0)) throw InputError("--target must be positive for bidding");
    r = simulate_bidding(*p, o.target, o.samples, o.seed, opts);
  } else {
    if (o.target == 0.0) throw InputError("--target must be non-zero for linear search");
    r = simulate_linear(std::get<ExcursionProfile>(any), o.target, o.samples, o.seed, opts);
  }
  out << to_json_line(r) << '\n';
  err << "bias_bound=" << format_double(r.bias_bound) << '\n';
  return kExitOk;
}

void figure_1a(const std::filesystem::path& dir) {
  std::vector<Row> ours;
  for (double s : spaced(kBiddingSMin, std::numbers::ln2, 100, true)) {
    const TradeoffPoint p = bidding_tradeoff(s);
    ours.push_back({s, p.rho, p.chi});
  }
  // Second branch, parametrized by xi in [1, e]: s = ln(xi (2 - ln xi)).
  const auto xis = spaced(1.0, std::numbers::e, 100, false);
  for (std::size_t i = 1; i < xis.size(); ++i) {
    const double xi = xis[i];
    const double s = i + 1 == xis.size() ? 1.0 : std::log(xi * (2.0 - std::log(xi)));
    ours.push_back({s, std::exp(s) / s, xi / s});
  }
  emit_csv((dir / "fig1a_ours.csv").string(), std::cout, "s,rho,chi", ours);
  emit_csv((dir / "fig1a_point.csv").string(), std::cout, "rho,chi",
           {{std::numbers::e, std::numbers::e}});
}

void figure_1b(const std::filesystem::path& dir) {
  std::vector<Row> ours;
  const double sk = solve_sK();
  for (double s : spaced(kLinearSMin, sk, 100, true)) {
    const LinearTradeoff lt = linear_tradeoff(s);
    ours.push_back({s, lt.strategy.rho, lt.strategy.chi});
  }
  const auto upper = spaced(sk, s_star(), 101, false);
  for (std::size_t i = 1; i < upper.size(); ++i) {
    const LinearTradeoff lt = linear_tradeoff(upper[i]);
    ours.push_back({upper[i], lt.strategy.rho, lt.strategy.chi});
  }
  emit_csv((dir / "fig1b_ours.csv").string(), std::cout, "s,rho_ls,chi_ls", ours);
  std::vector<Row> lower;
  for (int k = 1; k <= 200; ++k) lower.push_back(lower_row(k / 200.0));
  emit_csv((dir / "fig1b_lower.csv").string(), std::cout, "t,chi_ls,rho_ls_raw,rho_ls_clamped",
           lower);
  emit_csv((dir / "fig1b_point.csv").string(), std::cout, "rho_ls,chi_ls",
           {{rho_ls_star(), rho_ls_star()}});
}

int cmd_figure(const Options& o, std::ostream& out) {
  if (o.which != "1a" && o.which != "1b" && o.which != "all") {
    throw InputError("--which must be 1a, 1b or all");
  }
  if (o.out.empty()) throw InputError("--out directory is required");
  const std::filesystem::path dir(o.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create " + o.out + ": " + ec.message());
  if (o.which != "1b") figure_1a(dir);
  if (o.which != "1a") figure_1b(dir);
  out << "wrote " << dir.string() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robustness-consistency profiles for online bidding and linear search",
               "profile_lab"};
  // "--h" is the grid step, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  Options o;

  auto* tradeoff = app.add_subcommand("tradeoff", "Emit the upper trade-off curve as CSV");
  tradeoff->add_option("--problem", o.problem, "bidding or linsearch");
  tradeoff->add_option("--s", o.s, "Single parameter value");
  tradeoff->add_option("--s-min", o.s_min, "Range start (accepts s_star and sK)");
  tradeoff->add_option("--s-max", o.s_max, "Range end (accepts s_star and sK)");
  tradeoff->add_option("--steps", o.steps, "Number of rows");
  tradeoff->add_flag("--log", o.log_scale, "Log spacing");
  tradeoff->add_option("--out", o.out, "Output file (stdout if omitted)");

  auto* lower = app.add_subcommand("lowerbound", "Emit the linear-search lower bound as CSV");
  lower->add_option("--t", o.t, "Single parameter value");
  lower->add_option("--t-min", o.t_min, "Range start");
  lower->add_option("--t-max", o.t_max, "Range end");
  lower->add_option("--steps", o.steps, "Number of rows");
  lower->add_flag("--log", o.log_scale, "Log spacing");
  lower->add_option("--out", o.out, "Output file (stdout if omitted)");

  auto* profile = app.add_subcommand("profile", "Build, verify or simulate profiles");
  profile->require_subcommand(1);
  auto* build = profile->add_subcommand("build", "Construct a profile and write it as JSON");
  build->add_option("--problem", o.problem, "bidding or linsearch");
  build->add_option("--s", o.s, "Trade-off parameter (accepts s_star and sK)");
  build->add_option("--x-min", o.x_min, "Window start");
  build->add_option("--h", o.h, "Grid step (1/h must be an integer)");
  build->add_option("--tol", o.tol, "Sup-norm stopping tolerance");
  build->add_option("--max-iter", o.max_iter, "Sweep cap");
  build->add_option("--out", o.out, "Output profile file");

  auto* check = profile->add_subcommand("verify", "Check a profile file; exit 1 on failure");
  check->add_option("file", o.file, "Profile JSON file")->required();
  check->add_option("--tol-rel", o.tol_rel, "Relative robustness tolerance");
  check->add_option("--tol-abs", o.tol_abs, "Absolute consistency tolerance");

  auto* sim = profile->add_subcommand("simulate", "Monte Carlo cost estimate");
  sim->add_option("file", o.file, "Profile JSON file")->required();
  sim->add_option("--target", o.target, "Target (signed for linear search)")->required();
  sim->add_option("--samples", o.samples, "Number of samples");
  sim->add_option("--seed", o.seed, "Counter RNG seed");
  sim->add_option("--threads", o.threads, "Worker threads (0: all cores)");

  auto* figure = app.add_subcommand("figure", "Write the figure data series as CSV files");
  figure->add_option("--which", o.which, "1a, 1b or all");
  figure->add_option("--out", o.out, "Output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*tradeoff) return cmd_tradeoff(o, out);
    if (*lower) return cmd_lowerbound(o, out);
    if (*build) return cmd_build(o, out);
    if (*check) return cmd_verify(o, out);
    if (*sim) return cmd_simulate(o, out, err);
    if (*figure) return cmd_figure(o, out);
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitVerifyFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace profile_lab
