#include "profile_lab/excursion_profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "profile_lab/analysis.hpp"

namespace profile_lab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRelativeTol = 1e-10;

void sweep_pair(const ProfilePair& h, const std::vector<double>& psi_prefix, double rho,
                const GridSpec& grid, double tail_rate, std::vector<double>& prefix_plus,
                std::vector<double>& prefix_minus, ProfilePair& out) {
  const std::size_t n = grid.cells;
  const std::size_t m = grid.steps_per_unit;
  prefix_integrals(h.plus, grid.h, h.plus.front() / tail_rate, prefix_plus);
  prefix_integrals(h.minus, grid.h, h.minus.front() / tail_rate, prefix_minus);
  out.plus.resize(h.plus.size());
  out.minus.resize(h.minus.size());
  const double inv_rho = 1.0 / rho;
  for (std::size_t i = 0; i <= n; ++i) {
    out.plus[i] = (prefix_plus[i] + prefix_minus[i]) * inv_rho;
    const std::size_t j = i + m;
    const double ahead = j <= n ? prefix_plus[j] : prefix_plus[n] + psi_prefix[j - n];
    out.minus[i] = (ahead + prefix_minus[i]) * inv_rho;
  }
}

void check_s(double s) {
  if (!(s > 0.0 && s <= s_star())) {
    std::ostringstream msg;
    msg << "trade-off parameter s = " << s << " outside (0, s_*]";
    throw std::domain_error(msg.str());
  }
}

// Value at x of a window function whose nodes satisfy G_i ~ C(x_i) / rho.
template <typename Cover>
double nystrom_eval(const GridFunction& g, double x, double rho, Cover cover) {
  const GridSpec& grid = g.grid();
  if (x <= grid.x_min() || x > 0.0) return g.eval(x);
  const double t = (x - grid.x_min()) / grid.h;
  const auto i = std::min(static_cast<std::size_t>(std::floor(t)), grid.cells - 1);
  const double frac = t - static_cast<double>(i);
  const auto& v = g.left_values();
  if (frac <= 0.0) return v[i];
  if (frac >= 1.0) return v[i + 1];
  const double c_lo = cover(grid.x(i));
  const double c_hi = cover(grid.x(i + 1));
  if (!(c_lo > 0.0 && c_hi > 0.0)) return g.eval(x);
  const double r = (1.0 - frac) * (rho * v[i] / c_lo) + frac * (rho * v[i + 1] / c_hi);
  return r * cover(x) / rho;
}

template <typename Eval>
double nystrom_tau(const GridFunction& g, double level, Eval eval) {
  const GridSpec& grid = g.grid();
  const auto& v = g.left_values();
  if (!(level > v.front()) || level > v.back()) return g.tau(level);
  const auto j = static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), level) - v.begin());
  double lo = grid.x(j - 1);
  double hi = grid.x(j);
  for (int k = 0; k < 200 && hi - lo > 1e-15 * grid.h; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (eval(mid) < level ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace

double ExcursionProfile::eval_plus(double x) const {
  return nystrom_eval(plus, x, rho, [this](double y) { return c_plus(y); });
}

double ExcursionProfile::eval_minus(double x) const {
  return nystrom_eval(minus, x, rho, [this](double y) { return c_minus(y); });
}

double ExcursionProfile::tau_plus(double level) const {
  return nystrom_tau(plus, level, [this](double y) { return eval_plus(y); });
}

double ExcursionProfile::tau_minus(double level) const {
  return nystrom_tau(minus, level, [this](double y) { return eval_minus(y); });
}

double ExcursionProfile::strategy_cost(double target) const {
  if (target > 0.0) return target + 2.0 * c_plus(tau_plus(target));
  if (target < 0.0) return -target + 2.0 * c_minus(tau_minus(-target));
  throw std::domain_error("target must be non-zero");
}

std::vector<RightPiece> excursion_plus_pieces(double s, double K) {
  const double M = std::max(1.0, K);
  const double knee = 1.0 - std::log(M) / (2.0 * s);
  if (knee <= 0.0) return {exponential_piece(0.0, kInf, M, 2.0 * s, 1.0)};
  return {constant_piece(0.0, knee, 1.0), exponential_piece(knee, kInf, M, 2.0 * s, 1.0)};
}

std::vector<RightPiece> excursion_minus_pieces(double s, double K, double rho) {
  const double M = std::max(1.0, K);
  RightPiece piece{0.0, kInf, {ExpTerm{M * std::exp(s), 2.0 * s, 1.0}}};
  if (K != M) piece.terms.push_back(ExpTerm{(K - M) * std::exp(-s), 1.0 / rho, 0.0});
  return {piece};
}

double excursion_tail_rate(double s) { return 2.0 * excursion_decay_rate(s); }

ProfilePair apply_F_pair(const ProfilePair& h, const std::vector<RightPiece>& psi, double rho,
                         const GridSpec& grid, double tail_rate) {
  const auto psi_prefix = right_prefix(psi, grid.h, grid.steps_per_unit);
  std::vector<double> prefix_plus;
  std::vector<double> prefix_minus;
  ProfilePair out;
  sweep_pair(h, psi_prefix, rho, grid, tail_rate, prefix_plus, prefix_minus, out);
  return out;
}

PairResult iterate_F_pair(ProfilePair start, const std::vector<RightPiece>& psi, double rho,
                          const GridSpec& grid, double tail_rate, double tol, int max_iter) {
  if (start.plus.size() != grid.size() || start.minus.size() != grid.size()) {
    throw std::invalid_argument("start does not match the grid");
  }
  const auto psi_prefix = right_prefix(psi, grid.h, grid.steps_per_unit);
  std::vector<double> prefix_plus;
  std::vector<double> prefix_minus;
  ProfilePair next;
  double delta = kInf;
  for (int it = 1; it <= max_iter; ++it) {
    sweep_pair(start, psi_prefix, rho, grid, tail_rate, prefix_plus, prefix_minus, next);
    delta = 0.0;
    double rel = 0.0;
    auto track = [&](const std::vector<double>& a, const std::vector<double>& b) {
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double change = std::abs(b[i] - a[i]);
        delta = std::max(delta, change);
        if (change > 0.0) rel = std::max(rel, b[i] > 0.0 ? change / b[i] : kInf);
      }
    };
    track(start.plus, next.plus);
    track(start.minus, next.minus);
    std::swap(start, next);
    if (delta <= tol && rel <= kRelativeTol) return {std::move(start), it, delta};
  }
  std::ostringstream msg;
  msg << "coupled fixed-point iteration did not converge in " << max_iter
      << " sweeps (last sup-norm change " << delta << ")";
  throw ConvergenceError(msg.str(), delta);
}

ExcursionProfile analytic_endpoint_profile(const GridSpec& grid) {
  const double s = s_star();
  const double K = std::exp(2.0 * s);
  ExcursionProfile p;
  p.s = s;
  p.rho = (1.0 + std::exp(s)) / (2.0 * s);
  p.chi = p.rho;
  p.K = K;
  p.M = K;
  std::vector<double> plus(grid.size());
  std::vector<double> minus(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    plus[i] = std::exp(2.0 * s * grid.x(i));
    minus[i] = std::exp(s + 2.0 * s * grid.x(i));
  }
  p.plus = GridFunction(grid, std::move(plus), excursion_plus_pieces(s, K), 2.0 * s);
  p.minus = GridFunction(grid, std::move(minus), excursion_minus_pieces(s, K, p.rho), 2.0 * s);
  return p;
}

ExcursionProfile build_excursion_profile(double s, const BuildOptions& opts) {
  check_s(s);
  const GridSpec grid = GridSpec::covering(opts.x_min, opts.h);
  // The coupled operator stops contracting at s_*; use the closed form there.
  if (s == s_star()) return analytic_endpoint_profile(grid);
  const LinearTradeoff point = linear_tradeoff(s);
  ExcursionProfile p;
  p.s = s;
  p.rho = point.excursion.rho;
  p.chi = point.excursion.chi;
  p.K = point.K;
  p.M = std::max(1.0, p.K);
  auto plus_pieces = excursion_plus_pieces(s, p.K);
  auto minus_pieces = excursion_minus_pieces(s, p.K, p.rho);
  const double rate = excursion_tail_rate(s);
  ProfilePair zero{std::vector<double>(grid.size(), 0.0), std::vector<double>(grid.size(), 0.0)};
  auto result = iterate_F_pair(std::move(zero), plus_pieces, p.rho, grid, rate, opts.tol,
                               opts.max_iter);
  p.plus = GridFunction(grid, std::move(result.values.plus), std::move(plus_pieces), rate);
  p.minus = GridFunction(grid, std::move(result.values.minus), std::move(minus_pieces), rate);
  p.iterations = result.iterations;
  p.last_delta = result.last_delta;
  return p;
}

ExcursionReport verify_excursion(const ExcursionProfile& p, double tol_rel, double tol_abs) {
  const GridSpec& grid = p.plus.grid();
  ExcursionReport r;
  r.x_min = grid.x_min();
  r.h = grid.h;

  auto ratio = [](double diff, double bound) {
    if (diff <= 0.0) return 0.0;
    return bound > 0.0 ? diff / bound : kInf;
  };
  auto probe = [&](double x) {
    const double bound_plus = p.rho * p.plus.eval(x);
    const double bound_minus = p.rho * p.minus.eval(x);
    const double diff_plus = p.c_plus(x) - bound_plus;
    const double diff_minus = p.c_minus(x) - bound_minus;
    r.max_robustness_ratio_plus = std::max(r.max_robustness_ratio_plus, ratio(diff_plus, bound_plus));
    r.max_robustness_ratio_minus =
        std::max(r.max_robustness_ratio_minus, ratio(diff_minus, bound_minus));
    if (x <= 0.0) {
      r.tightness_plus = std::max(r.tightness_plus, std::abs(diff_plus));
      r.tightness_minus = std::max(r.tightness_minus, std::abs(diff_minus));
    } else {
      r.tightness_minus_right = std::max(r.tightness_minus_right, std::abs(diff_minus) / bound_minus);
    }
  };
  for (std::size_t i = 0; i < grid.size(); ++i) probe(grid.x(i));
  constexpr int kLogPoints = 400;
  for (int k = 0; k < kLogPoints; ++k) {
    probe(1e-6 * std::pow(1e7, static_cast<double>(k) / (kLogPoints - 1)));
  }

  r.consistency_gap = p.c_plus(0.0) - p.chi;
  r.boundary_gap =
      p.c_plus(0.0) + right_integral(p.plus.right_pieces(), 1.0) - p.rho * p.K * std::exp(-p.s);

  const auto& v = p.plus.left_values();
  r.offset_ok = v.back() <= 1.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) r.offset_ok = r.offset_ok && v[i] < 1.0;
  for (const auto& piece : p.plus.right_pieces()) {
    r.offset_ok = r.offset_ok && piece.initial_value() >= 1.0 - 1e-12;
  }
  r.monotone_ok = is_monotone(p.plus) && is_monotone(p.minus);
  r.tail_ok = tail_dominates(p.plus) && tail_dominates(p.minus);
  r.tail_bound = p.plus.tail_mass() + p.minus.tail_mass();
  r.passed = r.max_robustness_ratio_plus <= tol_rel && r.max_robustness_ratio_minus <= tol_rel &&
             r.consistency_gap <= tol_abs && std::abs(r.boundary_gap) <= tol_abs && r.offset_ok &&
             r.monotone_ok && r.tail_ok;
  return r;
}

double chi_from_psi(double s, const std::vector<RightPiece>& psi) {
  const double e2s = std::exp(2.0 * s);
  double total = 0.0;
  for (const auto& piece : psi) {
    for (const auto& term : piece.terms) {
      total += e2s * term.times_exp(-2.0 * s).integral(piece.start, piece.end) -
               term.integral(piece.start, piece.end);
    }
  }
  return total / (1.0 + std::exp(s));
}

}  // namespace profile_lab
