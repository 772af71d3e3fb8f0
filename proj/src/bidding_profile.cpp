#include "profile_lab/bidding_profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "profile_lab/analysis.hpp"

namespace profile_lab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Values far down the window are tiny, so the absolute stopping rule alone
// would accept iterates whose support has not yet reached x_min.
constexpr double kRelativeTol = 1e-10;

// Sweep with the right-part integrals over (0, j h] already tabulated.
void sweep(const std::vector<double>& left, const std::vector<double>& phi_prefix, double rho,
           const GridSpec& grid, double tail_rate, std::vector<double>& prefix,
           std::vector<double>& out) {
  const std::size_t n = grid.cells;
  const std::size_t m = grid.steps_per_unit;
  prefix_integrals(left, grid.h, left.front() / tail_rate, prefix);
  out.resize(left.size());
  const double inv_rho = 1.0 / rho;
  for (std::size_t i = 0; i <= n; ++i) {
    const std::size_t j = i + m;
    const double upto = j <= n ? prefix[j] : prefix[n] + phi_prefix[j - n];
    out[i] = upto * inv_rho;
  }
}

void check_s(double s) {
  if (!(s > 0.0 && s <= 1.0)) {
    std::ostringstream msg;
    msg << "trade-off parameter s = " << s << " outside (0, 1]";
    throw std::domain_error(msg.str());
  }
}

}  // namespace

std::vector<RightPiece> BiddingProfile::phi() const { return clip_pieces(g.right_pieces(), 1.0); }

double BiddingProfile::expected_cost(double target) const {
  return g.integral_upto(g.tau(target) + 1.0);
}

std::vector<RightPiece> bidding_right_pieces(double s, double chi) {
  const double scale = s * chi;
  if (scale <= 1.0) {
    return {constant_piece(0.0, 1.0, 1.0), exponential_piece(1.0, kInf, 1.0, s, 1.0)};
  }
  const double knee = 1.0 - std::log(scale) / s;
  if (knee <= 0.0) return {exponential_piece(0.0, kInf, scale, s, 1.0)};
  return {constant_piece(0.0, knee, 1.0), exponential_piece(knee, kInf, scale, s, 1.0)};
}

double bidding_tail_rate(double s) { return bidding_decay_rate(s); }

std::vector<double> apply_F(const std::vector<double>& left, const std::vector<RightPiece>& phi,
                            double rho, const GridSpec& grid, double tail_rate) {
  const auto phi_prefix = right_prefix(phi, grid.h, grid.steps_per_unit);
  std::vector<double> prefix;
  std::vector<double> out;
  sweep(left, phi_prefix, rho, grid, tail_rate, prefix, out);
  return out;
}

ExtensionResult iterate_F(std::vector<double> start, const std::vector<RightPiece>& phi,
                          double rho, const GridSpec& grid, double tail_rate, double tol,
                          int max_iter) {
  if (start.size() != grid.size()) throw std::invalid_argument("start does not match the grid");
  const auto phi_prefix = right_prefix(phi, grid.h, grid.steps_per_unit);
  std::vector<double> prefix;
  std::vector<double> next;
  double delta = kInf;
  for (int it = 1; it <= max_iter; ++it) {
    sweep(start, phi_prefix, rho, grid, tail_rate, prefix, next);
    delta = 0.0;
    double rel = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
      const double change = std::abs(next[i] - start[i]);
      delta = std::max(delta, change);
      if (change > 0.0) rel = std::max(rel, next[i] > 0.0 ? change / next[i] : kInf);
    }
    start.swap(next);
    if (delta <= tol && rel <= kRelativeTol) return {std::move(start), it, delta};
  }
  std::ostringstream msg;
  msg << "fixed-point iteration did not converge in " << max_iter
      << " sweeps (last sup-norm change " << delta << ")";
  throw ConvergenceError(msg.str(), delta);
}

BiddingProfile analytic_unit_profile(const GridSpec& grid) {
  std::vector<double> left(grid.size());
  for (std::size_t i = 0; i < left.size(); ++i) left[i] = std::exp(grid.x(i));
  BiddingProfile p;
  p.s = 1.0;
  p.rho = std::numbers::e;
  p.chi = std::numbers::e;
  p.g = GridFunction(grid, std::move(left), bidding_right_pieces(1.0, std::numbers::e), 1.0);
  return p;
}

BiddingProfile build_profile(double s, const BuildOptions& opts) {
  check_s(s);
  const GridSpec grid = GridSpec::covering(opts.x_min, opts.h);
  // At s = 1 the operator's contraction factor s e^{1-s} reaches 1, so the
  // iteration stalls; the fixed point is known in closed form there.
  if (s == 1.0) return analytic_unit_profile(grid);
  const TradeoffPoint point = bidding_tradeoff(s);
  auto pieces = bidding_right_pieces(s, point.chi);
  const double rate = bidding_tail_rate(s);
  auto result = iterate_F(std::vector<double>(grid.size(), 0.0), pieces, point.rho, grid, rate,
                          opts.tol, opts.max_iter);
  BiddingProfile p;
  p.s = s;
  p.rho = point.rho;
  p.chi = point.chi;
  p.g = GridFunction(grid, std::move(result.left), std::move(pieces), rate);
  p.iterations = result.iterations;
  p.last_delta = result.last_delta;
  return p;
}

BackwardResult build_profile_backward(double s, double x_min, double h) {
  check_s(s);
  const GridSpec grid = GridSpec::covering(x_min, h);
  const TradeoffPoint point = bidding_tradeoff(s);
  const auto pieces = bidding_right_pieces(s, point.chi);
  const auto phi_prefix = right_prefix(pieces, grid.h, grid.steps_per_unit);
  const std::size_t n = grid.cells;
  const std::size_t m = grid.steps_per_unit;

  BackwardResult out;
  out.grid = grid;
  out.left.assign(grid.size(), 0.0);
  out.left[n] = point.chi / point.rho;
  // G(x_{i+1}) - G(x_i) = (1/rho) * integral of G over (x_i + 1, x_{i+1} + 1].
  for (std::size_t i = n; i-- > 0;) {
    const std::size_t k = i + m;
    const double cell = k + 1 <= n ? grid.h * log_mean(out.left[k], out.left[k + 1])
                                   : phi_prefix[k + 1 - n] - phi_prefix[k - n];
    out.left[i] = out.left[i + 1] - cell / point.rho;
    if (out.left[i] < 0.0 && !out.first_negative_x) out.first_negative_x = grid.x(i);
  }
  return out;
}

VerificationReport verify(const BiddingProfile& p, double tol_rel, double tol_abs) {
  const GridFunction& g = p.g;
  const GridSpec& grid = g.grid();
  VerificationReport r;
  r.x_min = g.x_min();
  r.h = g.h();

  auto probe = [&](double x, bool on_left) {
    const double lhs = g.integral_upto(x + 1.0);
    const double bound = p.rho * g.eval(x);
    const double diff = lhs - bound;
    if (on_left) r.tightness_residual = std::max(r.tightness_residual, std::abs(diff));
    if (diff > 0.0) {
      r.max_robustness_residual = std::max(r.max_robustness_residual, diff);
      r.max_robustness_ratio = std::max(r.max_robustness_ratio, bound > 0.0 ? diff / bound : kInf);
    }
  };
  for (std::size_t i = 0; i < grid.size(); ++i) probe(grid.x(i), true);
  constexpr int kLogPoints = 400;
  for (int k = 0; k < kLogPoints; ++k) {
    probe(1e-6 * std::pow(1e7, static_cast<double>(k) / (kLogPoints - 1)), false);
  }

  r.consistency_gap = g.integral_upto(1.0) - p.chi;

  const auto& v = g.left_values();
  r.offset_ok = v.back() <= 1.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) r.offset_ok = r.offset_ok && v[i] < 1.0;
  for (const auto& piece : g.right_pieces()) {
    r.offset_ok = r.offset_ok && piece.initial_value() >= 1.0 - 1e-12;
  }
  r.monotone_ok = is_monotone(g);
  r.tail_ok = tail_dominates(g);
  r.tail_bound = g.tail_mass();
  r.passed = r.max_robustness_ratio <= tol_rel && r.consistency_gap <= tol_abs && r.offset_ok &&
             r.monotone_ok && r.tail_ok;
  return r;
}

GridFunction tighten(const GridFunction& g, double rho, double tol, int max_iter) {
  const double rate = g.left_tail().rate;
  auto result = iterate_F(g.left_values(), g.right_pieces(), rho, g.grid(), rate, tol, max_iter);
  return GridFunction(g.grid(), std::move(result.left), g.right_pieces(), rate);
}

BpbCheck check_bpb(const BiddingProfile& p) {
  BpbCheck c;
  c.lhs = p.integral_upto(1.0);
  double weighted = 0.0;
  for (const auto& piece : p.phi()) {
    for (const auto& term : piece.terms) {
      weighted += term.times_exp(-p.s).integral(piece.start, piece.end);
    }
  }
  c.rhs = std::exp(p.s) * weighted;
  c.decay_probe = std::exp(-p.s * p.g.x_min()) * p.integral_upto(p.g.x_min());
  return c;
}

double check_phi_lb(double s, double chi, const std::vector<RightPiece>& phi, std::size_t samples) {
  double margin = kInf;
  for (std::size_t k = 1; k <= samples; ++k) {
    const double x = static_cast<double>(k) / static_cast<double>(samples);
    const double bound = std::max(1.0, s * chi * std::exp(s * (x - 1.0)));
    margin = std::min(margin, pieces_value(phi, x) - bound);
  }
  return margin;
}

}  // namespace profile_lab
