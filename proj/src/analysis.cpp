#include "profile_lab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace profile_lab {

namespace {

constexpr double kE = std::numbers::e;
constexpr double kLn2 = std::numbers::ln2;

[[noreturn]] void domain_fail(const char* fn, double value, const char* range) {
  std::ostringstream msg;
  msg << fn << ": argument " << value << " outside " << range;
  throw std::domain_error(msg.str());
}

}  // namespace

double bisect(const std::function<double(double)>& f, double lo, double hi,
              const BisectionOptions& opts) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi)) {
    if (std::abs(flo) <= opts.endpoint_tol && std::abs(flo) <= std::abs(fhi)) return lo;
    if (std::abs(fhi) <= opts.endpoint_tol) return hi;
    std::ostringstream msg;
    msg << "bisect: bracket [" << lo << ", " << hi << "] does not straddle a root (f = " << flo
        << ", " << fhi << ")";
    throw ConvergenceError(msg.str());
  }
  const bool increasing = fhi > 0.0;
  for (int it = 0; it < opts.max_iter; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi || (hi - lo) <= opts.x_tol) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == increasing) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return std::abs(flo) <= std::abs(fhi) ? lo : hi;
}

double lambert_w0(double z) {
  const double branch_point = -1.0 / kE;
  if (std::isnan(z) || z < branch_point) domain_fail("lambert_w0", z, "[-1/e, inf)");
  if (z == 0.0) return 0.0;
  if (z == branch_point) return -1.0;
  // w e^w is increasing on [-1, inf).
  double hi = z < kE ? 1.0 : std::log(z);
  while (hi * std::exp(hi) < z) hi *= 2.0;
  const double lo = z < 0.0 ? -1.0 : 0.0;
  return bisect([z](double w) { return w * std::exp(w) - z; }, lo, hi);
}

double solve_xi_bidding(double s) {
  if (!(s >= kLn2 && s <= 1.0)) domain_fail("solve_xi_bidding", s, "[ln 2, 1]");
  const double target = std::exp(s);
  BisectionOptions opts;
  opts.endpoint_tol = 8.0 * std::numeric_limits<double>::epsilon() * target;
  return bisect([target](double xi) { return xi * (2.0 - std::log(xi)) - target; }, 1.0, kE,
                opts);
}

TradeoffPoint bidding_tradeoff(double s) {
  if (!(s > 0.0 && s <= 1.0)) domain_fail("bidding_tradeoff", s, "(0, 1]");
  TradeoffPoint p;
  p.s = s;
  p.problem = Problem::Bidding;
  p.rho = std::exp(s) / s;
  p.chi = s < kLn2 ? std::expm1(s) / s : solve_xi_bidding(s) / s;
  return p;
}

double bidding_decay_rate(double s) {
  if (!(s > 0.0 && s <= 1.0)) domain_fail("bidding_decay_rate", s, "(0, 1]");
  if (s == 1.0) return 1.0;
  const double rho = std::exp(s) / s;
  double hi = 2.0;
  while (std::exp(hi) / hi < rho) hi *= 2.0;
  return bisect([rho](double l) { return std::exp(l) / l - rho; }, 1.0, hi);
}

double bidding_lb_chi(double s) { return bidding_tradeoff(s).chi; }

double s_star() {
  static const double value = 1.0 + lambert_w0(1.0 / kE);
  return value;
}

double rho_ls_star() {
  static const double value = 1.0 + 1.0 / lambert_w0(1.0 / kE);
  return value;
}

double solve_sK() {
  static const double root = [] {
    auto g = [](double s) {
      const double es = std::exp(s);
      return es * (std::expm1(2.0 * s) + 2.0 * s * es) - (1.0 + es) * (1.0 + es);
    };
    return bisect(g, 1e-6, 1.0);
  }();
  return root;
}

double k_closed_form(double s) {
  const double es = std::exp(s);
  return es * (std::expm1(2.0 * s) + 2.0 * s * es) / ((1.0 + es) * (1.0 + es));
}

double k_branch_residual(double s, double xi) {
  const double es = std::exp(s);
  return (es - xi) * std::log(xi) + xi * (3.0 + 1.0 / es) - es * (es + 2.0 * s - 1.0);
}

double solve_K(double s) {
  const double s_end = s_star();
  if (!(s > 0.0 && s <= s_end)) domain_fail("solve_K", s, "(0, s_*]");
  if (s <= solve_sK()) return k_closed_form(s);
  // F_s is strictly increasing on [1, e^{2s}] with F_s(1) < 0 <= F_s(e^{2s});
  // at s = s_* the upper endpoint is the root itself.
  const double hi = std::exp(2.0 * s);
  BisectionOptions opts;
  opts.endpoint_tol = 64.0 * std::numeric_limits<double>::epsilon() * hi * hi;
  return bisect([s](double xi) { return k_branch_residual(s, xi); }, 1.0, hi, opts);
}

double excursion_decay_rate(double s) {
  const double s_end = s_star();
  if (!(s > 0.0 && s <= s_end)) domain_fail("excursion_decay_rate", s, "(0, s_*]");
  if (s == s_end) return s_end;
  const double rho = (1.0 + std::exp(s)) / (2.0 * s);
  auto f = [rho](double l) { return (1.0 + std::exp(l)) / (2.0 * l) - rho; };
  double hi = 2.0 * s_end;
  while (f(hi) < 0.0) hi *= 2.0;
  return bisect(f, s_end, hi);
}

LinearTradeoff linear_tradeoff(double s) {
  const double K = solve_K(s);
  const double es = std::exp(s);
  const double denom = 2.0 * s * (1.0 + es);
  LinearTradeoff out;
  out.K = K;
  out.excursion.s = s;
  out.excursion.problem = Problem::LinearSearchExcursion;
  out.excursion.rho = (1.0 + es) / (2.0 * s);
  if (s <= solve_sK()) {
    out.excursion.chi = (std::expm1(2.0 * s) - 2.0 * s) / denom;
  } else {
    out.excursion.chi =
        (std::exp(2.0 * s) + 1.0 + (1.0 + K) * std::log(K) - 2.0 * K - 2.0 * s) / denom;
  }
  out.strategy.s = s;
  out.strategy.problem = Problem::LinearSearchStrategy;
  out.strategy.rho = 1.0 + 2.0 * out.excursion.rho;
  out.strategy.chi = 1.0 + 2.0 * out.excursion.chi;
  return out;
}

LowerBoundPoint linear_lower_bound(double t) {
  if (!(t > 0.0 && t <= 1.0)) domain_fail("linear_lower_bound", t, "(0, 1]");
  const double cubic = -t * t * t + 3.0 * t + 4.0;
  LowerBoundPoint p;
  p.t = t;
  p.chi_ls = 1.0 + 2.0 * t * (t + 2.0) * (t + 2.0) / cubic;
  p.rho_ls_raw = 1.0 + 4.0 * (t * t + t + 1.0) / (t * cubic);
  p.rho_ls = std::max(rho_ls_star(), p.rho_ls_raw);
  return p;
}

double invert_linear_upper(double chi_ls) {
  const double s_end = s_star();
  const double chi_end = linear_tradeoff(s_end).strategy.chi;
  if (!(chi_ls > 1.0 && chi_ls <= chi_end)) {
    domain_fail("invert_linear_upper", chi_ls, "(1, rho_LS*]");
  }
  BisectionOptions opts;
  opts.endpoint_tol = 1e-13;
  return bisect([chi_ls](double s) { return linear_tradeoff(s).strategy.chi - chi_ls; }, 1e-9,
                s_end, opts);
}

}  // namespace profile_lab
