#pragma once

// Closed-form trade-off curves, lower bounds and the scalar root solvers they
// need, for online bidding and linear search.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace profile_lab {

/// Thrown when an iterative method does not converge or a bracket is invalid.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_delta = 0.0)
      : std::runtime_error(what), last_delta_(last_delta) {}
  double last_delta() const noexcept { return last_delta_; }

 private:
  double last_delta_;
};

enum class Problem : std::uint8_t { Bidding, LinearSearchExcursion, LinearSearchStrategy };

struct TradeoffPoint {
  double s = 0.0;
  double rho = 0.0;
  double chi = 0.0;
  Problem problem = Problem::Bidding;
};

struct LowerBoundPoint {
  double t = 0.0;
  double chi_ls = 0.0;
  double rho_ls = 0.0;      // clamped at the classical competitive ratio
  double rho_ls_raw = 0.0;  // unclamped formula value
};

struct LinearTradeoff {
  TradeoffPoint excursion;
  TradeoffPoint strategy;
  double K = 0.0;
};

struct BisectionOptions {
  int max_iter = 200;
  // Stop once the bracket is this narrow. Zero means "until the bracket
  // collapses to adjacent doubles".
  double x_tol = 0.0;
  // An endpoint whose residual is within this bound is accepted as a root
  // even when rounding puts both endpoints on the same side.
  double endpoint_tol = 0.0;
};

/// Bisection on a monotone function with f(lo) and f(hi) of opposite sign.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              const BisectionOptions& opts = {});

/// Principal branch W0 on [-1/e, inf).
double lambert_w0(double z);

/// xi in [1, e] with xi (2 - ln xi) = e^s, for s in [ln 2, 1].
double solve_xi_bidding(double s);

TradeoffPoint bidding_tradeoff(double s);

/// Root lambda >= 1 of e^lambda / lambda = e^s / s: the decay rate of the
/// optimal bidding profile as x -> -inf.
double bidding_decay_rate(double s);

/// Lower bound on consistency for tight profiles at robustness e^s/s.
double bidding_lb_chi(double s);

/// 1 + W0(1/e), the right end of the linear-search parameter range.
double s_star();

/// Classical randomized linear-search competitive ratio 1 + 1/W0(1/e).
double rho_ls_star();

/// Unique positive root of e^s (e^{2s} - 1 + 2 s e^s) = (1 + e^s)^2.
double solve_sK();

/// Closed-form K branch, valid on (0, s_K].
double k_closed_form(double s);

/// F_s(xi) = (e^s - xi) ln xi + xi (3 + e^{-s}) - e^s (e^s + 2s - 1).
double k_branch_residual(double s, double xi);

double solve_K(double s);

/// Root lambda >= s_* of (1 + e^lambda) / (2 lambda) = (1 + e^s) / (2s): the
/// decay rate (in units of 2x) of the excursion profile as x -> -inf.
double excursion_decay_rate(double s);

LinearTradeoff linear_tradeoff(double s);

LowerBoundPoint linear_lower_bound(double t);

/// Smallest s whose strategy consistency 1 + 2 chi(s) reaches chi_ls.
/// chi_ls must lie in (1, rho_ls_star()].
double invert_linear_upper(double chi_ls);

}  // namespace profile_lab
