#pragma once

// Excursion profiles for linear search: a pair (G+, G-) of non-decreasing
// functions driving alternating right/left excursions.

#include <vector>

#include "profile_lab/bidding_profile.hpp"
#include "profile_lab/grid_function.hpp"

namespace profile_lab {

struct ExcursionProfile {
  double s = 0.0;
  double rho = 0.0;
  double chi = 0.0;
  double K = 0.0;
  double M = 0.0;  // max(1, K)
  GridFunction plus;
  GridFunction minus;
  int iterations = 0;
  double last_delta = 0.0;

  /// G+ restricted to (0, 1].
  std::vector<RightPiece> psi() const { return clip_pieces(plus.right_pieces(), 1.0); }

  /// Integral of G+ up to x plus integral of G- up to x.
  double c_plus(double x) const { return plus.integral_upto(x) + minus.integral_upto(x); }
  /// Integral of G+ up to x + 1 plus integral of G- up to x.
  double c_minus(double x) const { return plus.integral_upto(x + 1.0) + minus.integral_upto(x); }

  /// G+ and G- at any x. Between window nodes the value follows C / rho,
  /// rescaled so that the nodes are reproduced exactly; log-linear
  /// interpolation misses the nearly linear growth of G- just after x = -1.
  double eval_plus(double x) const;
  double eval_minus(double x) const;
  /// Supremum of {x : G(x) < level} under the evaluation above.
  double tau_plus(double level) const;
  double tau_minus(double level) const;

  /// Expected distance travelled to reach a point at signed position target.
  double strategy_cost(double target) const;
};

std::vector<RightPiece> excursion_plus_pieces(double s, double K);
std::vector<RightPiece> excursion_minus_pieces(double s, double K, double rho);

/// Tail decay rate shared by both parts below the window.
double excursion_tail_rate(double s);

struct ProfilePair {
  std::vector<double> plus;
  std::vector<double> minus;
};

/// One sweep of the coupled operator on the window.
ProfilePair apply_F_pair(const ProfilePair& h, const std::vector<RightPiece>& psi, double rho,
                         const GridSpec& grid, double tail_rate);

struct PairResult {
  ProfilePair values;
  int iterations = 0;
  double last_delta = 0.0;
};

PairResult iterate_F_pair(ProfilePair start, const std::vector<RightPiece>& psi, double rho,
                          const GridSpec& grid, double tail_rate, double tol, int max_iter);

ExcursionProfile build_excursion_profile(double s, const BuildOptions& opts = {});

/// The classical pair G+ = e^{2sx}, G- = e^s e^{2sx} at s = s_*.
ExcursionProfile analytic_endpoint_profile(const GridSpec& grid);

struct ExcursionReport {
  double max_robustness_ratio_plus = 0.0;
  double max_robustness_ratio_minus = 0.0;
  double tightness_plus = 0.0;         // max |C+ - rho G+| on x <= 0
  double tightness_minus = 0.0;        // max |C- - rho G-| on x <= 0
  double tightness_minus_right = 0.0;  // max |C- - rho G-| / (rho G-) on x > 0
  double consistency_gap = 0.0;        // C+(0) - chi
  double boundary_gap = 0.0;           // C+(0) + int_0^1 G+ - rho K e^{-s}
  bool offset_ok = false;
  bool monotone_ok = false;
  bool tail_ok = false;
  double tail_bound = 0.0;
  double x_min = 0.0;
  double h = 0.0;
  bool passed = false;
};

ExcursionReport verify_excursion(const ExcursionProfile& p, double tol_rel, double tol_abs);

/// (1/(1+e^s)) times the integral over (0, 1] of (e^{2s(1-x)} - 1) psi(x).
double chi_from_psi(double s, const std::vector<RightPiece>& psi);

}  // namespace profile_lab
