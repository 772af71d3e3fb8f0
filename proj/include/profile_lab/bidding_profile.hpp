#pragma once

// Bidding profiles: construction of the optimal profile for a trade-off
// parameter s, cost evaluation, and numerical verification.

#include <cstddef>
#include <optional>
#include <vector>

#include "profile_lab/grid_function.hpp"

namespace profile_lab {

struct BuildOptions {
  double x_min = -30.0;
  double h = 1e-3;
  double tol = 1e-12;
  int max_iter = 10000;
};

struct BiddingProfile {
  double s = 0.0;
  double rho = 0.0;
  double chi = 0.0;
  GridFunction g;
  int iterations = 0;       // fixed-point sweeps used; 0 for analytic profiles
  double last_delta = 0.0;  // sup-norm change of the final sweep

  /// The inducing function on (0, 1]: the right pieces clipped to that interval.
  std::vector<RightPiece> phi() const;
  double eval(double x) const { return g.eval(x); }
  double integral_upto(double x) const { return g.integral_upto(x); }
  double tau(double level) const { return g.tau(level); }
  /// Expected total bid when the target is `target`.
  double expected_cost(double target) const;
};

struct VerificationReport {
  double max_robustness_residual = 0.0;  // max of (A(x+1) - rho G(x))^+
  double max_robustness_ratio = 0.0;     // same, relative to rho G(x)
  double tightness_residual = 0.0;       // max |A(x+1) - rho G(x)| on x <= 0
  double consistency_gap = 0.0;          // A(1) - chi
  bool offset_ok = false;
  bool monotone_ok = false;
  bool tail_ok = false;
  double tail_bound = 0.0;  // mass below x_min
  double x_min = 0.0;
  double h = 0.0;
  bool passed = false;
};

/// Right part of the optimal profile: max(1, s chi e^{s(x-1)}) on (0, 1],
/// max(1, s chi) e^{s(x-1)} beyond.
std::vector<RightPiece> bidding_right_pieces(double s, double chi);

/// Tail decay rate used below the window.
double bidding_tail_rate(double s);

/// One sweep of the integral operator: (F H)(x) = (1/rho) A_H(x + 1) at every
/// grid point, where H is `left` on the window, `phi` on (0, 1] and an
/// exponential of rate `tail_rate` below the window.
std::vector<double> apply_F(const std::vector<double>& left, const std::vector<RightPiece>& phi,
                            double rho, const GridSpec& grid, double tail_rate);

struct ExtensionResult {
  std::vector<double> left;
  int iterations = 0;
  double last_delta = 0.0;
};

/// Iterate apply_F from `start` until the sup-norm change is <= tol.
/// Throws ConvergenceError after max_iter sweeps.
ExtensionResult iterate_F(std::vector<double> start, const std::vector<RightPiece>& phi,
                          double rho, const GridSpec& grid, double tail_rate, double tol,
                          int max_iter);

BiddingProfile build_profile(double s, const BuildOptions& opts = {});

/// The classical profile e^x, tight at s = 1.
BiddingProfile analytic_unit_profile(const GridSpec& grid);

struct BackwardResult {
  GridSpec grid;
  std::vector<double> left;
  std::optional<double> first_negative_x;
};

/// Construction by stepping the tightness identity leftwards from G(0) = chi/rho.
BackwardResult build_profile_backward(double s, double x_min, double h);

VerificationReport verify(const BiddingProfile& p, double tol_rel, double tol_abs);

/// Iterate the operator downward from an existing robust profile.
GridFunction tighten(const GridFunction& g, double rho, double tol, int max_iter = 10000);

struct BpbCheck {
  double lhs = 0.0;  // measured consistency integral A(1)
  double rhs = 0.0;  // e^s times the integral of e^{-sx} phi(x) over (0, 1]
  double decay_probe = 0.0;  // e^{-s x_min} A(x_min)
};
BpbCheck check_bpb(const BiddingProfile& p);

/// min over a fine grid of (0, 1] of phi(x) - max(1, s chi e^{s(x-1)}).
double check_phi_lb(double s, double chi, const std::vector<RightPiece>& phi,
                    std::size_t samples = 10000);

}  // namespace profile_lab
