#pragma once

// Randomized and structural checks shared by the unit tests and the
// acceptance runner.

#include <cstdint>
#include <string>
#include <vector>

#include "profile_lab/strategy_sim.hpp"
#include "support/oracles.hpp"

namespace props {

struct Outcome {
  bool passed = false;
  double worst = 0.0;  // largest violation observed (<= 0 when passing)
  int cases = 0;
  std::string detail;
};

/// apply_F(A) <= apply_F(B) for random non-decreasing A <= B.
Outcome bidding_order_preservation(int cases, std::uint64_t seed);

/// Same for the coupled excursion operator, componentwise.
Outcome pair_order_preservation(int cases, std::uint64_t seed);

/// Iterates from zero are non-decreasing and stay below K e^{cx}, c = (s+1)/2.
Outcome bidding_bounded_iteration(double s, int sweeps);

/// Iterates from zero are non-decreasing and stay below the dominating pair
/// L e^{2cx}, L eta e^{2cx}, c = (s + s_*)/2.
Outcome pair_bounded_iteration(double s, int sweeps);

struct Refinement {
  std::vector<double> steps;
  std::vector<double> errors;
  double order = 0.0;  // least-squares slope of log error against log h
};

/// Consistency estimate A(1) against the closed-form chi at successively halved steps.
Refinement bidding_refinement(double s, double x_min, const std::vector<double>& steps);

/// Random finite strategy whose outcomes all end at the same top bid.
profile_lab::DiscreteStrategy random_strategy(oracle::Gen& gen);

/// Targets in (0, t_max], including some exact bid values.
std::vector<double> random_targets(oracle::Gen& gen, const profile_lab::DiscreteStrategy& ds,
                                   int count);

struct DominanceSummary {
  int fixtures = 0;
  int checks = 0;
  int violations = 0;
  double worst = 0.0;
  int strict = 0;
};

DominanceSummary dominance_sweep(int fixtures, int targets_each, std::uint64_t seed);

}  // namespace props
