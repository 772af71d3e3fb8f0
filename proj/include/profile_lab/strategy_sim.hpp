#pragma once

// Monte Carlo estimation of profile-driven strategy costs, truncation of a
// strategy into an algorithm, and conversion of finite randomized bidding
// strategies into step profiles.

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "profile_lab/bidding_profile.hpp"
#include "profile_lab/excursion_profile.hpp"

namespace profile_lab {

/// Uniform draw in (0, 1] determined by (seed, index) alone.
double counter_uniform(std::uint64_t seed, std::uint64_t index);

struct SimReport {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  double target = 0.0;
  double bias_bound = 0.0;  // expected mass of the bids skipped below the start index
};

/// One-line JSON with the keys mean, stderr, n, seed, target.
std::string to_json_line(const SimReport& r);

struct SimOptions {
  unsigned threads = 0;  // 0: hardware concurrency
  std::uint64_t chunk = 1 << 16;
};

SimReport simulate_bidding(const BiddingProfile& p, double target, std::uint64_t n,
                           std::uint64_t seed, const SimOptions& opts = {});

SimReport simulate_linear(const ExcursionProfile& p, double target, std::uint64_t n,
                          std::uint64_t seed, const SimOptions& opts = {});

/// Total bid of the strategy {G(k + u)} for one value of the shared offset u.
double bidding_run_cost(const BiddingProfile& p, double target, double u);

/// The strategy {G(k + u)} with every bid below `threshold` discarded.
class TruncatedAlgorithm {
 public:
  TruncatedAlgorithm(const BiddingProfile& p, double threshold, double u);

  long first_index() const { return first_; }
  double bid(std::size_t j) const;
  std::vector<double> take(std::size_t count) const;
  /// Sum of bids up to and including the first one >= target.
  double cost(double target) const;
  /// Sum of the strategy's bids that precede the first kept index.
  double discarded_prefix() const;

 private:
  const BiddingProfile* profile_;
  double threshold_;
  double u_;
  long first_;
};

TruncatedAlgorithm truncate_to_algorithm(const BiddingProfile& p, double threshold, double u);

struct Outcome {
  double probability = 0.0;
  std::vector<double> bids;
};

/// A finite distribution over finite increasing bid sequences.
class DiscreteStrategy {
 public:
  explicit DiscreteStrategy(std::vector<Outcome> outcomes);

  /// Lines "p b1 b2 ... bk"; blank lines and lines starting with '#' are skipped.
  static DiscreteStrategy parse(std::istream& in);
  static DiscreteStrategy load(const std::string& path);

  const std::vector<Outcome>& outcomes() const { return outcomes_; }
  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }

  /// Expected sum of bids up to the first bid >= target (ties succeed).
  double expected_cost(double target) const;

 private:
  std::vector<Outcome> outcomes_;
  double t_min_ = 0.0;
  double t_max_ = 0.0;
};

/// Bid value -> total probability of the outcomes containing it.
std::map<double, double> aggregate_measure(const DiscreteStrategy& ds);

/// Left-continuous step function; steps are contiguous and ordered.
class StepProfile {
 public:
  struct Step {
    double start;
    double end;
    double value;  // on (start, end]
  };

  explicit StepProfile(std::vector<Step> steps);

  const std::vector<Step>& steps() const { return steps_; }
  /// 0 below the support, +inf above it.
  double eval(double x) const;
  double integral_upto(double x) const;
  double tau(double level) const;
  double expected_cost(double target) const;
  /// Lebesgue measure of {x : lo <= G(x) <= hi}.
  double preimage_length(double lo, double hi) const;

 private:
  std::vector<Step> steps_;
};

/// Quantile construction: masses at or above `anchor` stack upward from 0,
/// masses below it stack downward from 0 in decreasing order of value.
StepProfile inverse_profile(const std::map<double, double>& mu, double anchor = 1.0);

struct DominanceReport {
  std::vector<double> targets;
  std::vector<double> strategy_costs;
  std::vector<double> profile_costs;
  double max_violation = 0.0;  // max of profile cost - strategy cost
  int strict_improvements = 0;
  bool holds = false;  // max_violation <= 1e-10
};

DominanceReport cost_dominance_check(const DiscreteStrategy& ds, const std::vector<double>& targets);

}  // namespace profile_lab
