// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "profile_lab/analysis.hpp"
#include "profile_lab/bidding_profile.hpp"
#include "profile_lab/excursion_profile.hpp"
#include "profile_lab/strategy_sim.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"

using namespace profile_lab;

namespace {

struct Verdict {
  bool passed = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename... Args>
std::string fmt(const char* pattern, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

Verdict endpoint_exactness() {
  const auto start = Clock::now();
  BuildOptions opts;
  const auto p = build_profile(1.0, opts);
  double sup = 0.0;
  const auto& grid = p.g.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    sup = std::max(sup, std::abs(p.g.left_values()[i] - std::exp(grid.x(i))));
  }
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const double T = 1e-3 * std::pow(1e6, k / 49.0);
    worst = std::max(worst, std::abs(p.expected_cost(T) / T - oracle::kE) / oracle::kE);
  }
  const double secs = seconds_since(start);
  return {sup <= 1e-8 && worst <= 1e-9 && secs < 5.0,
          fmt("sup|G - e^x| = %.2e, max rel |cost/T - e| = %.2e over 50 targets, %.2f s", sup, worst, secs)};
}

Verdict bidding_curve() {
  const auto start = Clock::now();
  int passed = 0;
  double worst_ratio = 0.0;
  double worst_chi = 0.0;
  std::string failures;
  for (int k = 1; k <= 10; ++k) {
    const double s = k / 10.0;
    BuildOptions opts;
    opts.x_min = -30.0 / std::max(s, 0.5);
    opts.h = 1e-3;
    const auto p = build_profile(s, opts);
    const double chi = oracle::bidding_chi(s);
    const auto r = verify(p, 1e-4, 1e-4 * chi);
    const double chi_err = std::abs(p.integral_upto(1.0) - chi) / chi;
    worst_ratio = std::max(worst_ratio, r.max_robustness_ratio);
    worst_chi = std::max(worst_chi, chi_err);
    if (r.passed && chi_err <= 1e-4) {
      ++passed;
    } else {
      failures += fmt(" s=%.1f", s);
    }
  }
  const double secs = seconds_since(start);
  return {passed == 10 && secs < 120.0,
          fmt("%d/10 verified, max robustness ratio %.2e, max rel chi error %.2e, %.1f s", passed,
              worst_ratio, worst_chi, secs) + (failures.empty() ? "" : "; failed:" + failures)};
}

Verdict golden_roots() {
  const double xi = solve_xi_bidding(0.8);
  const double sk = solve_sK();
  const auto end = linear_tradeoff(s_star());
  const bool ok = std::abs(xi - 1.25577) <= 1e-4 && std::abs(sk - 0.5878) <= 1e-4 &&
                  std::abs(end.strategy.rho - 4.59112) <= 1e-4 &&
                  std::abs(end.strategy.chi - 4.59112) <= 1e-4;
  return {ok, fmt("xi(0.8) = %.7f, s_K = %.6f, endpoint = (%.6f, %.6f)", xi, sk, end.strategy.rho,
                  end.strategy.chi)};
}

Verdict optimum_equality() {
  double worst_eq = 0.0;
  double worst_phi = 0.0;
  for (double s : {0.3, 0.5, 0.8}) {
    const auto p = build_profile(s);
    const auto c = check_bpb(p);
    worst_eq = std::max(worst_eq, std::abs(c.lhs - c.rhs));
    worst_phi = std::max(worst_phi, -check_phi_lb(s, p.chi, p.phi()));
  }
  return {worst_eq <= 1e-6 && worst_phi <= 1e-10,
          fmt("max |lhs - rhs| = %.2e, max phi violation = %.2e", worst_eq, std::max(worst_phi, 0.0))};
}

std::vector<double> linear_set() { return {0.2, solve_sK(), 0.9, s_star()}; }

Verdict linear_verification() {
  const auto start = Clock::now();
  int passed = 0;
  double worst_ratio = 0.0;
  double worst_boundary = 0.0;
  for (double s : linear_set()) {
    const auto p = build_excursion_profile(s);
    const auto r = verify_excursion(p, 1e-4, 1e-5);
    worst_ratio = std::max({worst_ratio, r.max_robustness_ratio_plus, r.max_robustness_ratio_minus});
    worst_boundary = std::max(worst_boundary, std::abs(r.boundary_gap));
    if (r.passed && std::abs(r.boundary_gap) <= 1e-5) ++passed;
  }
  const double secs = seconds_since(start);
  return {passed == 4 && secs < 120.0,
          fmt("%d/4 verified, max robustness ratio %.2e, max |boundary gap| %.2e, %.1f s", passed,
              worst_ratio, worst_boundary, secs)};
}

Verdict chi_identity() {
  double worst = 0.0;
  double worst_oracle = 0.0;
  for (double s : linear_set()) {
    const auto p = build_excursion_profile(s);
    const double identity = chi_from_psi(s, p.psi());
    const auto psi = p.psi();
    const double direct =
        oracle::simpson([&](double x) { return (std::exp(2.0 * s * (1.0 - x)) - 1.0) * pieces_value(psi, x); },
                        1e-12, 1.0, 20000) /
        (1.0 + std::exp(s));
    worst = std::max(worst, std::abs(p.c_plus(0.0) - identity));
    worst_oracle = std::max(worst_oracle, std::abs(identity - direct));
  }
  return {worst <= 1e-5 && worst_oracle <= 1e-7,
          fmt("max |C+(0) - identity| = %.2e (identity vs quadrature %.2e)", worst, worst_oracle)};
}

Verdict monte_carlo() {
  struct Pair {
    bool bidding;
    double s;
    double target;
  };
  const double ss = s_star();
  const double sk = solve_sK();
  const std::vector<Pair> pairs{{true, 1.0, 2.0},  {true, 0.5, 1.0},  {true, 0.8, 2.5},
                                {true, 0.3, 0.05}, {true, 0.9, 7.0},  {true, 0.5, 100.0},
                                {false, ss, 3.0},  {false, 0.4, 1.0}, {false, 0.4, -0.7},
                                {false, 0.8, 2.0}, {false, 0.2, -5.0}, {false, sk, 0.3}};
  int inside = 0;
  double slowest = 0.0;
  double worst_z = 0.0;
  std::uint64_t seed = 1000;
  for (const auto& pr : pairs) {
    double expected = 0.0;
    SimReport r;
    if (pr.bidding) {
      const auto p = build_profile(pr.s);
      expected = p.expected_cost(pr.target);
      const auto t0 = Clock::now();
      r = simulate_bidding(p, pr.target, 1000000, seed++);
      slowest = std::max(slowest, seconds_since(t0));
    } else {
      const auto p = build_excursion_profile(pr.s);
      expected = p.strategy_cost(pr.target);
      const auto t0 = Clock::now();
      r = simulate_linear(p, pr.target, 1000000, seed++);
      slowest = std::max(slowest, seconds_since(t0));
    }
    const double z = std::abs(r.mean - expected) / r.std_error;
    worst_z = std::max(worst_z, z);
    if (z <= 4.0) ++inside;
  }
  return {inside >= 11 && slowest < 60.0,
          fmt("%d/12 within 4 stderr (max |z| = %.2f), slowest pair %.2f s", inside, worst_z, slowest)};
}

Verdict dominance() {
  const auto start = Clock::now();
  const auto sum = props::dominance_sweep(100, 20, 8);
  const double secs = seconds_since(start);
  return {sum.violations == 0 && sum.checks == 2000 && secs < 30.0,
          fmt("%d fixtures x 20 targets, %d violations, max excess %.2e, %d strict improvements, %.2f s",
              sum.fixtures, sum.violations, sum.worst, sum.strict, secs)};
}

Verdict curve_dominance() {
  int ok = 0;
  double min_gap = INFINITY;
  for (int k = 1; k <= 50; ++k) {
    const auto lb = linear_lower_bound(k / 50.0);
    const auto up = linear_tradeoff(invert_linear_upper(lb.chi_ls));
    const double gap = up.strategy.rho - lb.rho_ls;
    min_gap = std::min(min_gap, gap);
    if (gap > 0.0) ++ok;
  }
  return {ok == 50, fmt("%d/50 strictly above, min gap %.4f", ok, min_gap)};
}

Verdict asymptotics() {
  const auto up = linear_tradeoff(0.01);
  const double upper = up.strategy.rho - 2.0 / (up.strategy.chi - 1.0);
  const auto lb = linear_lower_bound(0.01);
  const double lower = lb.rho_ls - 2.0 / (lb.chi_ls - 1.0);
  return {std::abs(upper - 7.0 / 3.0) <= 0.05 && std::abs(lower - 1.5) <= 0.05,
          fmt("upper offset %.4f (7/3), lower offset %.4f (3/2)", upper, lower)};
}

Verdict property_suite() {
  const auto ob = props::bidding_order_preservation(50, 21);
  const auto op = props::pair_order_preservation(50, 22);
  bool bounded = true;
  for (double s : {0.2, 0.5, 0.9}) bounded = bounded && props::bidding_bounded_iteration(s, 300).passed;
  for (double s : {0.2, 0.6, 1.1}) bounded = bounded && props::pair_bounded_iteration(s, 300).passed;
  const auto ref = props::bidding_refinement(0.5, -30.0, {1.0 / 25, 1.0 / 50, 1.0 / 100, 1.0 / 200});
  return {ob.passed && op.passed && bounded && ref.order >= 1.8,
          fmt("order preservation %s/%s (50 cases each), bounded iteration %s, refinement order %.2f",
              ob.passed ? "ok" : "FAIL", op.passed ? "ok" : "FAIL", bounded ? "ok" : "FAIL", ref.order)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"endpoint exactness (bidding)", endpoint_exactness},
      {"Pareto curve (bidding)", bidding_curve},
      {"golden roots", golden_roots},
      {"equality at optimum", optimum_equality},
      {"linear-search verification", linear_verification},
      {"chi identity (linear search)", chi_identity},
      {"Monte Carlo oracle", monte_carlo},
      {"dominance property", dominance},
      {"curve dominance", curve_dominance},
      {"asymptotics", asymptotics},
      {"property suite", property_suite},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.passed) ++failed;
    std::printf("%s  %2zu  %s: %s\n", v.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
