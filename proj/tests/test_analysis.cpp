#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "profile_lab/analysis.hpp"
#include "support/oracles.hpp"

using namespace profile_lab;
using doctest::Approx;

TEST_CASE("lambert_w0 examples and residual") {
  CHECK(lambert_w0(0.0) == 0.0);
  CHECK(lambert_w0(oracle::kE) == Approx(1.0).epsilon(1e-15));
  CHECK(lambert_w0(std::exp(-1.0)) == Approx(0.278464542761074).epsilon(1e-14));
  CHECK(lambert_w0(-std::exp(-1.0)) == Approx(-1.0).epsilon(1e-7));
  for (double z : {1e-8, 0.01, 0.3, 1.0, 5.0, 100.0, 1e6, -0.2, -0.35}) {
    const double w = lambert_w0(z);
    CHECK(w * std::exp(w) == Approx(z).epsilon(1e-14));
    if (z > 0.0) CHECK(w == Approx(oracle::lambert_w0(z)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(lambert_w0(-0.4), std::domain_error);
}

TEST_CASE("bisect handles both orientations and rejects bad brackets") {
  const double r = bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0);
  CHECK(r == Approx(std::sqrt(2.0)).epsilon(1e-15));
  const double q = bisect([](double x) { return 1.0 - x; }, 0.0, 3.0);
  CHECK(q == Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(bisect([](double x) { return x * x + 1.0; }, -1.0, 1.0), ConvergenceError);
}

TEST_CASE("solve_xi_bidding examples") {
  CHECK(solve_xi_bidding(std::log(2.0)) == Approx(1.0).epsilon(1e-12));
  CHECK(solve_xi_bidding(1.0) == Approx(oracle::kE).epsilon(1e-7));
  CHECK(std::abs(solve_xi_bidding(0.8) - 1.2557715) <= 1e-4);
  for (double s = 0.7; s < 1.0; s += 0.02) {
    const double xi = solve_xi_bidding(s);
    CHECK(std::abs(xi * (2.0 - std::log(xi)) - std::exp(s)) <= 1e-12);
    CHECK(xi == Approx(oracle::xi_bidding(s)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(solve_xi_bidding(0.5), std::domain_error);
  CHECK_THROWS_AS(solve_xi_bidding(1.1), std::domain_error);
}

TEST_CASE("bidding_tradeoff examples") {
  const auto one = bidding_tradeoff(1.0);
  CHECK(one.rho == Approx(oracle::kE).epsilon(1e-15));
  CHECK(one.chi == Approx(oracle::kE).epsilon(1e-7));
  const auto half = bidding_tradeoff(0.5);
  CHECK(half.rho == Approx(2.0 * std::exp(0.5)).epsilon(1e-15));
  CHECK(half.chi == Approx(2.0 * (std::exp(0.5) - 1.0)).epsilon(1e-15));
  CHECK(half.rho == Approx(3.29744).epsilon(1e-5));
  CHECK(half.chi == Approx(1.29744).epsilon(1e-5));
  const double ln2 = std::log(2.0);
  const auto mid = bidding_tradeoff(ln2);
  CHECK(mid.rho == Approx(2.0 / ln2).epsilon(1e-15));
  CHECK(std::abs(std::expm1(ln2) / ln2 - solve_xi_bidding(ln2) / ln2) <= 1e-12);
  CHECK(mid.chi == Approx(1.44270).epsilon(1e-5));
  CHECK_THROWS_AS(bidding_tradeoff(0.0), std::domain_error);
  CHECK_THROWS_AS(bidding_tradeoff(1.01), std::domain_error);
}

TEST_CASE("bidding curve is monotone with rho >= chi >= 1") {
  double prev_rho = INFINITY;
  double prev_chi = 0.0;
  for (int i = 1; i <= 400; ++i) {
    const double s = i / 400.0;
    const auto p = bidding_tradeoff(s);
    CHECK(p.rho < prev_rho);
    CHECK(p.chi > prev_chi);
    CHECK(p.rho >= p.chi);
    CHECK(p.chi >= 1.0);
    CHECK(p.chi == Approx(oracle::bidding_chi(s)).epsilon(1e-12));
    prev_rho = p.rho;
    prev_chi = p.chi;
  }
}

TEST_CASE("s chi > 1 exactly when s > ln 2, with plateau end in [0, 1)") {
  for (int i = 1; i <= 50; ++i) {
    const double s = 0.02 * i;
    const double chi = bidding_tradeoff(s).chi;
    if (std::abs(s - std::log(2.0)) < 1e-12) continue;
    CHECK((s > std::log(2.0)) == (s * chi > 1.0));
    if (s * chi > 1.0) {
      const double knee = 1.0 - std::log(s * chi) / s;
      CHECK(knee >= 0.0);
      CHECK(knee < 1.0);
    }
  }
}

TEST_CASE("bidding_lb_chi equals the trade-off consistency") {
  CHECK(bidding_lb_chi(1.0) == Approx(oracle::kE).epsilon(1e-7));
  CHECK(bidding_lb_chi(0.5) == Approx(1.29744).epsilon(1e-5));
  for (int i = 1; i <= 50; ++i) {
    const double s = i / 50.0;
    CHECK(bidding_lb_chi(s) == bidding_tradeoff(s).chi);
  }
}

TEST_CASE("bidding decay rate solves the characteristic equation") {
  CHECK(bidding_decay_rate(1.0) == Approx(1.0).epsilon(1e-12));
  for (double s : {0.1, 0.3, 0.5, 0.8, 0.95}) {
    const double lam = bidding_decay_rate(s);
    CHECK(lam > 1.0);
    CHECK(std::exp(lam) / lam == Approx(std::exp(s) / s).epsilon(1e-12));
  }
}

TEST_CASE("s_star and the classical competitive ratio") {
  const double w = oracle::lambert_w0(std::exp(-1.0));
  CHECK(s_star() == Approx(1.0 + w).epsilon(1e-14));
  CHECK(s_star() == Approx(1.278464).epsilon(1e-6));
  const double rho = (1.0 + std::exp(s_star())) / (2.0 * s_star());
  CHECK(rho == Approx(1.0 / (2.0 * w)).epsilon(1e-12));
  CHECK(rho == Approx(1.79557).epsilon(1e-5));
  CHECK(std::abs(1.0 + 2.0 * rho - 4.59112) <= 1e-4);
  CHECK(rho_ls_star() == Approx(1.0 + 1.0 / w).epsilon(1e-14));
}

TEST_CASE("solve_sK examples") {
  const double sk = solve_sK();
  CHECK(std::abs(sk - 0.5878) <= 1e-4);
  const auto lhs = [](double s) {
    return std::exp(s) * (std::exp(2.0 * s) - 1.0 + 2.0 * s * std::exp(s)) -
           std::pow(1.0 + std::exp(s), 2.0);
  };
  CHECK(std::abs(lhs(sk)) <= 1e-12);
  CHECK(sk == Approx(oracle::secant(lhs, 0.5, 0.6)).epsilon(1e-14));
  CHECK(std::abs(k_closed_form(sk) - 1.0) <= 1e-10);
}

TEST_CASE("solve_K examples and monotonicity") {
  const double sk = solve_sK();
  CHECK(std::abs(solve_K(sk) - 1.0) <= 1e-10);
  // The root branch evaluated at s_K, by an independent secant solve.
  const double root_branch =
      oracle::secant([&](double xi) { return k_branch_residual(sk, xi); }, 0.9, 1.1);
  CHECK(std::abs(root_branch - 1.0) <= 1e-10);
  const double k01 = solve_K(0.1);
  CHECK(k01 > 0.09);
  CHECK(k01 < 0.13);

  const double ss = s_star();
  const double boundary = 2.0 * std::exp(ss) * (1.0 + (1.0 - ss) * std::exp(ss));
  CHECK(std::abs(boundary) <= 1e-12);
  CHECK(std::abs(k_branch_residual(ss, std::exp(2.0 * ss)) - boundary) <= 1e-9);
  CHECK(solve_K(ss) == Approx(std::exp(2.0 * ss)).epsilon(1e-6));

  for (double s : {0.65, 0.8, 1.0, 1.2}) {
    const double K = solve_K(s);
    CHECK(K >= 1.0);
    CHECK(K <= std::exp(2.0 * s));
    CHECK(std::abs(k_branch_residual(s, K)) <= 1e-12 * std::exp(4.0 * s));
  }

  double prev = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double s = sk * i / 200.0;
    const double K = k_closed_form(s);
    CHECK(K > prev);
    prev = K;
  }
  prev = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double s = ss * i / 200.0;
    const double K = solve_K(s);
    CHECK(K > prev);
    prev = K;
  }
  CHECK_THROWS_AS(solve_K(0.0), std::domain_error);
  CHECK_THROWS_AS(solve_K(1.3), std::domain_error);
}

TEST_CASE("linear_tradeoff examples and identities") {
  const auto end = linear_tradeoff(s_star());
  CHECK(std::abs(end.strategy.rho - 4.59112) <= 1e-4);
  CHECK(std::abs(end.strategy.chi - 4.59112) <= 1e-4);
  CHECK(end.strategy.chi == Approx(end.strategy.rho).epsilon(1e-9));

  const double sk = solve_sK();
  const double es = std::exp(sk);
  const double first = (std::expm1(2.0 * sk) - 2.0 * sk) / (2.0 * sk * (1.0 + es));
  const double K = 1.0;
  const double second =
      (std::exp(2.0 * sk) + 1.0 + (1.0 + K) * std::log(K) - 2.0 * K - 2.0 * sk) / (2.0 * sk * (1.0 + es));
  CHECK(std::abs(first - second) <= 1e-9);
  CHECK(std::abs(linear_tradeoff(sk).excursion.chi - first) <= 1e-9);

  for (double s : {0.05, 0.2, 0.4, sk}) {
    const auto t = linear_tradeoff(s);
    CHECK(t.excursion.chi == Approx(t.excursion.rho * t.K * std::exp(-s) - 1.0).epsilon(1e-10));
  }
  const double s03 = 0.3;
  CHECK(linear_tradeoff(s03).excursion.chi ==
        Approx((std::exp(0.6) - 1.0 - 0.6) / (0.6 * (1.0 + std::exp(0.3)))).epsilon(1e-14));

  double prev_rho = INFINITY;
  double prev_chi = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double s = s_star() * i / 200.0;
    const auto t = linear_tradeoff(s);
    CHECK(t.strategy.rho >= t.strategy.chi - 1e-9);
    CHECK(t.strategy.chi >= 1.0);
    CHECK(t.excursion.rho < prev_rho);
    CHECK(t.excursion.chi > prev_chi);
    prev_rho = t.excursion.rho;
    prev_chi = t.excursion.chi;
  }
}

TEST_CASE("linear_lower_bound examples") {
  const auto one = linear_lower_bound(1.0);
  CHECK(one.chi_ls == Approx(4.0).epsilon(1e-15));
  CHECK(one.rho_ls_raw == Approx(3.0).epsilon(1e-15));
  CHECK(one.rho_ls == Approx(4.59112).epsilon(1e-5));
  const auto fifth = linear_lower_bound(0.2);
  const double cubic = -0.008 + 0.6 + 4.0;
  CHECK(fifth.chi_ls == Approx(1.0 + 2.0 * 0.2 * 2.2 * 2.2 / cubic).epsilon(1e-14));
  CHECK(fifth.chi_ls == Approx(1.42161).epsilon(1e-5));
  CHECK(fifth.rho_ls == Approx(6.4007).epsilon(1e-5));
  CHECK(fifth.rho_ls == fifth.rho_ls_raw);
  for (double t = 0.01; t <= 1.0; t += 0.01) {
    const auto p = linear_lower_bound(t);
    CHECK(p.chi_ls > 1.0);
    CHECK(p.chi_ls <= 4.0 + 1e-12);
    CHECK(p.rho_ls >= rho_ls_star());
  }
  const auto tiny = linear_lower_bound(1e-4);
  CHECK(std::abs(tiny.rho_ls - 2.0 / (tiny.chi_ls - 1.0) - 1.5) <= 1e-3);
  CHECK_THROWS_AS(linear_lower_bound(0.0), std::domain_error);
  CHECK_THROWS_AS(linear_lower_bound(1.1), std::domain_error);
}

TEST_CASE("upper curve dominates the lower bound at matched consistency") {
  for (int k = 1; k <= 100; ++k) {
    const auto lb = linear_lower_bound(k / 100.0);
    const double s = invert_linear_upper(lb.chi_ls);
    const auto up = linear_tradeoff(s);
    CHECK(up.strategy.chi == Approx(lb.chi_ls).epsilon(1e-10));
    CHECK(up.strategy.rho >= lb.rho_ls);
  }
  CHECK_THROWS_AS(invert_linear_upper(1.0), std::domain_error);
  CHECK_THROWS_AS(invert_linear_upper(5.0), std::domain_error);
}

TEST_CASE("excursion decay rate solves its characteristic equation") {
  const double ss = s_star();
  CHECK(excursion_decay_rate(ss) == Approx(ss).epsilon(1e-9));
  for (double s : {0.1, 0.4, 0.9, 1.2}) {
    const double lam = excursion_decay_rate(s);
    CHECK(lam >= ss);
    CHECK((1.0 + std::exp(lam)) / (2.0 * lam) ==
          Approx((1.0 + std::exp(s)) / (2.0 * s)).epsilon(1e-12));
  }
}
