#pragma once

// Non-decreasing functions on the real line stored as a uniform grid on
// [x_min, 0], analytic exponential pieces on (0, inf), and an exponential
// tail below x_min.
//
// Between grid points the function is interpolated log-linearly, so each
// cell is an exact exponential segment and its integral is h times the
// logarithmic mean of the endpoint values. A cell whose left value is zero
// is zero on its interior.

#include <cstddef>
#include <limits>
#include <vector>

namespace profile_lab {

/// coefficient * exp(rate * (x - anchor)); rate 0 is a constant.
struct ExpTerm {
  double coefficient = 0.0;
  double rate = 0.0;
  double anchor = 0.0;

  double value(double x) const;
  /// Integral over [a, b]; b may be +inf only when rate < 0.
  double integral(double a, double b) const;
  /// This term multiplied by exp(k * x).
  ExpTerm times_exp(double k) const;
};

/// Sum of exponential terms on the half-open interval (start, end].
struct RightPiece {
  double start = 0.0;
  double end = std::numeric_limits<double>::infinity();
  std::vector<ExpTerm> terms;

  double value(double x) const;
  double integral(double a, double b) const;
  /// Value at start+.
  double initial_value() const { return value(start); }
  /// Value at end (the supremum on the piece).
  double final_value() const;
};

RightPiece constant_piece(double start, double end, double level);
RightPiece exponential_piece(double start, double end, double coefficient, double rate,
                             double anchor);

/// Uniform grid x_i = -(cells - i) * h, i = 0..cells. 1/h must be an integer.
struct GridSpec {
  double h = 1e-3;
  std::size_t cells = 0;
  std::size_t steps_per_unit = 0;

  /// Grid covering at least [x_min, 0]; x_min is pushed down to a multiple of h.
  static GridSpec covering(double x_min, double h);

  double x_min() const { return -static_cast<double>(cells) * h; }
  double x(std::size_t i) const { return -static_cast<double>(cells - i) * h; }
  std::size_t size() const { return cells + 1; }
};

/// Logarithmic mean of a and b; zero if either is zero.
double log_mean(double a, double b);

/// Integral of the log-linear interpolant over the first fraction u of a cell.
double partial_cell_integral(double a, double b, double h, double u);

/// prefix[i] = tail_mass + integral of the interpolant over [x_0, x_i].
void prefix_integrals(const std::vector<double>& values, double h, double tail_mass,
                      std::vector<double>& prefix);

/// Integrals of the right pieces over (0, j h] for j = 0..count.
std::vector<double> right_prefix(const std::vector<RightPiece>& pieces, double h,
                                 std::size_t count);

/// Integral of the pieces over (0, x], for x >= 0.
double right_integral(const std::vector<RightPiece>& pieces, double x);

/// Value of the piece containing x (pieces cover (0, inf) in order).
double pieces_value(const std::vector<RightPiece>& pieces, double x);

/// Pieces restricted to (0, upper].
std::vector<RightPiece> clip_pieces(const std::vector<RightPiece>& pieces, double upper);

class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(GridSpec grid, std::vector<double> left_values, std::vector<RightPiece> right_pieces,
               double tail_rate);

  const GridSpec& grid() const { return grid_; }
  double x_min() const { return grid_.x_min(); }
  double h() const { return grid_.h; }
  const std::vector<double>& left_values() const { return left_; }
  const std::vector<RightPiece>& right_pieces() const { return right_; }
  const ExpTerm& left_tail() const { return tail_; }

  /// Left limit at 0.
  double value_at_zero() const { return left_.back(); }
  /// Right limit at 0.
  double value_after_zero() const;
  /// Integral of the tail below x_min.
  double tail_mass() const;

  double eval(double x) const;
  /// Integral of the function over (-inf, x].
  double integral_upto(double x) const;
  /// sup { t : G(t) < level }; -inf if the set is empty, +inf if unbounded.
  double tau(double level) const;

 private:
  double right_tau(double level) const;

  GridSpec grid_;
  std::vector<double> left_;
  std::vector<RightPiece> right_;
  ExpTerm tail_;
  std::vector<double> prefix_;
  std::vector<double> right_starts_;  // cumulative right integral at each piece start
};

/// Strictly positive, non-decreasing on the window, no downward jump at 0,
/// and each right piece non-decreasing (sampled) with non-decreasing joins.
bool is_monotone(const GridFunction& g);

/// The stored values on the lowest tenth of the window stay below the
/// exponential tail continued upward from x_min (to 1e-6 relative).
bool tail_dominates(const GridFunction& g);

}  // namespace profile_lab
