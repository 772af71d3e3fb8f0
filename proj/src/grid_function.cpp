#include "profile_lab/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "profile_lab/analysis.hpp"

namespace profile_lab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// expm1(z) / z, continuous at 0.
double phi1(double z) { return z == 0.0 ? 1.0 : std::expm1(z) / z; }

// Grid position of x as (cell index, fraction). Points within 1e-9 cells of a
// node snap to it so that stored values are returned exactly.
struct CellPos {
  std::size_t index;
  double fraction;
};

CellPos locate(const GridSpec& grid, double x) {
  const double t = (x - grid.x_min()) / grid.h;
  const double nearest = std::round(t);
  if (std::abs(t - nearest) < 1e-9) {
    return {static_cast<std::size_t>(nearest), 0.0};
  }
  const double fl = std::floor(t);
  return {static_cast<std::size_t>(fl), t - fl};
}

}  // namespace

double ExpTerm::value(double x) const {
  if (coefficient == 0.0) return 0.0;
  if (rate == 0.0) return coefficient;
  return coefficient * std::exp(rate * (x - anchor));
}

double ExpTerm::integral(double a, double b) const {
  if (!(b > a) || coefficient == 0.0) return 0.0;
  if (rate == 0.0) return coefficient * (b - a);
  if (std::isinf(b)) {
    if (rate > 0.0) return std::copysign(kInf, coefficient);
    return value(a) / -rate;
  }
  if (std::isinf(a)) {
    if (rate < 0.0) return std::copysign(kInf, coefficient);
    return value(b) / rate;
  }
  return value(a) * (b - a) * phi1(rate * (b - a));
}

ExpTerm ExpTerm::times_exp(double k) const {
  return {coefficient * std::exp(k * anchor), rate + k, anchor};
}

double RightPiece::value(double x) const {
  double total = 0.0;
  for (const auto& term : terms) total += term.value(x);
  return total;
}

double RightPiece::integral(double a, double b) const {
  double total = 0.0;
  for (const auto& term : terms) total += term.integral(a, b);
  return total;
}

double RightPiece::final_value() const {
  if (std::isfinite(end)) return value(end);
  double constant = 0.0;
  for (const auto& term : terms) {
    if (term.coefficient == 0.0) continue;
    if (term.rate > 0.0) return kInf;
    if (term.rate == 0.0) constant += term.coefficient;
  }
  return constant;
}

RightPiece constant_piece(double start, double end, double level) {
  return {start, end, {ExpTerm{level, 0.0, 0.0}}};
}

RightPiece exponential_piece(double start, double end, double coefficient, double rate,
                             double anchor) {
  return {start, end, {ExpTerm{coefficient, rate, anchor}}};
}

GridSpec GridSpec::covering(double x_min, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::domain_error("grid step must be positive, got " + std::to_string(h));
  }
  if (!(x_min < 0.0) || !std::isfinite(x_min)) {
    throw std::domain_error("grid start must be negative, got " + std::to_string(x_min));
  }
  const double inv = 1.0 / h;
  const double m = std::round(inv);
  if (m < 1.0 || std::abs(inv - m) > 1e-9 * inv) {
    throw std::domain_error("1/h must be an integer, got h = " + std::to_string(h));
  }
  GridSpec g;
  g.steps_per_unit = static_cast<std::size_t>(m);
  g.h = 1.0 / m;
  g.cells = static_cast<std::size_t>(std::ceil(-x_min * m - 1e-9));
  return g;
}

double log_mean(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) return 0.0;
  return a * phi1(std::log(b / a));
}

double partial_cell_integral(double a, double b, double h, double u) {
  if (!(a > 0.0) || !(b > 0.0) || u <= 0.0) return 0.0;
  return a * h * u * phi1(u * std::log(b / a));
}

void prefix_integrals(const std::vector<double>& values, double h, double tail_mass,
                      std::vector<double>& prefix) {
  prefix.resize(values.size());
  double acc = tail_mass;
  prefix[0] = acc;
  for (std::size_t i = 1; i < values.size(); ++i) {
    acc += h * log_mean(values[i - 1], values[i]);
    prefix[i] = acc;
  }
}

double right_integral(const std::vector<RightPiece>& pieces, double x) {
  double total = 0.0;
  for (const auto& piece : pieces) {
    if (piece.start >= x) break;
    total += piece.integral(std::max(piece.start, 0.0), std::min(piece.end, x));
  }
  return total;
}

std::vector<double> right_prefix(const std::vector<RightPiece>& pieces, double h,
                                 std::size_t count) {
  std::vector<double> out(count + 1, 0.0);
  for (std::size_t j = 1; j <= count; ++j) {
    out[j] = right_integral(pieces, static_cast<double>(j) * h);
  }
  return out;
}

GridFunction::GridFunction(GridSpec grid, std::vector<double> left_values,
                           std::vector<RightPiece> right_pieces, double tail_rate)
    : grid_(grid), left_(std::move(left_values)), right_(std::move(right_pieces)) {
  if (left_.size() != grid_.size()) {
    throw std::invalid_argument("left values do not match the grid: " +
                                std::to_string(left_.size()) + " vs " +
                                std::to_string(grid_.size()));
  }
  if (right_.empty() || right_.front().start != 0.0) {
    throw std::invalid_argument("right pieces must start at 0");
  }
  if (!(tail_rate > 0.0)) {
    throw std::invalid_argument("tail rate must be positive");
  }
  tail_ = ExpTerm{left_.front(), tail_rate, grid_.x_min()};
  prefix_integrals(left_, grid_.h, tail_mass(), prefix_);
  right_starts_.reserve(right_.size());
  double acc = 0.0;
  for (const auto& piece : right_) {
    right_starts_.push_back(acc);
    acc += piece.integral(piece.start, piece.end);
  }
}

double GridFunction::value_after_zero() const { return right_.front().initial_value(); }

double GridFunction::tail_mass() const { return tail_.coefficient / tail_.rate; }

double GridFunction::eval(double x) const {
  if (x <= grid_.x_min()) return tail_.value(x);
  if (x <= 0.0) {
    const CellPos pos = locate(grid_, x);
    if (pos.index >= grid_.cells) return left_.back();
    if (pos.fraction == 0.0) return left_[pos.index];
    const double a = left_[pos.index];
    const double b = left_[pos.index + 1];
    if (!(a > 0.0)) return 0.0;
    return a * std::exp(pos.fraction * std::log(b / a));
  }
  for (const auto& piece : right_) {
    if (x <= piece.end) return piece.value(x);
  }
  return right_.back().value(x);
}

double GridFunction::integral_upto(double x) const {
  if (x <= grid_.x_min()) return tail_.integral(-kInf, x);
  if (x <= 0.0) {
    const CellPos pos = locate(grid_, x);
    if (pos.index >= grid_.cells) return prefix_.back();
    return prefix_[pos.index] +
           partial_cell_integral(left_[pos.index], left_[pos.index + 1], grid_.h, pos.fraction);
  }
  if (std::isinf(x)) return kInf;
  for (std::size_t k = 0; k < right_.size(); ++k) {
    const auto& piece = right_[k];
    if (x <= piece.end || k + 1 == right_.size()) {
      return prefix_.back() + right_starts_[k] + piece.integral(piece.start, x);
    }
  }
  return kInf;
}

double GridFunction::tau(double level) const {
  if (!(level > 0.0)) return -kInf;
  const double x0 = grid_.x_min();
  if (level <= left_.front()) {
    return x0 + std::log(level / tail_.coefficient) / tail_.rate;
  }
  if (level <= left_.back()) {
    const auto it = std::lower_bound(left_.begin(), left_.end(), level);
    const auto j = static_cast<std::size_t>(it - left_.begin());
    const double a = left_[j - 1];
    const double b = left_[j];
    if (!(a > 0.0)) return grid_.x(j);
    const double u = std::min(1.0, std::log(level / a) / std::log(b / a));
    return grid_.x(j - 1) + u * grid_.h;
  }
  return right_tau(level);
}

double GridFunction::right_tau(double level) const {
  for (const auto& piece : right_) {
    if (piece.initial_value() >= level) return piece.start;
    const double top = piece.final_value();
    if (top < level) continue;
    if (piece.terms.size() == 1 && piece.terms[0].rate > 0.0) {
      const auto& term = piece.terms[0];
      const double t = term.anchor + std::log(level / term.coefficient) / term.rate;
      return std::clamp(t, piece.start, piece.end);
    }
    double hi = piece.end;
    if (std::isinf(hi)) {
      double step = 1.0;
      hi = piece.start + step;
      while (piece.value(hi) < level) {
        step *= 2.0;
        hi = piece.start + step;
      }
    }
    return bisect([&](double t) { return piece.value(t) - level; }, piece.start, hi);
  }
  return kInf;
}

double pieces_value(const std::vector<RightPiece>& pieces, double x) {
  for (const auto& piece : pieces) {
    if (x <= piece.end) return piece.value(x);
  }
  return pieces.empty() ? 0.0 : pieces.back().value(x);
}

std::vector<RightPiece> clip_pieces(const std::vector<RightPiece>& pieces, double upper) {
  std::vector<RightPiece> out;
  for (const auto& piece : pieces) {
    if (piece.start >= upper) break;
    RightPiece clipped = piece;
    clipped.end = std::min(piece.end, upper);
    out.push_back(std::move(clipped));
  }
  return out;
}

bool is_monotone(const GridFunction& g) {
  const auto& v = g.left_values();
  if (!(v.front() > 0.0)) return false;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < v[i - 1]) return false;
  }
  const auto& pieces = g.right_pieces();
  double previous = v.back();
  for (const auto& piece : pieces) {
    const double slack = 1e-12 * std::max(1.0, std::abs(previous));
    if (piece.initial_value() < previous - slack) return false;
    const double span = std::isinf(piece.end) ? 10.0 : piece.end - piece.start;
    previous = piece.initial_value();
    constexpr int kSamples = 200;
    for (int k = 1; k <= kSamples; ++k) {
      const double x = piece.start + span * k / kSamples;
      const double val = piece.value(x);
      if (val < previous - 1e-12 * std::max(1.0, std::abs(previous))) return false;
      previous = val;
    }
  }
  return true;
}

bool tail_dominates(const GridFunction& g) {
  const auto& v = g.left_values();
  const std::size_t count = std::max<std::size_t>(1, g.grid().cells / 10);
  for (std::size_t i = 0; i <= count && i < v.size(); ++i) {
    const double bound = g.left_tail().value(g.grid().x(i));
    if (v[i] > bound * (1.0 + 1e-6)) return false;
  }
  return true;
}

}  // namespace profile_lab
