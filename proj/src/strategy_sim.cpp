#include "profile_lab/strategy_sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace profile_lab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kStartFraction = 1e-9;
constexpr long kMaxSteps = 10'000'000;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

struct Moments {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(n + o.n);
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.n) / total;
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
    n += o.n;
  }
};

// Samples are split into fixed chunks, each reduced on its own and merged in
// chunk order, so the result does not depend on the thread count.
template <typename SampleFn>
Moments run_samples(std::uint64_t n, std::uint64_t seed, const SimOptions& opts, SampleFn&& fn) {
  const std::uint64_t chunk = std::max<std::uint64_t>(1, opts.chunk);
  const std::uint64_t chunks = (n + chunk - 1) / chunk;
  std::vector<Moments> partial(chunks);
  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(1, chunks)));

  auto worker = [&](unsigned t) {
    for (std::uint64_t c = t; c < chunks; c += threads) {
      Moments m;
      const std::uint64_t end = std::min(n, (c + 1) * chunk);
      for (std::uint64_t i = c * chunk; i < end; ++i) m.add(fn(counter_uniform(seed, i)));
      partial[c] = m;
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  Moments total;
  for (const auto& m : partial) total.merge(m);
  return total;
}

SimReport finish(const Moments& m, std::uint64_t seed, double target, double bias) {
  SimReport r;
  r.mean = m.mean;
  r.n = m.n;
  r.seed = seed;
  r.target = target;
  r.bias_bound = bias;
  r.std_error = m.n > 1 ? std::sqrt(m.m2 / static_cast<double>(m.n - 1)) /
                              std::sqrt(static_cast<double>(m.n))
                        : 0.0;
  return r;
}

// Largest integer k at or below `hint` whose lower mass falls under the threshold.
template <typename MassFn>
long start_index(MassFn&& mass_upto, double threshold, double hint) {
  long k = static_cast<long>(std::floor(std::min(hint, 0.0)));
  while (mass_upto(static_cast<double>(k)) > threshold) --k;
  return k;
}

void check_sim_args(double target, std::uint64_t n) {
  if (!(target > 0.0) || !std::isfinite(target)) {
    throw std::domain_error("simulation target must be positive and finite");
  }
  if (n == 0) throw std::domain_error("sample count must be at least 1");
}

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t bits = splitmix64(seed ^ splitmix64(index));
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

std::string to_json_line(const SimReport& r) {
  nlohmann::ordered_json j;
  j["mean"] = r.mean;
  j["stderr"] = r.std_error;
  j["n"] = r.n;
  j["seed"] = r.seed;
  j["target"] = r.target;
  return j.dump();
}

SimReport simulate_bidding(const BiddingProfile& p, double target, std::uint64_t n,
                           std::uint64_t seed, const SimOptions& opts) {
  check_sim_args(target, n);
  const double threshold = kStartFraction * p.rho * target;
  const long k0 = start_index([&](double x) { return p.integral_upto(x); }, threshold,
                              p.tau(target));
  auto sample = [&](double u) {
    double total = 0.0;
    for (long k = k0; k < k0 + kMaxSteps; ++k) {
      const double bid = p.eval(static_cast<double>(k) + u);
      total += bid;
      if (bid >= target) break;
    }
    return total;
  };
  const Moments m = run_samples(n, seed, opts, sample);
  return finish(m, seed, target, p.integral_upto(static_cast<double>(k0)));
}

SimReport simulate_linear(const ExcursionProfile& p, double target, std::uint64_t n,
                          std::uint64_t seed, const SimOptions& opts) {
  if (target == 0.0) throw std::domain_error("simulation target must be non-zero");
  const double distance = std::abs(target);
  check_sim_args(distance, n);
  const bool right = target > 0.0;
  const double threshold = kStartFraction * p.rho * distance;
  const double hint = right ? p.tau_plus(distance) : p.tau_minus(distance);
  const long k0 = start_index([&](double x) { return p.c_plus(x); }, threshold, hint);
  auto sample = [&](double u) {
    double total = 0.0;
    for (long k = k0; k < k0 + kMaxSteps; ++k) {
      const double x = static_cast<double>(k) + u;
      const double out_right = p.eval_plus(x);
      if (right && out_right >= distance) return total + distance;
      total += 2.0 * out_right;
      const double out_left = p.eval_minus(x);
      if (!right && out_left >= distance) return total + distance;
      total += 2.0 * out_left;
    }
    return total;
  };
  const Moments m = run_samples(n, seed, opts, sample);
  return finish(m, seed, target, 2.0 * p.c_plus(static_cast<double>(k0)));
}

TruncatedAlgorithm::TruncatedAlgorithm(const BiddingProfile& p, double threshold, double u)
    : profile_(&p), threshold_(threshold), u_(u) {
  if (!(threshold > 0.0)) throw std::domain_error("truncation threshold must be positive");
  if (!(u > 0.0 && u <= 1.0)) throw std::domain_error("offset u must lie in (0, 1]");
  const double t = p.tau(threshold);
  if (!std::isfinite(t)) throw std::domain_error("profile never reaches the threshold");
  long k = static_cast<long>(std::ceil(t - u));
  while (p.eval(static_cast<double>(k) + u) < threshold) ++k;
  while (p.eval(static_cast<double>(k - 1) + u) >= threshold) --k;
  first_ = k;
}

double TruncatedAlgorithm::bid(std::size_t j) const {
  return profile_->eval(static_cast<double>(first_ + static_cast<long>(j)) + u_);
}

std::vector<double> TruncatedAlgorithm::take(std::size_t count) const {
  std::vector<double> out(count);
  for (std::size_t j = 0; j < count; ++j) out[j] = bid(j);
  return out;
}

double TruncatedAlgorithm::cost(double target) const {
  double total = 0.0;
  for (std::size_t j = 0; j < static_cast<std::size_t>(kMaxSteps); ++j) {
    const double b = bid(j);
    total += b;
    if (b >= target) break;
  }
  return total;
}

double TruncatedAlgorithm::discarded_prefix() const {
  double total = 0.0;
  for (long k = first_ - 1; k > first_ - kMaxSteps; --k) {
    const double b = profile_->eval(static_cast<double>(k) + u_);
    if (b <= 1e-17 * total || b == 0.0) break;
    total += b;
  }
  return total;
}

TruncatedAlgorithm truncate_to_algorithm(const BiddingProfile& p, double threshold, double u) {
  return TruncatedAlgorithm(p, threshold, u);
}

double bidding_run_cost(const BiddingProfile& p, double target, double u) {
  const TruncatedAlgorithm from_target(p, target, u);
  return from_target.bid(0) + from_target.discarded_prefix();
}

DiscreteStrategy::DiscreteStrategy(std::vector<Outcome> outcomes) : outcomes_(std::move(outcomes)) {
  if (outcomes_.empty()) throw std::invalid_argument("strategy has no outcomes");
  double total = 0.0;
  t_min_ = kInf;
  t_max_ = 0.0;
  for (const auto& o : outcomes_) {
    if (!(o.probability > 0.0)) throw std::invalid_argument("outcome probability must be positive");
    if (o.bids.empty()) throw std::invalid_argument("outcome has no bids");
    total += o.probability;
    for (std::size_t i = 0; i < o.bids.size(); ++i) {
      if (!(o.bids[i] > 0.0) || !std::isfinite(o.bids[i])) {
        throw std::invalid_argument("bids must be positive and finite");
      }
      if (i > 0 && !(o.bids[i] > o.bids[i - 1])) {
        throw std::invalid_argument("bids must be strictly increasing");
      }
    }
    t_min_ = std::min(t_min_, o.bids.front());
    t_max_ = std::max(t_max_, o.bids.back());
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "outcome probabilities sum to " << total << ", not 1";
    throw std::invalid_argument(msg.str());
  }
}

DiscreteStrategy DiscreteStrategy::parse(std::istream& in) {
  std::vector<Outcome> outcomes;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    Outcome o;
    if (!(fields >> o.probability)) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": missing probability");
    }
    double b = 0.0;
    while (fields >> b) o.bids.push_back(b);
    if (!fields.eof()) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": malformed bid");
    }
    outcomes.push_back(std::move(o));
  }
  return DiscreteStrategy(std::move(outcomes));
}

DiscreteStrategy DiscreteStrategy::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return parse(in);
}

double DiscreteStrategy::expected_cost(double target) const {
  double total = 0.0;
  for (const auto& o : outcomes_) {
    double spent = 0.0;
    bool reached = false;
    for (double b : o.bids) {
      spent += b;
      if (b >= target) {
        reached = true;
        break;
      }
    }
    if (!reached) throw std::domain_error("an outcome never reaches the target");
    total += o.probability * spent;
  }
  return total;
}

std::map<double, double> aggregate_measure(const DiscreteStrategy& ds) {
  std::map<double, double> mu;
  for (const auto& o : ds.outcomes()) {
    for (double b : o.bids) mu[b] += o.probability;
  }
  return mu;
}

StepProfile::StepProfile(std::vector<Step> steps) : steps_(std::move(steps)) {}

double StepProfile::eval(double x) const {
  if (steps_.empty() || x <= steps_.front().start) return 0.0;
  if (x > steps_.back().end) return kInf;
  const auto it = std::lower_bound(steps_.begin(), steps_.end(), x,
                                   [](const Step& st, double v) { return st.end < v; });
  return it->value;
}

double StepProfile::integral_upto(double x) const {
  if (steps_.empty()) return 0.0;
  if (x > steps_.back().end) return kInf;
  double total = 0.0;
  for (const auto& st : steps_) {
    if (st.start >= x) break;
    total += st.value * (std::min(st.end, x) - st.start);
  }
  return total;
}

double StepProfile::tau(double level) const {
  if (steps_.empty()) return kInf;
  for (const auto& st : steps_) {
    if (st.value >= level) return st.start;
  }
  return steps_.back().end;
}

double StepProfile::expected_cost(double target) const {
  return integral_upto(tau(target) + 1.0);
}

double StepProfile::preimage_length(double lo, double hi) const {
  double total = 0.0;
  for (const auto& st : steps_) {
    if (st.value >= lo && st.value <= hi) total += st.end - st.start;
  }
  return total;
}

StepProfile inverse_profile(const std::map<double, double>& mu, double anchor) {
  std::vector<StepProfile::Step> below;
  double depth = 0.0;
  for (auto it = mu.rbegin(); it != mu.rend(); ++it) {
    if (it->first >= anchor || it->second <= 0.0) continue;
    below.push_back({-(depth + it->second), -depth, it->first});
    depth += it->second;
  }
  std::vector<StepProfile::Step> steps(below.rbegin(), below.rend());
  double height = 0.0;
  for (const auto& [value, mass] : mu) {
    if (value < anchor || mass <= 0.0) continue;
    steps.push_back({height, height + mass, value});
    height += mass;
  }
  return StepProfile(std::move(steps));
}

DominanceReport cost_dominance_check(const DiscreteStrategy& ds,
                                     const std::vector<double>& targets) {
  const StepProfile profile = inverse_profile(aggregate_measure(ds));
  DominanceReport r;
  r.targets = targets;
  r.max_violation = -kInf;
  for (double t : targets) {
    if (!(t > 0.0 && t <= ds.t_max())) {
      throw std::domain_error("dominance targets must lie in (0, t_max]");
    }
    const double direct = ds.expected_cost(t);
    const double via_profile = profile.expected_cost(t);
    r.strategy_costs.push_back(direct);
    r.profile_costs.push_back(via_profile);
    r.max_violation = std::max(r.max_violation, via_profile - direct);
    if (via_profile < direct - 1e-10) ++r.strict_improvements;
  }
  r.holds = r.max_violation <= 1e-10;
  return r;
}

}  // namespace profile_lab
