#include "profile_lab/serialization.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace profile_lab {

using nlohmann::ordered_json;

namespace {

ordered_json term_json(const ExpTerm& t) {
  return {{"coefficient", t.coefficient}, {"rate", t.rate}, {"anchor", t.anchor}};
}

ExpTerm term_from(const ordered_json& j) {
  return {j.at("coefficient").get<double>(), j.at("rate").get<double>(),
          j.at("anchor").get<double>()};
}

double end_from(const ordered_json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

ordered_json pieces_json(const std::vector<RightPiece>& pieces) {
  ordered_json arr = ordered_json::array();
  for (const auto& piece : pieces) {
    ordered_json terms = ordered_json::array();
    for (const auto& t : piece.terms) terms.push_back(term_json(t));
    ordered_json end = std::isinf(piece.end) ? ordered_json(nullptr) : ordered_json(piece.end);
    arr.push_back({{"start", piece.start}, {"end", end}, {"terms", terms}});
  }
  return arr;
}

std::vector<RightPiece> pieces_from(const ordered_json& arr) {
  std::vector<RightPiece> pieces;
  for (const auto& j : arr) {
    RightPiece piece;
    piece.start = j.at("start").get<double>();
    piece.end = end_from(j.at("end"));
    for (const auto& t : j.at("terms")) piece.terms.push_back(term_from(t));
    pieces.push_back(std::move(piece));
  }
  return pieces;
}

// Window fields shared by both parts of an excursion profile live at the top level.
void put_function(ordered_json& j, const GridFunction& g) {
  j["left_values"] = g.left_values();
  j["right_pieces"] = pieces_json(g.right_pieces());
  j["left_tail"] = term_json(g.left_tail());
}

GridFunction function_from(const ordered_json& j, const GridSpec& grid) {
  auto left = j.at("left_values").get<std::vector<double>>();
  if (left.size() != grid.size()) {
    throw FormatError("left_values has " + std::to_string(left.size()) + " entries, grid needs " +
                      std::to_string(grid.size()));
  }
  const ExpTerm tail = term_from(j.at("left_tail"));
  return GridFunction(grid, std::move(left), pieces_from(j.at("right_pieces")), tail.rate);
}

GridSpec grid_from(const ordered_json& j) {
  return GridSpec::covering(j.at("x_min").get<double>(), j.at("h").get<double>());
}

}  // namespace

std::string to_json(const BiddingProfile& p, int indent) {
  ordered_json j;
  j["problem"] = "bidding";
  j["s"] = p.s;
  j["rho"] = p.rho;
  j["chi"] = p.chi;
  j["x_min"] = p.g.x_min();
  j["h"] = p.g.h();
  j["iterations"] = p.iterations;
  put_function(j, p.g);
  return j.dump(indent);
}

std::string to_json(const ExcursionProfile& p, int indent) {
  ordered_json j;
  j["problem"] = "linsearch";
  j["s"] = p.s;
  j["rho"] = p.rho;
  j["chi"] = p.chi;
  j["K"] = p.K;
  j["M"] = p.M;
  j["x_min"] = p.plus.x_min();
  j["h"] = p.plus.h();
  j["iterations"] = p.iterations;
  ordered_json plus;
  put_function(plus, p.plus);
  ordered_json minus;
  put_function(minus, p.minus);
  j["plus"] = std::move(plus);
  j["minus"] = std::move(minus);
  return j.dump(indent);
}

AnyProfile profile_from_json(const std::string& text) {
  try {
    const auto j = ordered_json::parse(text);
    const auto problem = j.at("problem").get<std::string>();
    const GridSpec grid = grid_from(j);
    if (problem == "bidding") {
      BiddingProfile p;
      p.s = j.at("s").get<double>();
      p.rho = j.at("rho").get<double>();
      p.chi = j.at("chi").get<double>();
      p.iterations = j.value("iterations", 0);
      p.g = function_from(j, grid);
      return p;
    }
    if (problem == "linsearch") {
      ExcursionProfile p;
      p.s = j.at("s").get<double>();
      p.rho = j.at("rho").get<double>();
      p.chi = j.at("chi").get<double>();
      p.K = j.at("K").get<double>();
      p.M = j.at("M").get<double>();
      p.iterations = j.value("iterations", 0);
      p.plus = function_from(j.at("plus"), grid);
      p.minus = function_from(j.at("minus"), grid);
      return p;
    }
    throw FormatError("unknown problem '" + problem + "'");
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed profile document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invalid profile: ") + e.what());
  } catch (const std::domain_error& e) {
    throw FormatError(std::string("invalid profile grid: ") + e.what());
  }
}

void save_profile(const std::string& path, const AnyProfile& p) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << std::visit([](const auto& q) { return to_json(q); }, p) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path);
}

AnyProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return profile_from_json(buf.str());
}

std::string to_json(const VerificationReport& r, int indent) {
  ordered_json j;
  j["problem"] = "bidding";
  j["passed"] = r.passed;
  j["max_robustness_residual"] = r.max_robustness_residual;
  j["max_robustness_ratio"] = r.max_robustness_ratio;
  j["tightness_residual"] = r.tightness_residual;
  j["consistency_gap"] = r.consistency_gap;
  j["offset_ok"] = r.offset_ok;
  j["monotone_ok"] = r.monotone_ok;
  j["tail_ok"] = r.tail_ok;
  j["tail_bound"] = r.tail_bound;
  j["grid"] = {{"x_min", r.x_min}, {"h", r.h}};
  return j.dump(indent);
}

std::string to_json(const ExcursionReport& r, int indent) {
  ordered_json j;
  j["problem"] = "linsearch";
  j["passed"] = r.passed;
  j["max_robustness_ratio_plus"] = r.max_robustness_ratio_plus;
  j["max_robustness_ratio_minus"] = r.max_robustness_ratio_minus;
  j["tightness_plus"] = r.tightness_plus;
  j["tightness_minus"] = r.tightness_minus;
  j["tightness_minus_right"] = r.tightness_minus_right;
  j["consistency_gap"] = r.consistency_gap;
  j["boundary_gap"] = r.boundary_gap;
  j["offset_ok"] = r.offset_ok;
  j["monotone_ok"] = r.monotone_ok;
  j["tail_ok"] = r.tail_ok;
  j["tail_bound"] = r.tail_bound;
  j["grid"] = {{"x_min", r.x_min}, {"h", r.h}};
  return j.dump(indent);
}

}  // namespace profile_lab
