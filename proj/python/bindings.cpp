#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "profile_lab/analysis.hpp"
#include "profile_lab/bidding_profile.hpp"
#include "profile_lab/cli.hpp"
#include "profile_lab/excursion_profile.hpp"
#include "profile_lab/serialization.hpp"
#include "profile_lab/strategy_sim.hpp"

namespace py = pybind11;
using namespace profile_lab;

namespace {

BuildOptions make_options(double x_min, double h, double tol, int max_iter) {
  BuildOptions o;
  o.x_min = x_min;
  o.h = h;
  o.tol = tol;
  o.max_iter = max_iter;
  return o;
}

SimOptions sim_options(unsigned threads) {
  SimOptions o;
  o.threads = threads;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bidding and linear-search profiles: trade-off curves, construction, verification, simulation";

  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

  py::enum_<Problem>(m, "Problem")
      .value("Bidding", Problem::Bidding)
      .value("LinearSearchExcursion", Problem::LinearSearchExcursion)
      .value("LinearSearchStrategy", Problem::LinearSearchStrategy);

  py::class_<TradeoffPoint>(m, "TradeoffPoint")
      .def_readonly("s", &TradeoffPoint::s)
      .def_readonly("rho", &TradeoffPoint::rho)
      .def_readonly("chi", &TradeoffPoint::chi)
      .def_readonly("problem", &TradeoffPoint::problem)
      .def("__repr__", [](const TradeoffPoint& p) {
        std::ostringstream out;
        out << "TradeoffPoint(s=" << p.s << ", rho=" << p.rho << ", chi=" << p.chi << ")";
        return out.str();
      });

  py::class_<LinearTradeoff>(m, "LinearTradeoff")
      .def_readonly("excursion", &LinearTradeoff::excursion)
      .def_readonly("strategy", &LinearTradeoff::strategy)
      .def_readonly("K", &LinearTradeoff::K);

  py::class_<LowerBoundPoint>(m, "LowerBoundPoint")
      .def_readonly("t", &LowerBoundPoint::t)
      .def_readonly("chi_ls", &LowerBoundPoint::chi_ls)
      .def_readonly("rho_ls", &LowerBoundPoint::rho_ls)
      .def_readonly("rho_ls_raw", &LowerBoundPoint::rho_ls_raw);

  m.def("lambert_w0", &lambert_w0, py::arg("z"));
  m.def("solve_xi_bidding", &solve_xi_bidding, py::arg("s"));
  m.def("bidding_tradeoff", &bidding_tradeoff, py::arg("s"));
  m.def("bidding_decay_rate", &bidding_decay_rate, py::arg("s"));
  m.def("bidding_lb_chi", &bidding_lb_chi, py::arg("s"));
  m.def("s_star", &s_star);
  m.def("rho_ls_star", &rho_ls_star);
  m.def("solve_sK", &solve_sK);
  m.def("solve_K", &solve_K, py::arg("s"));
  m.def("linear_tradeoff", &linear_tradeoff, py::arg("s"));
  m.def("linear_lower_bound", &linear_lower_bound, py::arg("t"));
  m.def("invert_linear_upper", &invert_linear_upper, py::arg("chi_ls"));

  py::class_<BiddingProfile>(m, "BiddingProfile")
      .def_readonly("s", &BiddingProfile::s)
      .def_readonly("rho", &BiddingProfile::rho)
      .def_readonly("chi", &BiddingProfile::chi)
      .def_readonly("iterations", &BiddingProfile::iterations)
      .def_readonly("last_delta", &BiddingProfile::last_delta)
      .def_property_readonly("x_min", [](const BiddingProfile& p) { return p.g.grid().x_min(); })
      .def_property_readonly("h", [](const BiddingProfile& p) { return p.g.grid().h; })
      .def_property_readonly("left_values", [](const BiddingProfile& p) { return p.g.left_values(); })
      .def("eval", &BiddingProfile::eval, py::arg("x"))
      .def("integral_upto", &BiddingProfile::integral_upto, py::arg("x"))
      .def("tau", &BiddingProfile::tau, py::arg("level"))
      .def("expected_cost", &BiddingProfile::expected_cost, py::arg("target"))
      .def("to_json", [](const BiddingProfile& p) { return to_json(p); });

  py::class_<ExcursionProfile>(m, "ExcursionProfile")
      .def_readonly("s", &ExcursionProfile::s)
      .def_readonly("rho", &ExcursionProfile::rho)
      .def_readonly("chi", &ExcursionProfile::chi)
      .def_readonly("K", &ExcursionProfile::K)
      .def_readonly("iterations", &ExcursionProfile::iterations)
      .def_readonly("last_delta", &ExcursionProfile::last_delta)
      .def("eval_plus", &ExcursionProfile::eval_plus, py::arg("x"))
      .def("eval_minus", &ExcursionProfile::eval_minus, py::arg("x"))
      .def("c_plus", &ExcursionProfile::c_plus, py::arg("x"))
      .def("c_minus", &ExcursionProfile::c_minus, py::arg("x"))
      .def("strategy_cost", &ExcursionProfile::strategy_cost, py::arg("target"))
      .def("to_json", [](const ExcursionProfile& p) { return to_json(p); });

  m.def(
      "build_profile",
      [](double s, double x_min, double h, double tol, int max_iter) {
        py::gil_scoped_release release;
        return build_profile(s, make_options(x_min, h, tol, max_iter));
      },
      py::arg("s"), py::arg("x_min") = -30.0, py::arg("h") = 1e-3, py::arg("tol") = 1e-12,
      py::arg("max_iter") = 10000);

  m.def(
      "build_excursion_profile",
      [](double s, double x_min, double h, double tol, int max_iter) {
        py::gil_scoped_release release;
        return build_excursion_profile(s, make_options(x_min, h, tol, max_iter));
      },
      py::arg("s"), py::arg("x_min") = -30.0, py::arg("h") = 1e-3, py::arg("tol") = 1e-12,
      py::arg("max_iter") = 10000);

  py::class_<VerificationReport>(m, "VerificationReport")
      .def_readonly("max_robustness_residual", &VerificationReport::max_robustness_residual)
      .def_readonly("max_robustness_ratio", &VerificationReport::max_robustness_ratio)
      .def_readonly("tightness_residual", &VerificationReport::tightness_residual)
      .def_readonly("consistency_gap", &VerificationReport::consistency_gap)
      .def_readonly("offset_ok", &VerificationReport::offset_ok)
      .def_readonly("monotone_ok", &VerificationReport::monotone_ok)
      .def_readonly("tail_ok", &VerificationReport::tail_ok)
      .def_readonly("tail_bound", &VerificationReport::tail_bound)
      .def_readonly("passed", &VerificationReport::passed)
      .def("to_json", [](const VerificationReport& r) { return to_json(r); });

  py::class_<ExcursionReport>(m, "ExcursionReport")
      .def_readonly("max_robustness_ratio_plus", &ExcursionReport::max_robustness_ratio_plus)
      .def_readonly("max_robustness_ratio_minus", &ExcursionReport::max_robustness_ratio_minus)
      .def_readonly("consistency_gap", &ExcursionReport::consistency_gap)
      .def_readonly("boundary_gap", &ExcursionReport::boundary_gap)
      .def_readonly("offset_ok", &ExcursionReport::offset_ok)
      .def_readonly("monotone_ok", &ExcursionReport::monotone_ok)
      .def_readonly("tail_ok", &ExcursionReport::tail_ok)
      .def_readonly("passed", &ExcursionReport::passed)
      .def("to_json", [](const ExcursionReport& r) { return to_json(r); });

  m.def("verify", &verify, py::arg("profile"), py::arg("tol_rel") = 1e-4, py::arg("tol_abs") = 1e-6);
  m.def("verify_excursion", &verify_excursion, py::arg("profile"), py::arg("tol_rel") = 1e-4,
        py::arg("tol_abs") = 1e-6);

  py::class_<SimReport>(m, "SimReport")
      .def_readonly("mean", &SimReport::mean)
      .def_readonly("stderr", &SimReport::std_error)
      .def_readonly("n", &SimReport::n)
      .def_readonly("seed", &SimReport::seed)
      .def_readonly("target", &SimReport::target)
      .def_readonly("bias_bound", &SimReport::bias_bound)
      .def("to_json", &to_json_line);

  m.def(
      "simulate_bidding",
      [](const BiddingProfile& p, double target, std::uint64_t n, std::uint64_t seed, unsigned threads) {
        py::gil_scoped_release release;
        return simulate_bidding(p, target, n, seed, sim_options(threads));
      },
      py::arg("profile"), py::arg("target"), py::arg("n"), py::arg("seed"), py::arg("threads") = 0);

  m.def(
      "simulate_linear",
      [](const ExcursionProfile& p, double target, std::uint64_t n, std::uint64_t seed, unsigned threads) {
        py::gil_scoped_release release;
        return simulate_linear(p, target, n, seed, sim_options(threads));
      },
      py::arg("profile"), py::arg("target"), py::arg("n"), py::arg("seed"), py::arg("threads") = 0);

  py::class_<Outcome>(m, "Outcome")
      .def(py::init<>())
      .def(py::init([](double p, std::vector<double> bids) { return Outcome{p, std::move(bids)}; }),
           py::arg("probability"), py::arg("bids"))
      .def_readwrite("probability", &Outcome::probability)
      .def_readwrite("bids", &Outcome::bids);

  py::class_<DiscreteStrategy>(m, "DiscreteStrategy")
      .def(py::init<std::vector<Outcome>>(), py::arg("outcomes"))
      .def_static("load", &DiscreteStrategy::load, py::arg("path"))
      .def_property_readonly("outcomes", &DiscreteStrategy::outcomes)
      .def_property_readonly("t_min", &DiscreteStrategy::t_min)
      .def_property_readonly("t_max", &DiscreteStrategy::t_max)
      .def("expected_cost", &DiscreteStrategy::expected_cost, py::arg("target"));

  py::class_<DominanceReport>(m, "DominanceReport")
      .def_readonly("targets", &DominanceReport::targets)
      .def_readonly("strategy_costs", &DominanceReport::strategy_costs)
      .def_readonly("profile_costs", &DominanceReport::profile_costs)
      .def_readonly("max_violation", &DominanceReport::max_violation)
      .def_readonly("strict_improvements", &DominanceReport::strict_improvements)
      .def_readonly("holds", &DominanceReport::holds);

  m.def("aggregate_measure", &aggregate_measure, py::arg("strategy"));
  m.def("cost_dominance_check", &cost_dominance_check, py::arg("strategy"), py::arg("targets"));

  m.def(
      "load_profile",
      [](const std::string& path) -> py::object {
        auto p = load_profile(path);
        if (auto* b = std::get_if<BiddingProfile>(&p)) return py::cast(std::move(*b));
        return py::cast(std::get<ExcursionProfile>(std::move(p)));
      },
      py::arg("path"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command line tool in process; returns (exit code, stdout, stderr).");
}
