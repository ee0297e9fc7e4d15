#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "drainet/dual.hpp"
#include "drainet/estimators.hpp"
#include "drainet/metrics.hpp"
#include "drainet/reference.hpp"
#include "drainet/report_io.hpp"

namespace py = pybind11;
using namespace drainet;

namespace {

StepKind parse_kind(const std::string& kind) {
  if (kind == "l" || kind == "left") return StepKind::Left;
  if (kind == "r" || kind == "right") return StepKind::Right;
  throw std::invalid_argument("kind must be 'l' or 'r'");
}

py::dict report_to_dict(const ExperimentReport& r) {
  const OutputRow row = to_row(r);
  py::dict d;
  d["experiment"] = row.experiment;
  d["p"] = row.p;
  d["epsilon"] = row.epsilon;
  d["b"] = row.b;
  d["n"] = row.n;
  d["alpha"] = row.alpha;
  if (row.k) d["k"] = *row.k;
  if (row.delta) d["delta"] = *row.delta;
  if (row.t) d["t"] = *row.t;
  d["estimate"] = r.estimate;
  d["ci"] = r.ci_half_width;
  d["target"] = r.target;
  d["verdict"] = row.verdict;
  d["samples"] = r.samples;
  d["seed"] = r.seed;
  return d;
}

py::list reports_to_list(const std::vector<ExperimentReport>& reports) {
  py::list out;
  for (const ExperimentReport& r : reports) out.append(report_to_dict(r));
  return out;
}

py::dict pmf_to_dict(const DiscretePmf& pmf, double key_scale) {
  py::dict d;
  for (const auto& [k, w] : pmf.mass) d[py::float_(static_cast<double>(k) * key_scale)] = w;
  return d;
}

}  // namespace

PYBIND11_MODULE(drainet, m) {
  m.doc() = "Drainage network with branching: simulator and verification harness";

  py::class_<ParamSet>(m, "ParamSet")
      .def(py::init([](double p, double b, double n, double alpha, u64 seed) {
             ParamSet ps{p, b, n, alpha, seed};
             ps.validate();
             return ps;
           }),
           py::arg("p") = 0.5, py::arg("b") = 1.0, py::arg("n") = 50.0, py::arg("alpha") = 1.0,
           py::arg("seed") = 1)
      .def_readonly("p", &ParamSet::p)
      .def_readonly("b", &ParamSet::b)
      .def_readonly("n", &ParamSet::n)
      .def_readonly("alpha", &ParamSet::alpha)
      .def_readonly("seed", &ParamSet::seed)
      .def("epsilon", &ParamSet::epsilon);

  m.def(
      "cell_state",
      [](double p, double epsilon, u64 seed, i64 x, i64 t) {
        HashedEnvironment env(EnvParams{p, epsilon, seed, 0});
        const CellState s = env.cell_state(Cell{x, t});
        return py::make_tuple(s.open, s.theta);
      },
      py::arg("p"), py::arg("epsilon"), py::arg("seed"), py::arg("x"), py::arg("t"),
      "(open, theta) of one lattice cell");

  m.def(
      "gamma",
      [](double p, double epsilon, u64 seed, i64 x, i64 t, const std::string& kind) {
        HashedEnvironment env(EnvParams{p, epsilon, seed, 0});
        const Cell c = gamma(env, Cell{x, t}, parse_kind(kind));
        return py::make_tuple(c.x, c.t);
      },
      py::arg("p"), py::arg("epsilon"), py::arg("seed"), py::arg("x"), py::arg("t"),
      py::arg("kind"));

  m.def(
      "walk",
      [](double p, double epsilon, u64 seed, i64 x, i64 t, const std::string& kind, i64 steps,
         bool force_start_open) {
        HashedEnvironment env(EnvParams{p, epsilon, seed, 0});
        OverlayEnvironment overlay(env);
        if (force_start_open) overlay.force_open(Cell{x, t});
        const Selector sel =
            parse_kind(kind) == StepKind::Left ? Selector::always_left() : Selector::always_right();
        return walk(overlay, Cell{x, t}, sel, steps).positions;
      },
      py::arg("p"), py::arg("epsilon"), py::arg("seed"), py::arg("x"), py::arg("t"),
      py::arg("kind"), py::arg("steps"), py::arg("force_start_open") = false,
      "x positions of an l- or r-path at consecutive times");

  m.def(
      "coalescence_time",
      [](double p, double epsilon, u64 seed, i64 ux, i64 vx, const std::string& kind, i64 t_max) {
        HashedEnvironment env(EnvParams{p, epsilon, seed, 0});
        OverlayEnvironment overlay(env);
        overlay.force_open(Cell{ux, 0}).force_open(Cell{vx, 0});
        const auto tau = coalescence_time(overlay, Cell{ux, 0}, Cell{vx, 0}, parse_kind(kind), t_max);
        return tau ? py::cast(*tau) : py::none().cast<py::object>();
      },
      py::arg("p"), py::arg("epsilon"), py::arg("seed"), py::arg("ux"), py::arg("vx"),
      py::arg("kind"), py::arg("t_max"));

  m.def(
      "dual_step",
      [](double p, double epsilon, u64 seed, i64 x2, i64 t, const std::string& kind) {
        HashedEnvironment env(EnvParams{p, epsilon, seed, 0});
        const DualVertex v = dual_step(env, DualVertex{x2, t}, parse_kind(kind));
        return py::make_tuple(v.x2, v.t);
      },
      py::arg("p"), py::arg("epsilon"), py::arg("seed"), py::arg("x2"), py::arg("t"),
      py::arg("kind"), "one backward dual step; positions are doubled integers");

  m.def(
      "kernel_pv", [](double p) { return pmf_to_dict(kernel_pv(p), 1.0); }, py::arg("p"));

  m.def(
      "dual_kernel",
      [](double p, double epsilon, bool at_integer, const std::string& kind) {
        return pmf_to_dict(dual_kernel(p, epsilon, at_integer, parse_kind(kind)), 0.5);
      },
      py::arg("p"), py::arg("epsilon"), py::arg("at_integer"), py::arg("kind") = "l");

  m.def(
      "theory_constants",
      [](double p, double b, double n) {
        const TheoryConstants c = TheoryConstants::from_pbn(p, b, n);
        py::dict d;
        d["p"] = c.p;
        d["b"] = c.b;
        d["n"] = c.n;
        d["epsilon"] = c.epsilon;
        d["b_p"] = c.b_p;
        d["lambda_p2"] = c.lambda_p2;
        d["tie_prob"] = c.tie_prob;
        d["branch_prob"] = c.branch_prob;
        return d;
      },
      py::arg("p"), py::arg("b"), py::arg("n"));

  m.def("survival_probability", &survival_probability, py::arg("delta"), py::arg("t"),
        py::arg("lambda2"));

  m.def(
      "verify_duality",
      [](double p, double epsilon, u64 seed, i64 size) {
        HashedEnvironment env(EnvParams{p, epsilon, seed, 0});
        const DualityReport r = verify_duality(env, Window{0, size, 0, size});
        py::dict d;
        d["crossings"] = r.crossings;
        d["dnb_branches"] = r.dnb_branches;
        d["dual_branches"] = r.dual_branches;
        return d;
      },
      py::arg("p"), py::arg("epsilon"), py::arg("seed"), py::arg("size") = 100);

  m.def(
      "estimate_drift",
      [](const ParamSet& ps, const std::string& kind, i64 steps, i64 replicas) {
        return report_to_dict(estimate_drift(ps, parse_kind(kind), steps, replicas));
      },
      py::arg("params"), py::arg("kind"), py::arg("steps") = 1000, py::arg("replicas") = 1000);

  m.def(
      "estimate_variance",
      [](const ParamSet& ps, i64 steps, i64 replicas) {
        return report_to_dict(estimate_variance(ps, steps, replicas));
      },
      py::arg("params"), py::arg("steps") = 1000, py::arg("replicas") = 1000);

  m.def(
      "branch_rate",
      [](const ParamSet& ps, i64 steps, i64 replicas) {
        return report_to_dict(branch_rate_experiment(ps, steps, replicas));
      },
      py::arg("params"), py::arg("steps") = 100, py::arg("replicas") = 1000);

  m.def(
      "kernel_check",
      [](const ParamSet& ps, i64 mc_steps) { return reports_to_list(kernel_check(ps, mc_steps)); },
      py::arg("params"), py::arg("mc_steps") = 200000);
}
