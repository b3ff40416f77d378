#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sparsepde/asymptotics.hpp"
#include "sparsepde/commands.hpp"
#include "sparsepde/numerics.hpp"
#include "sparsepde/priors.hpp"
#include "sparsepde/risk.hpp"
#include "sparsepde/scan.hpp"
#include "sparsepde/selftest.hpp"

namespace py = pybind11;
using namespace sparsepde;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

EstimatorKind kind_of(const std::string& name, const ModelConfig& cfg, std::optional<double> slab_l) {
  if (name == "ss" && !slab_l) slab_l = 5.0 * cfg.lambda;
  return parse_estimator(name, slab_l);
}

py::dict breakdown_dict(const RiskBreakdown& b) {
  py::dict d;
  d["theta"] = b.theta;
  d["quad_term"] = b.quad_term;
  d["e_log_N"] = b.e_log_N;
  d["e_log_D"] = b.e_log_D;
  d["rho"] = b.rho;
  d["quad_err"] = b.quad_err;
  return d;
}

py::dict cell_dict(const CellResult& c) {
  py::dict d;
  d["max_rho"] = c.max_rho;
  d["ratio"] = c.ratio;
  d["argmax"] = c.argmax;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Predictive-density risk for sparse normal means";

  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.attr("DEFAULT_QUAD_ORDER") = kDefaultQuadOrder;
  m.attr("DEFAULT_SCAN_POINTS") = kDefaultScanPoints;
  m.attr("CRITICAL_RATIO") = kCriticalRatio;

  py::class_<ModelConfig>(m, "ModelConfig")
      .def_readonly("eta", &ModelConfig::eta)
      .def_readonly("r", &ModelConfig::r)
      .def_readonly("v", &ModelConfig::v)
      .def_readonly("lam", &ModelConfig::lambda)
      .def_readonly("zeta", &ModelConfig::zeta)
      .def("__repr__", [](const ModelConfig& c) {
        std::ostringstream os;
        os << "ModelConfig(eta=" << c.eta << ", r=" << c.r << ", v=" << c.v << ", lam=" << c.lambda << ")";
        return os.str();
      });
  m.def("make_config", &make_config, py::arg("eta"), py::arg("r"));

  py::class_<BiGridSpec>(m, "BiGridSpec")
      .def_readonly("b", &BiGridSpec::b)
      .def_readonly("K", &BiGridSpec::K)
      .def_readonly("c_eta", &BiGridSpec::c_eta)
      .def("alpha", &BiGridSpec::alpha, py::arg("j"))
      .def("beta", &BiGridSpec::beta, py::arg("j"))
      .def("alpha_dot", &BiGridSpec::alpha_dot, py::arg("j"));

  py::class_<SparsePrior>(m, "SparsePrior")
      .def_readonly("weight_at_zero", &SparsePrior::weight_at_zero)
      .def_property_readonly("atoms",
                             [](const SparsePrior& p) {
                               std::vector<std::pair<double, double>> out;
                               for (const auto& a : p.atoms) out.emplace_back(a.mu, a.mass);
                               return out;
                             })
      .def_property_readonly("slab",
                             [](const SparsePrior& p) -> std::optional<std::pair<double, double>> {
                               if (!p.slab) return std::nullopt;
                               return std::make_pair(p.slab->half_width, p.slab->total_mass);
                             })
      .def("total_mass", &SparsePrior::total_mass);

  m.def("b_of_r", &b_of_r, py::arg("r"));
  m.def("K_of_b", &K_of_b, py::arg("b"));
  m.def("grid_prior", &grid_prior, py::arg("cfg"), py::arg("theta_max"), py::arg("mass_tol") = kDefaultMassTol);
  m.def(
      "bigrid_prior",
      [](const ModelConfig& cfg, double theta_max, double mass_tol) {
        BiGridPrior p = bigrid_prior(cfg, theta_max, mass_tol);
        return py::make_tuple(p.prior, p.spec);
      },
      py::arg("cfg"), py::arg("theta_max"), py::arg("mass_tol") = kDefaultMassTol,
      "Returns (prior, spec).");
  m.def("spike_slab_prior", &spike_slab_prior, py::arg("eta"), py::arg("l"));
  m.def("point_prior", &point_prior);
  m.def(
      "prior_json",
      [](const SparsePrior& p, std::optional<BiGridSpec> spec) { return prior_json(p, spec); },
      py::arg("prior"), py::arg("spec") = std::nullopt);

  m.def(
      "log_N",
      [](const SparsePrior& p, const ModelConfig& cfg, double theta, double variance, double z) {
        return log_N(p, cfg, theta, variance, z);
      },
      py::arg("prior"), py::arg("cfg"), py::arg("theta"), py::arg("variance"), py::arg("z"));
  m.def(
      "e_log_N",
      [](const SparsePrior& p, const ModelConfig& cfg, double theta, double variance, int quad_order) {
        const Expectation e = e_log_N(p, cfg, theta, variance, make_quadrature(quad_order));
        return py::make_tuple(e.value, e.err_estimate);
      },
      py::arg("prior"), py::arg("cfg"), py::arg("theta"), py::arg("variance"),
      py::arg("quad_order") = kDefaultQuadOrder, "Returns (value, doubling error estimate).");
  m.def("log_mean_N", &log_mean_N, py::arg("prior"), py::arg("cfg"), py::arg("theta"), py::arg("variance"));
  m.def(
      "mc_e_log_N",
      [](const SparsePrior& p, const ModelConfig& cfg, double theta, double variance, std::int64_t n,
         std::uint64_t seed) {
        const MonteCarloEstimate e = mc_oracle_e_log_N(p, cfg, theta, variance, n, seed);
        return py::make_tuple(e.mean, e.std_error);
      },
      py::arg("prior"), py::arg("cfg"), py::arg("theta"), py::arg("variance"),
      py::arg("n_samples") = kDefaultMcSamples, py::arg("seed") = 42, "Returns (mean, standard error).");

  m.def(
      "rho_plugin",
      [](double eta, double r, py::array_t<double> theta) {
        const ModelConfig cfg = make_config(eta, r);
        return py::vectorize([&cfg](double t) { return rho_plugin(cfg, t); })(theta);
      },
      py::arg("eta"), py::arg("r"), py::arg("theta"));

  m.def(
      "risk",
      [](const std::string& estimator, double eta, double r, double theta, std::optional<double> slab_l,
         int quad_order) {
        const ModelConfig cfg = make_config(eta, r);
        return breakdown_dict(risk(kind_of(estimator, cfg, slab_l), cfg, theta, make_quadrature(quad_order)));
      },
      py::arg("estimator"), py::arg("eta"), py::arg("r"), py::arg("theta"), py::arg("slab_l") = std::nullopt,
      py::arg("quad_order") = kDefaultQuadOrder);

  m.def(
      "risk_curve",
      [](const std::string& estimator, double eta, double r, std::optional<double> theta_max, int points,
         std::optional<double> slab_l, int quad_order) {
        const ModelConfig cfg = make_config(eta, r);
        const RiskCurve c = risk_curve(kind_of(estimator, cfg, slab_l), cfg, theta_max.value_or(5.0 * cfg.lambda),
                                       points, make_quadrature(quad_order));
        py::dict d;
        d["theta"] = to_array(c.thetas);
        d["rho"] = to_array(c.rhos);
        d["max_rho"] = c.max_rho;
        d["argmax_theta"] = c.argmax_theta;
        d["benchmark"] = c.benchmark;
        d["ratio"] = c.ratio;
        return d;
      },
      py::arg("estimator"), py::arg("eta"), py::arg("r"), py::arg("theta_max") = std::nullopt,
      py::arg("points") = kDefaultScanPoints, py::arg("slab_l") = std::nullopt,
      py::arg("quad_order") = kDefaultQuadOrder);

  m.def(
      "bayes_risk",
      [](const SparsePrior& p, const ModelConfig& cfg, int quad_order) {
        return bayes_risk(p, cfg, make_quadrature(quad_order));
      },
      py::arg("prior"), py::arg("cfg"), py::arg("quad_order") = kDefaultQuadOrder);

  m.def(
      "predictive_density",
      [](const SparsePrior& p, const ModelConfig& cfg, double x, py::array_t<double> y) {
        return py::vectorize([&](double yy) { return predictive_density(p, cfg, x, yy); })(y);
      },
      py::arg("prior"), py::arg("cfg"), py::arg("x"), py::arg("y"));

  m.def(
      "table1_row",
      [](double eta, double r, int points, int quad_order) {
        const TableRow row = table1_row(eta, r, make_quadrature(quad_order), points);
        py::dict d;
        d["eta"] = row.eta;
        d["r"] = row.r;
        d["benchmark"] = row.benchmark;
        d["plugin"] = cell_dict(row.plugin);
        d["bigrid"] = cell_dict(row.bigrid);
        d["ss"] = cell_dict(row.ss);
        d["grid"] = cell_dict(row.grid);
        return d;
      },
      py::arg("eta"), py::arg("r"), py::arg("points") = kDefaultScanPoints,
      py::arg("quad_order") = kDefaultQuadOrder);

  m.def(
      "benchmark", [](double eta, double r) { return benchmark_univariate(make_config(eta, r)); }, py::arg("eta"),
      py::arg("r"));
  m.def(
      "h_r",
      [](double r) {
        const PhaseConstant h = h_r(r);
        return py::make_tuple(h.h, h.h_plus);
      },
      py::arg("r"), "Returns (h, max(h, 0)).");

  m.def(
      "sigma_surface",
      [](const std::string& estimator, double eta, double r, int omega_steps, std::optional<int> l_max) {
        const ModelConfig cfg = make_config(eta, r);
        BiGridSpec spec;
        if (estimator == "grid") {
          spec = grid_spec(cfg);
        } else if (estimator == "bigrid") {
          spec = bigrid_spec(cfg);
        } else {
          throw std::invalid_argument("sigma_surface: estimator must be grid or bigrid");
        }
        const auto surface = sigma_surface(cfg, spec, l_max.value_or(default_sigma_l_max(cfg, spec)), omega_steps);
        std::vector<double> l, omega, theta, sigma;
        for (const auto& s : surface) {
          l.push_back(s.l);
          omega.push_back(s.omega);
          theta.push_back(s.theta);
          sigma.push_back(s.sigma);
        }
        const SigmaPoint best = sigma_max(surface);
        py::dict d;
        d["l"] = to_array(l);
        d["omega"] = to_array(omega);
        d["theta"] = to_array(theta);
        d["sigma"] = to_array(sigma);
        d["max_sigma"] = best.sigma;
        d["argmax_theta"] = best.theta;
        d["b"] = spec.b;
        d["K"] = spec.K;
        return d;
      },
      py::arg("estimator"), py::arg("eta"), py::arg("r"), py::arg("omega_steps") = 512,
      py::arg("l_max") = std::nullopt);

  m.def(
      "gap_argmin",
      [](double theta, double eta, double r, double b, int j_max) {
        const ModelConfig cfg = make_config(eta, r);
        return gap_argmin(theta, cfg, make_spec(cfg, b), j_max);
      },
      py::arg("theta"), py::arg("eta"), py::arg("r"), py::arg("b"), py::arg("j_max"));

  m.def(
      "selftest",
      [](std::uint64_t seed, int quad_order, std::int64_t mc_samples) {
        std::vector<CheckResult> results;
        {
          py::gil_scoped_release release;
          results = run_selftest({quad_order, seed, mc_samples});
        }
        py::list out;
        for (const auto& c : results) out.append(py::make_tuple(c.name, c.passed, c.detail));
        return out;
      },
      py::arg("seed") = 42, py::arg("quad_order") = kDefaultQuadOrder, py::arg("mc_samples") = kDefaultMcSamples,
      "Returns a list of (name, passed, detail).");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs a CLI command in-process. Returns (exit_code, stdout, stderr).");
}
