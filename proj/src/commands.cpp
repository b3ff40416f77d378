#include "sparsepde/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <locale>
#include <sstream>

#include "sparsepde/format.hpp"
#include "sparsepde/numerics.hpp"
#include "sparsepde/selftest.hpp"

namespace sparsepde {

namespace {

using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string estimator;
  double eta = 0.0;
  double r = 0.0;
  double slab_l = 0.0;
  double theta_max = 0.0;
  double x = 0.0;
  int points = kDefaultScanPoints;
  int quad_order = kDefaultQuadOrder;
  int omega_steps = 512;
  int l_max = 0;
  std::string format;  // empty: the command's own default
  std::string out_path;
  std::uint64_t seed = 42;
  long long mc_samples = kDefaultMcSamples;
  std::vector<double> etas = kTableEtas;
  std::vector<double> rs = kTableRatios;

  CLI::Option* slab_l_opt = nullptr;
  CLI::Option* theta_max_opt = nullptr;
  CLI::Option* points_opt = nullptr;
  CLI::Option* l_max_opt = nullptr;
};

std::string csv_num(double x) { return format_double(x); }

Json json_num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

// Converts precondition failures raised while setting up a command into
// usage errors, so they exit 2 before any computation starts.
template <class F>
auto validated(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

ModelConfig config_of(const Options& o) {
  return validated([&] { return make_config(o.eta, o.r); });
}

EstimatorKind kind_of(const Options& o, const ModelConfig& cfg) {
  return validated([&] {
    std::optional<double> l;
    if (o.estimator == "ss") l = o.slab_l_opt && o.slab_l_opt->count() ? o.slab_l : 5.0 * cfg.lambda;
    return parse_estimator(o.estimator, l);
  });
}

double theta_max_of(const Options& o, const ModelConfig& cfg) {
  if (o.theta_max_opt && o.theta_max_opt->count()) {
    if (!(o.theta_max > 0.0) || !std::isfinite(o.theta_max)) throw UsageError("--theta-max must be positive");
    return o.theta_max;
  }
  return 5.0 * cfg.lambda;
}

void cmd_risk_curve(const Options& o, std::ostream& os) {
  const ModelConfig cfg = config_of(o);
  const EstimatorKind kind = kind_of(o, cfg);
  const double tm = theta_max_of(o, cfg);
  const QuadratureRule rule = make_quadrature(o.quad_order);
  validated([&] { return Estimator(kind, cfg, tm); });
  const RiskCurve c = risk_curve(kind, cfg, tm, o.points, rule);
  if (o.format == "json") {
    os << risk_curve_json(c) << '\n';
  } else {
    write_risk_curve_csv(c, os);
  }
}

void cmd_max_risk(const Options& o, std::ostream& os) {
  const ModelConfig cfg = config_of(o);
  const EstimatorKind kind = kind_of(o, cfg);
  const double tm = theta_max_of(o, cfg);
  const QuadratureRule rule = make_quadrature(o.quad_order);
  validated([&] { return Estimator(kind, cfg, tm); });
  const RiskCurve c = risk_curve(kind, cfg, tm, o.points, rule);
  if (o.format == "csv") {
    write_max_risk_csv(c, o.quad_order, o.points, os);
  } else {
    os << max_risk_json(c, o.quad_order, o.points) << '\n';
  }
}

void cmd_table1(const Options& o, std::ostream& os) {
  for (double eta : o.etas) {
    for (double r : o.rs) {
      const ModelConfig cfg = validated([&] { return make_config(eta, r); });
      validated([&] { return grid_prior(cfg, 5.0 * cfg.lambda); });
    }
  }
  const QuadratureRule rule = make_quadrature(o.quad_order);
  const std::vector<TableRow> rows = table1(o.etas, o.rs, rule, o.points);
  if (o.format == "json") {
    os << table_json(rows) << '\n';
  } else {
    write_table_csv(rows, os);
  }
}

void cmd_sigma(const Options& o, std::ostream& os) {
  const ModelConfig cfg = config_of(o);
  BiGridSpec spec;
  if (o.estimator == "grid") {
    spec = grid_spec(cfg);
  } else if (o.estimator == "bigrid") {
    spec = bigrid_spec(cfg);
  } else {
    throw UsageError("sigma requires --estimator grid or bigrid");
  }
  const int l_max = o.l_max_opt && o.l_max_opt->count() ? o.l_max : default_sigma_l_max(cfg, spec);
  const auto surface = validated([&] { return sigma_surface(cfg, spec, l_max, o.omega_steps); });
  write_sigma_csv(surface, cfg, spec, os);
}

void cmd_density(const Options& o, std::ostream& os) {
  const ModelConfig cfg = config_of(o);
  const EstimatorKind kind = kind_of(o, cfg);
  if (!kind.is_bayes()) throw UsageError("density requires a Bayes estimator (grid, bigrid, ss or point)");
  if (!std::isfinite(o.x)) throw UsageError("--x must be finite");
  const double span = std::abs(o.x) + 10.0 * cfg.lambda + 14.0;
  const Estimator est = validated([&] { return Estimator(kind, cfg, span); });
  const int points = o.points_opt && o.points_opt->count() ? o.points : 4096;
  write_density_csv(density_grid(*est.prior(), cfg, o.x, points), os);
}

void cmd_prior_dump(const Options& o, std::ostream& os) {
  const ModelConfig cfg = config_of(o);
  const EstimatorKind kind = kind_of(o, cfg);
  if (!kind.is_bayes()) throw UsageError("the plug-in estimator has no prior");
  const double tm = theta_max_of(o, cfg);
  const Estimator est = validated([&] { return Estimator(kind, cfg, tm); });
  os << prior_json(*est.prior(), est.spec()) << '\n';
}

int cmd_selftest(const Options& o, std::ostream& os) {
  SelftestOptions so;
  so.quad_order = o.quad_order;
  so.seed = o.seed;
  so.mc_samples = o.mc_samples;
  if (so.mc_samples < 100000) throw UsageError("--mc-samples must be >= 100000");
  bool all = true;
  for (const CheckResult& c : run_selftest(so)) {
    os << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    all = all && c.passed;
  }
  return all ? kExitOk : kExitNumerical;
}

void add_model_flags(CLI::App* sub, Options& o, bool with_estimator) {
  if (with_estimator) {
    sub->add_option("--estimator", o.estimator, "grid | bigrid | ss | plugin | point")
        ->required()
        ->check(CLI::IsMember({"grid", "bigrid", "ss", "plugin", "point"}));
    o.slab_l_opt = sub->add_option("--slab-l", o.slab_l, "spike-and-slab half-width (default 5 lambda)");
  }
  sub->add_option("--eta", o.eta, "sparsity in (0, 1)")->required();
  sub->add_option("--r", o.r, "variance ratio v_y / v_x")->required();
}

void add_output_flags(CLI::App* sub, Options& o, std::vector<std::string> formats) {
  sub->add_option("--format", o.format, "output format")->check(CLI::IsMember(formats));
  sub->add_option("--out", o.out_path, "write to PATH instead of standard output");
}

}  // namespace

void write_risk_curve_csv(const RiskCurve& c, std::ostream& os) {
  os << "theta,rho,quad_term,e_log_N,e_log_D\n";
  for (const RiskBreakdown& b : c.details) {
    os << csv_num(b.theta) << ',' << csv_num(b.rho) << ',' << csv_num(b.quad_term) << ',' << csv_num(b.e_log_N)
       << ',' << csv_num(b.e_log_D) << '\n';
  }
}

std::string risk_curve_json(const RiskCurve& c) {
  Json j;
  j["eta"] = c.cfg.eta;
  j["r"] = c.cfg.r;
  j["estimator"] = estimator_name(c.kind);
  j["benchmark"] = c.benchmark;
  j["max_rho"] = c.max_rho;
  j["argmax_theta"] = c.argmax_theta;
  j["ratio"] = c.ratio;
  Json rows = Json::array();
  for (const RiskBreakdown& b : c.details) {
    rows.push_back({{"theta", b.theta},
                    {"rho", b.rho},
                    {"quad_term", b.quad_term},
                    {"e_log_N", json_num(b.e_log_N)},
                    {"e_log_D", json_num(b.e_log_D)}});
  }
  j["points"] = std::move(rows);
  return j.dump();
}

std::string max_risk_json(const RiskCurve& c, int quad_order, int points) {
  Json j;
  j["eta"] = c.cfg.eta;
  j["r"] = c.cfg.r;
  j["estimator"] = estimator_name(c.kind);
  j["benchmark"] = c.benchmark;
  j["max_rho"] = c.max_rho;
  j["ratio"] = c.ratio;
  j["argmax_theta"] = c.argmax_theta;
  j["quad_order"] = quad_order;
  j["points"] = points;
  return j.dump();
}

void write_max_risk_csv(const RiskCurve& c, int quad_order, int points, std::ostream& os) {
  os << "eta,r,estimator,benchmark,max_rho,ratio,argmax_theta,quad_order,points\n";
  os << csv_num(c.cfg.eta) << ',' << csv_num(c.cfg.r) << ',' << estimator_name(c.kind) << ','
     << csv_num(c.benchmark) << ',' << csv_num(c.max_rho) << ',' << csv_num(c.ratio) << ','
     << csv_num(c.argmax_theta) << ',' << quad_order << ',' << points << '\n';
}

void write_table_csv(const std::vector<TableRow>& rows, std::ostream& os) {
  os << "eta,r,benchmark,plugin_ratio,bigrid_ratio,ss_ratio,grid_ratio,"
        "plugin_argmax,bigrid_argmax,ss_argmax,grid_argmax\n";
  for (const TableRow& t : rows) {
    os << csv_num(t.eta) << ',' << csv_num(t.r) << ',' << csv_num(t.benchmark) << ',' << csv_num(t.plugin.ratio)
       << ',' << csv_num(t.bigrid.ratio) << ',' << csv_num(t.ss.ratio) << ',' << csv_num(t.grid.ratio) << ','
       << csv_num(t.plugin.argmax) << ',' << csv_num(t.bigrid.argmax) << ',' << csv_num(t.ss.argmax) << ','
       << csv_num(t.grid.argmax) << '\n';
  }
}

std::string table_json(const std::vector<TableRow>& rows) {
  auto cell = [](const CellResult& c) {
    return Json{{"max_rho", c.max_rho}, {"ratio", c.ratio}, {"argmax", c.argmax}};
  };
  Json out = Json::array();
  for (const TableRow& t : rows) {
    out.push_back({{"eta", t.eta},
                   {"r", t.r},
                   {"benchmark", t.benchmark},
                   {"plugin", cell(t.plugin)},
                   {"bigrid", cell(t.bigrid)},
                   {"ss", cell(t.ss)},
                   {"grid", cell(t.grid)}});
  }
  return out.dump();
}

void write_sigma_csv(const std::vector<SigmaPoint>& surface, const ModelConfig& cfg, const BiGridSpec& spec,
                     std::ostream& os) {
  os << "l,omega,theta,n,n_check,d,sigma\n";
  for (const SigmaPoint& p : surface) {
    os << p.l << ',' << csv_num(p.omega) << ',' << csv_num(p.theta) << ',' << csv_num(p.n_val) << ','
       << csv_num(p.n_check_val) << ',' << csv_num(p.d_val) << ',' << csv_num(p.sigma) << '\n';
  }
  const SigmaPoint best = sigma_max(surface);
  Json s;
  s["max_sigma"] = best.sigma;
  s["l"] = best.l;
  s["omega"] = best.omega;
  s["theta"] = best.theta;
  s["one_plus_h_plus"] = 1.0 + h_r(cfg.r).h_plus;
  s["b"] = spec.b;
  s["K"] = spec.K;
  os << "# " << s.dump() << '\n';
}

DensityGrid density_grid(const SparsePrior& prior, const ModelConfig& cfg, double x, int points) {
  if (points < 2) throw std::domain_error("density_grid: need at least 2 points");
  const double span = std::abs(x) + 10.0 * cfg.lambda + 14.0;
  DensityGrid g;
  g.ys.resize(points);
  g.phat.resize(points);
  const double h = 2.0 * span / (points - 1);
  for (int i = 0; i < points; ++i) {
    g.ys[i] = i + 1 == points ? span : -span + h * i;
    g.phat[i] = predictive_density(prior, cfg, x, g.ys[i]);
  }
  for (int i = 0; i + 1 < points; ++i) g.integral += 0.5 * (g.ys[i + 1] - g.ys[i]) * (g.phat[i] + g.phat[i + 1]);
  return g;
}

void write_density_csv(const DensityGrid& g, std::ostream& os) {
  os << "y,phat\n";
  for (std::size_t i = 0; i < g.ys.size(); ++i) os << csv_num(g.ys[i]) << ',' << csv_num(g.phat[i]) << '\n';
  os << "# " << Json{{"integral", g.integral}}.dump() << '\n';
}

std::string prior_json(const SparsePrior& prior, const std::optional<BiGridSpec>& spec) {
  Json j;
  j["weight_at_zero"] = prior.weight_at_zero;
  Json atoms = Json::array();
  for (const Atom& a : prior.atoms) atoms.push_back({{"mu", a.mu}, {"mass", a.mass}});
  j["atoms"] = std::move(atoms);
  j["slab"] = prior.slab ? Json{{"l", prior.slab->half_width}, {"mass", prior.slab->total_mass}} : Json(nullptr);
  j["spec"] = spec ? Json{{"b", spec->b}, {"K", spec->K}, {"c_eta", spec->c_eta}} : Json(nullptr);
  return j.dump();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse predictive density risk calculator", "sparsepde"};
  app.require_subcommand(1);
  Options o;

  auto* rc = app.add_subcommand("risk-curve", "risk over a uniform theta grid");
  add_model_flags(rc, o, true);
  o.theta_max_opt = rc->add_option("--theta-max", o.theta_max, "scan upper end (default 5 lambda)");
  rc->add_option("--points", o.points, "grid points")->check(CLI::Range(64, 10000000));
  rc->add_option("--quad-order", o.quad_order, "quadrature nodes")->check(CLI::Range(8, 1000000));
  add_output_flags(rc, o, {"csv", "json"});

  auto* mr = app.add_subcommand("max-risk", "maximum risk and its location");
  add_model_flags(mr, o, true);
  auto* mr_tm = mr->add_option("--theta-max", o.theta_max, "scan upper end (default 5 lambda)");
  mr->add_option("--points", o.points, "grid points")->check(CLI::Range(64, 10000000));
  mr->add_option("--quad-order", o.quad_order, "quadrature nodes")->check(CLI::Range(8, 1000000));
  add_output_flags(mr, o, {"json", "csv"});

  auto* t1 = app.add_subcommand("table1", "maximum-risk ratios for every (eta, r)");
  t1->add_option("--etas", o.etas, "comma-separated sparsities")->delimiter(',');
  t1->add_option("--rs", o.rs, "comma-separated variance ratios")->delimiter(',');
  t1->add_option("--points", o.points, "grid points")->check(CLI::Range(64, 10000000));
  t1->add_option("--quad-order", o.quad_order, "quadrature nodes")->check(CLI::Range(8, 1000000));
  add_output_flags(t1, o, {"csv", "json"});

  auto* sg = app.add_subcommand("sigma", "dominant-risk surface sigma(l, omega)");
  sg->add_option("--estimator", o.estimator, "grid | bigrid")->required()->check(CLI::IsMember({"grid", "bigrid"}));
  sg->add_option("--eta", o.eta, "sparsity in (0, 1)")->default_val(0.1);
  sg->add_option("--r", o.r, "variance ratio v_y / v_x")->required();
  sg->add_option("--omega-steps", o.omega_steps, "lattice steps per zone")->check(CLI::Range(2, 10000000));
  auto* sg_lmax = sg->add_option("--l-max", o.l_max, "last zone (default: zone of 7 lambda)")
                      ->check(CLI::Range(1, 1000000));
  add_output_flags(sg, o, {"csv"});

  auto* dn = app.add_subcommand("density", "Bayes predictive density on a y grid");
  add_model_flags(dn, o, true);
  dn->add_option("--x", o.x, "observed x");
  auto* dn_pts = dn->add_option("--points", o.points, "y grid points (default 4096)")->check(CLI::Range(2, 10000000));
  add_output_flags(dn, o, {"csv"});

  auto* pr = app.add_subcommand("prior", "prior utilities");
  pr->require_subcommand(1);
  auto* dump = pr->add_subcommand("dump", "constructed prior as JSON");
  add_model_flags(dump, o, true);
  auto* dump_tm = dump->add_option("--theta-max", o.theta_max, "truncation range (default 5 lambda)");
  add_output_flags(dump, o, {"json"});

  auto* st = app.add_subcommand("selftest", "run the invariant battery");
  st->add_option("--seed", o.seed, "Monte-Carlo seed");
  st->add_option("--quad-order", o.quad_order, "quadrature nodes")->check(CLI::Range(8, 1000000));
  st->add_option("--mc-samples", o.mc_samples, "Monte-Carlo sample count");
  add_output_flags(st, o, {"csv"});

  std::vector<const char*> argv{"sparsepde"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (mr->parsed()) o.theta_max_opt = mr_tm;
  if (dump->parsed()) o.theta_max_opt = dump_tm;
  if (dn->parsed()) o.points_opt = dn_pts;
  if (sg->parsed()) o.l_max_opt = sg_lmax;
  for (CLI::App* sub : {rc, mr, dn, dump}) {
    if (sub->parsed()) o.slab_l_opt = sub->get_option_no_throw("--slab-l");
  }

  std::ostringstream buf;
  buf.imbue(std::locale::classic());
  int code = kExitOk;
  try {
    if (rc->parsed()) cmd_risk_curve(o, buf);
    else if (mr->parsed()) cmd_max_risk(o, buf);
    else if (t1->parsed()) cmd_table1(o, buf);
    else if (sg->parsed()) cmd_sigma(o, buf);
    else if (dn->parsed()) cmd_density(o, buf);
    else if (dump->parsed()) cmd_prior_dump(o, buf);
    else if (st->parsed()) code = cmd_selftest(o, buf);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }

  if (o.out_path.empty()) {
    out << buf.str();
  } else {
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f) {
      err << "error: cannot open " << o.out_path << " for writing\n";
      return kExitUsage;
    }
    f << buf.str();
  }
  return code;
}

}  // namespace sparsepde
