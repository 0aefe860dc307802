#include "gdo/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gdo/classical.hpp"
#include "gdo/driving.hpp"
#include "gdo/fdops.hpp"
#include "gdo/geometric.hpp"
#include "gdo/invariant.hpp"
#include "gdo/oracle.hpp"
#include "gdo/wavefunction.hpp"

namespace gdo {

using nlohmann::json;

Task task_from_string(const std::string& name) {
  if (name == "states") return Task::states;
  if (name == "residuals") return Task::residuals;
  if (name == "moments") return Task::moments;
  if (name == "cis") return Task::cis;
  if (name == "berry") return Task::berry;
  if (name == "oracle") return Task::oracle;
  if (name == "sweep") return Task::sweep;
  throw std::invalid_argument("unknown task '" + name + "'");
}

std::string to_string(Task t) {
  switch (t) {
    case Task::states: return "states";
    case Task::residuals: return "residuals";
    case Task::moments: return "moments";
    case Task::cis: return "cis";
    case Task::berry: return "berry";
    case Task::oracle: return "oracle";
    case Task::sweep: return "sweep";
  }
  return "?";
}

namespace {

void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
  }
}

std::vector<double> as_vector(const json& j, const std::string& where) {
  if (!j.is_array()) throw std::invalid_argument("config: " + where + " must be an array");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(v.get<double>());
  return out;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config: parse error in " + origin + ": " + e.what());
  }
  if (!root.is_object()) throw std::invalid_argument("config: top level must be an object");
  check_keys(root,
             {"name", "preset", "constants", "tables", "t0", "period", "window", "rational",
              "irrational", "c_constants", "beta0", "solver", "quantum_numbers",
              "sample_times", "grid", "tasks", "tau", "expect_cis", "oracle", "tolerances",
              "output_dir"},
             "top level");

  ScenarioConfig cfg;
  if (root.contains("name")) cfg.name = root["name"].get<std::string>();

  const bool has_preset = root.contains("preset");
  const bool has_tables = root.contains("tables");
  if (has_preset == has_tables)
    throw std::invalid_argument("config: exactly one of 'preset' or 'tables' is required");
  if (has_preset) cfg.preset = preset_from_string(root["preset"].get<std::string>());
  if (root.contains("constants")) {
    for (auto it = root["constants"].begin(); it != root["constants"].end(); ++it)
      cfg.constants[it.key()] = it.value().get<double>();
  }
  if (has_tables) {
    const json& t = root["tables"];
    check_keys(t, {"t", "M", "Y", "omega_sq", "F", "G"}, "tables");
    if (!t.contains("t") || !t.contains("M") || !t.contains("omega_sq"))
      throw std::invalid_argument("config: tables need at least 't', 'M' and 'omega_sq'");
    ScenarioConfig::Tables tb;
    tb.t = as_vector(t["t"], "tables.t");
    tb.M = as_vector(t["M"], "tables.M");
    tb.omega_sq = as_vector(t["omega_sq"], "tables.omega_sq");
    if (t.contains("Y")) tb.Y = as_vector(t["Y"], "tables.Y");
    if (t.contains("F")) tb.F = as_vector(t["F"], "tables.F");
    if (t.contains("G")) tb.G = as_vector(t["G"], "tables.G");
    for (const auto* v : {&tb.M, &tb.omega_sq}) {
      if (v->size() != tb.t.size())
        throw std::invalid_argument("config: table column lengths must match 't'");
    }
    for (const auto* v : {&tb.Y, &tb.F, &tb.G}) {
      if (!v->empty() && v->size() != tb.t.size())
        throw std::invalid_argument("config: table column lengths must match 't'");
    }
    cfg.tables = std::move(tb);
  }

  if (root.contains("period")) cfg.period = root["period"].get<double>();
  if (!root.contains("window"))
    throw std::invalid_argument("config: 'window' [t_begin, t_end] is required");
  {
    auto w = as_vector(root["window"], "window");
    if (w.size() != 2 || !(w[1] > w[0]))
      throw std::invalid_argument("config: window must be [t_begin, t_end] with t_end > t_begin");
    cfg.window = {w[0], w[1]};
  }
  cfg.t0 = root.contains("t0") ? root["t0"].get<double>() : cfg.window[0];
  if (root.contains("rational")) {
    const json& r = root["rational"];
    check_keys(r, {"r", "r_e"}, "rational");
    cfg.rational = {r.at("r").get<int>(), r.at("r_e").get<int>()};
    if (cfg.rational->first <= 0 || cfg.rational->second <= 0)
      throw std::invalid_argument("config: rational r, r_e must be positive integers");
  }
  if (root.contains("irrational")) cfg.irrational = root["irrational"].get<bool>();
  if (cfg.irrational && cfg.rational)
    throw std::invalid_argument("config: 'rational' and 'irrational' are mutually exclusive");

  if (root.contains("c_constants")) {
    const json& c = root["c_constants"];
    if (c.is_string()) {
      if (c.get<std::string>() != "default")
        throw std::invalid_argument("config: c_constants must be \"default\" or [c1,c2,c3]");
    } else {
      auto v = as_vector(c, "c_constants");
      if (v.size() != 3)
        throw std::invalid_argument("config: c_constants must have three entries");
      cfg.c_constants = {v[0], v[1], v[2]};
    }
  }
  if (root.contains("beta0")) {
    const json& b = root["beta0"];
    if (b.is_string()) {
      const std::string s = b.get<std::string>();
      if (s == "zero") cfg.beta0_mode = ScenarioConfig::Beta0Mode::zero;
      else if (s == "comoving") cfg.beta0_mode = ScenarioConfig::Beta0Mode::comoving;
      else throw std::invalid_argument("config: beta0 must be \"zero\", \"comoving\" or [re,im]");
    } else {
      auto v = as_vector(b, "beta0");
      if (v.size() != 2) throw std::invalid_argument("config: beta0 array must be [re, im]");
      cfg.beta0_mode = ScenarioConfig::Beta0Mode::value;
      cfg.beta0_value = {v[0], v[1]};
    }
  }
  if (root.contains("solver")) {
    const json& s = root["solver"];
    check_keys(s, {"tol", "n_dense"}, "solver");
    if (s.contains("tol")) cfg.solver_tol = s["tol"].get<double>();
    if (s.contains("n_dense")) cfg.solver_n_dense = s["n_dense"].get<std::size_t>();
  }
  if (root.contains("quantum_numbers")) {
    cfg.quantum_numbers.clear();
    for (const auto& v : root["quantum_numbers"]) {
      const int n = v.get<int>();
      if (n < 0 || n > kMaxQuantumNumber)
        throw std::invalid_argument("config: quantum numbers must lie in [0, 64]");
      cfg.quantum_numbers.push_back(n);
    }
    if (cfg.quantum_numbers.empty())
      throw std::invalid_argument("config: quantum_numbers must not be empty");
  }
  if (root.contains("sample_times"))
    cfg.sample_times = as_vector(root["sample_times"], "sample_times");
  if (root.contains("grid")) {
    const json& g = root["grid"];
    check_keys(g, {"n_points", "span_sigmas"}, "grid");
    if (g.contains("n_points")) cfg.grid_points = g["n_points"].get<std::size_t>();
    if (g.contains("span_sigmas")) cfg.grid_span_sigmas = g["span_sigmas"].get<double>();
  }
  if (!root.contains("tasks")) throw std::invalid_argument("config: 'tasks' is required");
  for (const auto& t : root["tasks"]) cfg.tasks.insert(task_from_string(t.get<std::string>()));
  if (cfg.tasks.empty()) throw std::invalid_argument("config: 'tasks' must not be empty");
  if (root.contains("tau")) cfg.tau = root["tau"].get<double>();
  if (root.contains("expect_cis")) cfg.expect_cis = root["expect_cis"].get<bool>();
  if (root.contains("oracle")) {
    const json& o = root["oracle"];
    check_keys(o, {"n_points", "span_sigmas", "dt_divisor", "dt_list"}, "oracle");
    if (o.contains("n_points")) cfg.oracle_points = o["n_points"].get<std::size_t>();
    if (o.contains("span_sigmas")) cfg.oracle_span_sigmas = o["span_sigmas"].get<double>();
    if (o.contains("dt_divisor")) cfg.oracle_dt_divisor = o["dt_divisor"].get<int>();
    if (o.contains("dt_list")) cfg.oracle_dt_list = as_vector(o["dt_list"], "oracle.dt_list");
  }
  if (root.contains("tolerances")) {
    for (auto it = root["tolerances"].begin(); it != root["tolerances"].end(); ++it)
      cfg.tolerances[it.key()] = it.value().get<double>();
  }
  if (root.contains("output_dir")) cfg.output_dir = root["output_dir"].get<std::string>();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string list_presets_table() {
  std::string out = "preset  constants (optional in [])            description\n";
  for (const auto& p : preset_registry()) {
    std::string consts;
    for (const auto& c : p.required) consts += c + " ";
    for (const auto& c : p.optional) consts += "[" + c + "] ";
    char line[256];
    std::snprintf(line, sizeof line, "%-7s %-38s %s\n", p.name.c_str(), consts.c_str(),
                  p.description.c_str());
    out += line;
  }
  return out;
}

namespace {

double default_tolerance(const std::string& name, double solver_tol) {
  if (name == "wronskian") return 100.0 * solver_tol;
  if (name == "eom_residual") return 100.0 * solver_tol;
  if (name == "omega_I_constancy") return 1e-8;
  if (name == "invariant_ode") return 1e-7;
  if (name == "linear_ode") return 1e-7;
  if (name == "beta_residual") return 1e-8;
  if (name == "beta_quadrature") return 1e-8;
  if (name == "norm") return 1e-6;
  if (name == "eigen_residual") return 1e-4;
  if (name == "schrodinger_residual") return 1e-4;
  if (name == "moments") return 1e-4;
  if (name == "berry_discrepancy") return 1e-6;
  if (name == "fidelity_error") return 1e-4;
  if (name == "norm_drift") return 1e-8;
  if (name == "hermiticity") return 1e-12;
  throw std::logic_error("unknown tolerance " + name);
}

struct CheckList {
  json entries = json::array();
  bool all_pass = true;
  const ScenarioConfig* cfg = nullptr;
  double tol_scale = 1.0;

  double allowed(const std::string& name) const {
    auto it = cfg->tolerances.find(name);
    const double base =
        it != cfg->tolerances.end() ? it->second : default_tolerance(name, cfg->solver_tol);
    return base * tol_scale;
  }

  bool add(const std::string& module, const std::string& name, double measured,
           double allowed_value) {
    const bool pass = measured <= allowed_value;
    entries.push_back({{"module", module},
                       {"name", name},
                       {"measured", measured},
                       {"allowed", allowed_value},
                       {"pass", pass}});
    all_pass = all_pass && pass;
    return pass;
  }

  void add_flag(const std::string& module, const std::string& name, bool pass,
                const std::string& detail) {
    entries.push_back({{"module", module},
                       {"name", name},
                       {"detail", detail},
                       {"pass", pass}});
    all_pass = all_pass && pass;
  }

  void add_error(const std::string& module, const std::string& what) {
    entries.push_back({{"module", module}, {"name", "error"}, {"detail", what}, {"pass", false}});
    all_pass = false;
  }
};

ParameterSchedule build_schedule(const ScenarioConfig& cfg) {
  if (cfg.preset) {
    auto constants = cfg.constants;
    if (cfg.irrational) {
      const double omega = constants.count("omega") ? constants.at("omega") : 1.0;
      constants["omega_e"] = std::sqrt(2.0) * omega;
    }
    ParameterSchedule s = make_preset(*cfg.preset, constants);
    s.t0 = cfg.t0;
    if (cfg.period) s.period = cfg.period;
    return s;
  }
  const auto& tb = *cfg.tables;
  ParameterSchedule s;
  s.M = Coefficient::sampled(tb.t, tb.M);
  s.omega_sq = Coefficient::sampled(tb.t, tb.omega_sq);
  if (!tb.Y.empty()) s.Y = Coefficient::sampled(tb.t, tb.Y);
  if (!tb.F.empty()) s.F = Coefficient::sampled(tb.t, tb.F);
  if (!tb.G.empty()) s.G = Coefficient::sampled(tb.t, tb.G);
  s.t0 = cfg.t0;
  s.period = cfg.period;
  return s;
}

// Effective period for the cis/berry tasks.
std::optional<double> effective_tau(const ScenarioConfig& cfg, const ParameterSchedule& sched) {
  if (cfg.tau) return cfg.tau;
  if (cfg.preset == Preset::C && cfg.rational && cfg.constants.count("omega"))
    return 2.0 * M_PI * cfg.rational->first / cfg.constants.at("omega");
  return sched.period;
}

// Fixed grid covering the packet over the whole propagation interval.
std::vector<double> span_grid(const InvariantCoefficients& inv, const DriveState& ds,
                              double t0, double t1, std::size_t n_points, double span_sigmas) {
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i <= 256; ++i) {
    const double t = t0 + (t1 - t0) * i / 256.0;
    const double sigma = std::sqrt(inv.g_minus(t) / inv.omega_I());
    const double center =
        -std::sqrt(2.0 * inv.g_minus(t) / inv.omega_I()) * ds.beta(t).real();
    lo = std::min(lo, center - span_sigmas * sigma);
    hi = std::max(hi, center + span_sigmas * sigma);
  }
  std::vector<double> grid(n_points);
  for (std::size_t i = 0; i < n_points; ++i)
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_points - 1);
  return grid;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

int run_scenario(const ScenarioConfig& cfg, const std::string& output_dir_override,
                 double tol_scale) {
  namespace fs = std::filesystem;
  const std::string out_dir =
      output_dir_override.empty() ? cfg.output_dir : output_dir_override;
  fs::create_directories(out_dir);
  auto path = [&](const std::string& leaf) { return (fs::path(out_dir) / leaf).string(); };

  CheckList checks;
  checks.cfg = &cfg;
  checks.tol_scale = tol_scale;
  json results;

  ParameterSchedule sched = build_schedule(cfg);
  const double t_begin = cfg.window[0], t_end = cfg.window[1];

  // Schedule validation.
  {
    const auto violations = validate(sched, t_begin, t_end, 256);
    json v = json::array();
    for (const auto& viol : violations)
      v.push_back({{"invariant", viol.invariant},
                   {"t", viol.t},
                   {"value_a", viol.value_a},
                   {"value_b", viol.value_b}});
    results["validation"] = v;
    checks.add_flag("schedule", "validation",
                    violations.empty(), violations.empty()
                        ? "no violations"
                        : std::to_string(violations.size()) + " violation(s)");
    if (!violations.empty()) {
      // The pipeline below assumes a well-posed schedule.
      json report{{"scenario", {{"name", cfg.name}}},
                  {"checks", checks.entries},
                  {"results", results},
                  {"pass", false}};
      std::ofstream(path("report.json")) << report.dump(2) << "\n";
      return 1;
    }
  }

  int exit_code = 0;
  try {
    ClassicalBasis basis =
        solve_classical(sched, t_begin, t_end, cfg.solver_tol, std::nullopt,
                        cfg.solver_n_dense);
    checks.add("classical", "wronskian_drift", basis.wronskian_drift(),
               checks.allowed("wronskian"));
    checks.add("classical", "eom_residual", basis.eom_residual(),
               checks.allowed("eom_residual"));
    dump_csv(basis, path("classical.csv"));

    InvariantCoefficients inv =
        cfg.c_constants ? build_invariant(basis, sched, *cfg.c_constants)
                        : build_invariant(basis, sched);
    checks.add("invariant", "omega_I_constancy", inv.max_invariant_deviation(),
               checks.allowed("omega_I_constancy"));
    checks.add("invariant", "ode_agreement", check_invariant_odes(inv, sched),
               checks.allowed("invariant_ode"));
    results["invariant"] = {{"omega_I", inv.omega_I()},
                            {"c_constants", inv.c_constants()}};
    dump_csv(inv, path("invariant.csv"));

    Complex beta0{0.0, 0.0};
    if (cfg.beta0_mode == ScenarioConfig::Beta0Mode::comoving)
      beta0 = comoving_beta0(inv, sched);
    else if (cfg.beta0_mode == ScenarioConfig::Beta0Mode::value)
      beta0 = cfg.beta0_value;
    DriveState ds = solve_beta(inv, sched, beta0);
    checks.add("driving", "beta_residual", ds.beta_residual(),
               checks.allowed("beta_residual"));
    checks.add("driving", "quadrature_agreement", ds.quadrature_deviation(),
               checks.allowed("beta_quadrature"));
    checks.add("driving", "ode_agreement", check_linear_odes(ds, inv, sched),
               checks.allowed("linear_ode"));
    results["driving"] = {{"beta0", {beta0.real(), beta0.imag()}}};
    dump_csv(ds, path("driving.csv"));

    std::vector<double> sample_times = cfg.sample_times;
    if (sample_times.empty()) {
      for (int i = 0; i < 5; ++i)
        sample_times.push_back(t_begin + (t_end - t_begin) * (0.1 + 0.2 * i));
    }

    const double tau_char = 2.0 * M_PI / inv.theta_rate(t_begin);
    const std::optional<double> tau = effective_tau(cfg, sched);

    if (cfg.tasks.count(Task::states)) {
      json states = json::array();
      int t_index = 0;
      for (double t : sample_times) {
        for (int n : cfg.quantum_numbers) {
          auto grid = make_grid(inv, ds, t, cfg.grid_points,
                                level_span_sigmas(n, cfg.grid_span_sigmas));
          WaveFunctionSample s = eval_psi(n, inv, ds, sched, t, std::move(grid));
          std::vector<double> dens(s.psi.size());
          for (std::size_t i = 0; i < dens.size(); ++i) dens[i] = std::norm(s.psi[i]);
          const double norm = trapezoid(dens, grid_spacing(s.grid));
          checks.add("wavefunction",
                     "norm n=" + std::to_string(n) + " t=" + format_double(t),
                     std::abs(norm - 1.0), checks.allowed("norm"));
          char leaf[64];
          std::snprintf(leaf, sizeof leaf, "state_n%d_t%03d.csv", n, t_index);
          dump_csv(s, path(leaf), cfg.name);
          states.push_back({{"n", n},
                            {"t", t},
                            {"norm", norm},
                            {"alpha_n", s.alpha_n},
                            {"delta_q", s.delta_q},
                            {"delta_p", s.delta_p},
                            {"csv", leaf}});
        }
        ++t_index;
      }
      results["states"] = states;
    }

    if (cfg.tasks.count(Task::residuals)) {
      json rows = json::array();
      for (double t_raw : sample_times) {
        for (int n : cfg.quantum_numbers) {
          const double rate = inv.theta_rate(t_raw);
          const double delta = 1e-3 * 2.0 * M_PI / (rate * (2.0 * n + 3.0));
          const double t = std::clamp(t_raw, t_begin + delta, t_end - delta);
          auto grid = make_grid(inv, ds, t, cfg.grid_points,
                                level_span_sigmas(n, cfg.grid_span_sigmas));
          const double eig = eigen_residual(n, inv, ds, sched, t, grid);
          StateProvider provider = [&](double tt) {
            return eval_psi(n, inv, ds, sched, tt, grid).psi;
          };
          const double schro = schrodinger_residual(sched, grid, provider, t, delta);
          checks.add("wavefunction",
                     "eigen_residual n=" + std::to_string(n) + " t=" + format_double(t),
                     eig, checks.allowed("eigen_residual"));
          checks.add("wavefunction",
                     "schrodinger_residual n=" + std::to_string(n) + " t=" + format_double(t),
                     schro, checks.allowed("schrodinger_residual"));
          rows.push_back(
              {{"n", n}, {"t", t}, {"eigen_residual", eig}, {"schrodinger_residual", schro}});
        }
      }
      results["residuals"] = rows;
    }

    if (cfg.tasks.count(Task::moments)) {
      json rows = json::array();
      for (double t : sample_times) {
        for (int n : cfg.quantum_numbers) {
          auto grid = make_grid(inv, ds, t, cfg.grid_points,
                                level_span_sigmas(n, cfg.grid_span_sigmas));
          WaveFunctionSample s = eval_psi(n, inv, ds, sched, t, std::move(grid));
          const Moments m = moments(s, sched, inv);
          const double gm = inv.g_minus(t), g0 = inv.g_zero(t), wi = inv.omega_I();
          const double var_q_exp = (2.0 * n + 1.0) * gm / (2.0 * wi);
          const double var_p_exp =
              (2.0 * n + 1.0) * (wi / (2.0 * gm)) * (1.0 + g0 * g0 / (wi * wi));
          checks.add("wavefunction",
                     "var_q n=" + std::to_string(n) + " t=" + format_double(t),
                     std::abs(m.var_q - var_q_exp) / var_q_exp, checks.allowed("moments"));
          checks.add("wavefunction",
                     "var_p n=" + std::to_string(n) + " t=" + format_double(t),
                     std::abs(m.var_p - var_p_exp) / var_p_exp, checks.allowed("moments"));
          rows.push_back({{"n", n},
                          {"t", t},
                          {"mean_q", m.mean_q},
                          {"var_q", m.var_q},
                          {"mean_p", m.mean_p},
                          {"var_p", m.var_p},
                          {"var_q_expected", var_q_exp},
                          {"var_p_expected", var_p_exp}});
        }
      }
      results["moments"] = rows;
    }

    json cis_json;
    bool have_cis = false, cis_verdict = false;
    if (cfg.tasks.count(Task::cis) || cfg.tasks.count(Task::berry)) {
      if (!tau) {
        checks.add_error("geometric", "cis requires 'tau', 'rational', or a schedule period");
      } else {
        const CyclicReport rep = cis_conditions(inv, ds, sched, *tau, t_begin);
        have_cis = true;
        cis_verdict = rep.is_cis;
        cis_json = {{"tau", rep.tau},
                    {"theta0", rep.theta0},
                    {"sigma0", {rep.sigma0.real(), rep.sigma0.imag()}},
                    {"is_cis", rep.is_cis},
                    {"winding", rep.winding},
                    {"reason", rep.reason},
                    {"tol_theta", rep.tol_theta},
                    {"tol_sigma", rep.tol_sigma},
                    {"per_n", json::array()}};
        if (cfg.expect_cis) {
          checks.add_flag("geometric", "cis_verdict", rep.is_cis == *cfg.expect_cis,
                          std::string("is_cis=") + (rep.is_cis ? "true" : "false") +
                              (rep.reason.empty() ? "" : " (" + rep.reason + ")"));
        }
      }
    }

    if (cfg.tasks.count(Task::berry)) {
      if (!have_cis) {
        checks.add_error("geometric", "berry task needs a cis configuration");
      } else if (!cis_verdict) {
        checks.add_flag("geometric", "berry", false,
                        "berry phase requested on a non-cyclic configuration (" +
                            cis_json["reason"].get<std::string>() + ")");
      } else {
        for (int n : cfg.quantum_numbers) {
          const BerryPhaseResult r = berry_phase(n, inv, ds, sched, *tau, t_begin);
          checks.add("geometric", "berry_two_route n=" + std::to_string(n), r.discrepancy,
                     checks.allowed("berry_discrepancy"));
          cis_json["per_n"].push_back({{"n", n},
                                       {"chi", r.chi},
                                       {"gamma_bp", r.gamma_bp},
                                       {"gamma_reconstructed", r.gamma_reconstructed},
                                       {"discrepancy", r.discrepancy},
                                       {"integral_h0_beta_sq", r.integral_h0_beta_sq},
                                       {"integral_xi", r.integral_xi},
                                       {"integral_zeta", r.integral_zeta}});
        }
      }
    }
    if (have_cis) results["cis"] = cis_json;

    if (cfg.tasks.count(Task::oracle)) {
      json rows = json::array();
      const double t1 = std::min(t_begin + tau_char, t_end);
      for (int n : cfg.quantum_numbers) {
        auto grid = span_grid(inv, ds, t_begin, t1, cfg.oracle_points,
                              level_span_sigmas(n, cfg.oracle_span_sigmas));
        checks.add("oracle", "hermiticity n=" + std::to_string(n),
                   hermiticity_defect(sched, grid, 0.5 * (t_begin + t1)),
                   checks.allowed("hermiticity"));
        WaveFunctionSample s0 = eval_psi(n, inv, ds, sched, t_begin, grid);
        WaveFunctionSample s1 = eval_psi(n, inv, ds, sched, t1, grid);
        const double dt = tau_char / cfg.oracle_dt_divisor;
        const PropagationResult r =
            propagate(sched, grid, s0.psi, t_begin, t1, dt, s1.psi);
        checks.add("oracle", "fidelity_error n=" + std::to_string(n), 1.0 - r.fidelity,
                   checks.allowed("fidelity_error"));
        checks.add("oracle", "norm_drift n=" + std::to_string(n), r.norm_drift,
                   checks.allowed("norm_drift"));
        char leaf[64];
        std::snprintf(leaf, sizeof leaf, "oracle_n%d.csv", n);
        dump_snapshot_csv(r.grid, r.psi_final, path(leaf));
        rows.push_back({{"n", n},
                        {"t1", t1},
                        {"dt", r.dt},
                        {"fidelity", r.fidelity},
                        {"norm_drift", r.norm_drift},
                        {"csv", leaf}});
      }
      results["oracle"] = rows;
    }

    if (cfg.tasks.count(Task::sweep)) {
      const int n = cfg.quantum_numbers.front();
      const double t1 = std::min(t_begin + tau_char, t_end);
      auto grid = span_grid(inv, ds, t_begin, t1, cfg.oracle_points,
                            level_span_sigmas(n, cfg.oracle_span_sigmas));
      std::vector<double> dt_list = cfg.oracle_dt_list;
      if (dt_list.empty())
        dt_list = {tau_char / 125, tau_char / 250, tau_char / 500, tau_char / 1000};
      StateProvider provider = [&](double tt) {
        return eval_psi(n, inv, ds, sched, tt, grid).psi;
      };
      const double times[1] = {t1};
      const auto rows = fidelity_sweep(sched, provider, grid, t_begin, times, dt_list);
      dump_sweep_csv(rows, path("sweep.csv"));
      json jrows = json::array();
      for (const auto& r : rows)
        jrows.push_back(
            {{"t", r.t}, {"dt", r.dt}, {"fidelity", r.fidelity}, {"norm_drift", r.norm_drift}});
      // Convergence ratio on the state-error scale sqrt(2(1-F)): 4 per dt
      // halving for a second-order propagator.  Ratios are only assessed
      // above the spatial-accuracy floor.
      json ratios = json::array();
      bool order_ok = true;
      bool any_assessed = false;
      for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const double e0 = 1.0 - rows[i].fidelity, e1 = 1.0 - rows[i + 1].fidelity;
        if (e1 <= 0.0) continue;
        const double ratio = std::sqrt(e0 / e1);
        ratios.push_back(ratio);
        const bool halving = std::abs(rows[i].dt / rows[i + 1].dt - 2.0) < 0.01;
        if (halving && e0 > 1e-9 && e1 > 1e-9) {
          any_assessed = true;
          if (ratio < 3.5 || ratio > 4.5) order_ok = false;
        }
      }
      checks.add_flag("oracle", "sweep_convergence", order_ok,
                      any_assessed ? "dt-halving state-error ratios"
                                   : "fidelity error at spatial floor for all dt");
      results["sweep"] = {{"rows", jrows}, {"ratios", ratios}, {"csv", "sweep.csv"}};
    }
  } catch (const std::exception& e) {
    checks.add_error("pipeline", e.what());
    exit_code = 1;
  }

  if (!checks.all_pass) exit_code = 1;

  json scenario_echo{{"name", cfg.name},
                     {"window", {cfg.window[0], cfg.window[1]}},
                     {"t0", cfg.t0},
                     {"solver_tol", cfg.solver_tol}};
  if (cfg.preset) scenario_echo["preset"] = to_string(*cfg.preset);
  json tasks = json::array();
  for (const auto& t : cfg.tasks) tasks.push_back(to_string(t));
  scenario_echo["tasks"] = tasks;

  const auto now = std::chrono::system_clock::now();
  const auto now_t = std::chrono::system_clock::to_time_t(now);
  char stamp[64];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now_t));

  json report{{"meta", {{"tool", "gdo"}, {"version", "0.1.0"}, {"generated", stamp}}},
              {"scenario", scenario_echo},
              {"checks", checks.entries},
              {"results", results},
              {"pass", checks.all_pass}};
  std::ofstream out(path("report.json"));
  out << report.dump(2) << "\n";
  return exit_code;
}

}  // namespace gdo
