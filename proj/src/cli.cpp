#include "thinring/cli.hpp"

#include "svg.hpp"
#include "thinring/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

namespace thinring::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw UsageError("not a number: '" + s + "'");
  return v;
}

int to_count(const std::string& s) {
  const double v = to_double(s);
  if (v != std::floor(v) || v < 1 || v > 100000) throw UsageError("bad point count '" + s + "'");
  return static_cast<int>(v);
}

std::vector<double> parse_grid(const std::string& text, bool logarithmic) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw UsageError("grid must be a:b:n, got '" + text + "'");
    const double a = to_double(parts[0]), b = to_double(parts[1]);
    const int n = to_count(parts[2]);
    if (logarithmic && !(a > 0.0 && b > 0.0)) throw UsageError("log grid needs positive ends");
    for (int k = 0; k < n; ++k) {
      const double t = n == 1 ? 0.0 : static_cast<double>(k) / (n - 1);
      out.push_back(logarithmic ? std::exp(std::log(a) + t * (std::log(b) - std::log(a)))
                                : a + t * (b - a));
    }
    // Pin the ends exactly.
    out.front() = a;
    out.back() = b;
  } else {
    for (const auto& item : split(text, ',')) out.push_back(to_double(item));
  }
  if (out.empty()) throw UsageError("empty grid");
  return out;
}

Json margin_json(const MarginReport& m) {
  Json j;
  j["margin"] = m.margin;
  j["worst_mode"] = m.worst_mode;
  j["degenerate"] = m.degenerate;
  return j;
}

Json sigma_report_json(const SigmaReport& r) {
  Json j;
  j["omega"] = r.omega ? Json(*r.omega) : Json(nullptr);
  j["omega_estimate"] = r.omega_estimate;
  j["omega_declared"] = r.omega_declared;
  j["eps2_sigma_vanishes"] = r.eps2_sigma_vanishes;
  j["derivative_bounded"] = r.derivative_bounded;
  j["derivative_ratio_max"] = r.derivative_ratio_max;
  j["margin"] = r.margin ? margin_json(*r.margin) : Json(nullptr);
  j["excluded"] = r.excluded;
  j["admissible"] = r.admissible;
  j["notes"] = r.notes;
  return j;
}

SigmaLaw law_of(const RunConfig& c) {
  try {
    return SigmaLaw::from_name(c.sigma_kind, c.sigma_c, c.sigma_p);
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
}

Json params_json(const RunConfig& c) {
  Json j;
  j["rho"] = c.rho;
  j["sigma"] = {{"kind", c.sigma_kind}, {"c", c.sigma_c}, {"p", c.sigma_p}};
  j["modes"] = c.modes;
  j["grid"] = c.grid;
  j["tol"] = c.tol;
  return j;
}

Json diagnostics_json(const Diagnostics& d) {
  Json j;
  j["residual_norm"] = d.residual_norm;
  j["iterations"] = d.iterations;
  j["jacobian_evaluations"] = d.jacobian_evaluations;
  j["jacobian_condition"] = d.jacobian_condition;
  j["area_residual"] = d.area_residual;
  j["moment_residual"] = d.moment_residual;
  j["omega_eff"] = d.omega_eff ? Json(*d.omega_eff) : Json(nullptr);
  j["margin"] = d.margin ? margin_json(*d.margin) : Json(nullptr);
  j["uniqueness_window"] = {{"theta_sup", d.theta_sup},
                            {"theta_h5", d.theta_hk},
                            {"eps_pow_ell", d.window_bound},
                            {"inside", d.in_window},
                            {"w_log_eps_term", d.w_window}};
  j["warnings"] = d.warnings;
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

// Prints the error document and stores it next to the other outputs.
int fail(const RunConfig& c, std::ostream& out, int code, const std::string& kind,
         const std::string& message, Json extra = Json::object()) {
  Json j;
  j["error"] = {{"kind", kind}, {"message", message}, {"exit_code", code}};
  for (auto it = extra.begin(); it != extra.end(); ++it) j["error"][it.key()] = it.value();
  out << j.dump() << "\n";
  try {
    std::filesystem::create_directories(c.out_dir);
    write_json(std::filesystem::path(c.out_dir) / "error.json", j);
  } catch (const std::exception&) {
    // The stdout copy is enough when the directory is unusable.
  }
  return code;
}

SolverOptions options_of(const RunConfig& c) {
  SolverOptions o;
  o.grid = c.grid;
  o.modes = c.modes;
  o.tol = c.tol;
  return o;
}

// Refuses laws outside the admissible set unless forced; returns an exit code or 0.
int gate_sigma(const RunConfig& c, const SigmaLaw& law, std::ostream& out) {
  const SigmaReport rep = check_sigma(law, c.rho);
  if (rep.admissible || c.force) return 0;
  return fail(c, out, kExitRejected, rep.excluded ? "degenerate" : "inadmissible",
              "surface-tension law rejected (use --force to override)",
              {{"report", sigma_report_json(rep)}});
}

std::string boundary_csv(const SolutionState& s) {
  std::string text = "alpha,theta,mu,lambda,h\n";
  for (Eigen::Index j = 0; j < s.alpha.size(); ++j) {
    text += g17(s.alpha[j]) + ',' + g17(s.shape.value(s.alpha[j])) + ',' + g17(s.mu[j]) + ',' +
            g17(s.lambda[j]) + ',' + g17(s.h[j]) + '\n';
  }
  return text;
}

Json solution_json(const RunConfig& c, const SolutionState& s, const ModelParams& p) {
  const Asymptotics a = asymptotic_wgn(s.eps, p.rho, p.sigma);
  Json j;
  j["params"] = params_json(c);
  j["params"]["eps"] = s.eps;
  j["shape"] = {{"coeffs", s.shape.coeffs}};
  j["w"] = s.w;
  j["gamma"] = s.gamma;
  j["nu"] = s.nu;
  const double es = s.eps * p.sigma.value(s.eps);
  j["nu_rescaled"] = es > 0.0 ? Json(s.nu / es) : Json(nullptr);
  j["s"] = s.s;
  j["asymptotic"] = {{"w", a.w},
                     {"gamma", a.gamma},
                     {"nu", a.nu},
                     {"nu_rescaled", a.nu_rescaled ? Json(*a.nu_rescaled) : Json(nullptr)},
                     {"s", a.s}};
  j["diagnostics"] = diagnostics_json(s.diag);
  return j;
}

svg::Chart cross_section_chart(const std::vector<SolutionState>& states) {
  svg::Chart ch;
  ch.title = "cross-section boundary (blown-up coordinates)";
  ch.x_label = "x1";
  ch.y_label = "x2";
  ch.equal_aspect = true;
  for (const auto& s : states) {
    svg::Series ser;
    ser.label = "eps=" + g17(s.eps).substr(0, 8);
    ser.markers = false;
    const int n = 256;
    for (int k = 0; k <= n; ++k) {
      const double a = 2.0 * std::numbers::pi * k / n;
      const double r = 1.0 + s.shape.value(a);
      ser.x.push_back(r * std::cos(a));
      ser.y.push_back(r * std::sin(a));
    }
    ch.series.push_back(std::move(ser));
  }
  return ch;
}

int cmd_solve(const RunConfig& c, std::ostream& out) {
  if (!c.eps) throw UsageError("solve needs --eps");
  const SigmaLaw law = law_of(c);
  if (const int code = gate_sigma(c, law, out)) return code;
  const ModelParams p{c.rho, law, false};
  const SolverOptions opt = options_of(c);
  SolutionState s;
  try {
    s = newton_solve(*c.eps, p, initial_state(*c.eps, p, opt), opt);
  } catch (const ConvergenceError& e) {
    return fail(c, out, kExitNumerical, "convergence", e.what(),
                {{"residual", e.residual()}, {"iterations", e.iterations()}});
  } catch (const std::exception& e) {
    return fail(c, out, kExitNumerical, "numerical", e.what());
  }
  const std::filesystem::path dir(c.out_dir);
  std::filesystem::create_directories(dir);
  write_json(dir / "solution.json", solution_json(c, s, p));
  write_text(dir / "boundary.csv", boundary_csv(s));
  if (c.plot) svg::write((dir / "cross_section.svg").string(), cross_section_chart({s}));
  out << "eps " << g17(s.eps) << " w " << g17(s.w) << " gamma " << g17(s.gamma) << " nu "
      << g17(s.nu) << " s " << g17(s.s) << " residual " << g17(s.diag.residual_norm) << "\n";
  for (const auto& w : s.diag.warnings) out << "warning: " << w << "\n";
  return kExitOk;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  if (c.eps_grid.empty()) throw UsageError("sweep needs --eps-grid");
  const SigmaLaw law = law_of(c);
  if (const int code = gate_sigma(c, law, out)) return code;
  const ModelParams p{c.rho, law, false};
  const ContinuationResult res = continuation(c.eps_grid, p, options_of(c));

  const std::filesystem::path dir(c.out_dir);
  std::filesystem::create_directories(dir);
  std::string table = "eps,w,w_asym,gamma,gamma_asym,nu,nu_asym,s,theta_inf,theta_h5,residual\n";
  for (const auto& s : res.states) {
    const Asymptotics a = asymptotic_wgn(s.eps, p.rho, p.sigma);
    for (double v : {s.eps, s.w, a.w, s.gamma, a.gamma, s.nu, a.nu, s.s, s.diag.theta_sup,
                     s.diag.theta_hk}) {
      table += g17(v) + ',';
    }
    table += g17(s.diag.residual_norm) + '\n';
  }
  write_text(dir / "table.csv", table);
  if (c.plot && !res.states.empty()) {
    svg::Chart ch;
    ch.title = "W - W_asym";
    ch.x_label = "eps";
    ch.y_label = "W - W_asym";
    ch.log_x = true;
    svg::Series ser;
    ser.label = "W - W_asym";
    for (const auto& s : res.states) {
      ser.x.push_back(s.eps);
      ser.y.push_back(s.w - asymptotic_wgn(s.eps, p.rho, p.sigma).w);
    }
    ch.series.push_back(ser);
    svg::write((dir / "w_error.svg").string(), ch);
    svg::write((dir / "cross_section.svg").string(), cross_section_chart(res.states));
  }
  for (const auto& s : res.states) {
    for (const auto& w : s.diag.warnings) out << "warning (eps " << g17(s.eps) << "): " << w << "\n";
  }
  if (res.failure) {
    return fail(c, out, kExitNumerical, "numerical", *res.failure,
                {{"failed_eps", res.failed_eps}, {"completed", res.states.size()}});
  }
  out << "sweep: " << res.states.size() << " points written to " << (dir / "table.csv").string()
      << "\n";
  return kExitOk;
}

int cmd_check_sigma(const RunConfig& c, std::ostream& out) {
  const SigmaLaw law = law_of(c);
  SigmaReport rep;
  try {
    rep = check_sigma(law, c.rho);
  } catch (const ParameterError& e) {
    return fail(c, out, kExitRejected, "invalid_law", e.what());
  }
  Json j;
  j["params"] = params_json(c);
  j["report"] = sigma_report_json(rep);
  std::filesystem::create_directories(c.out_dir);
  write_json(std::filesystem::path(c.out_dir) / "report.json", j);
  out << j.dump() << "\n";
  return kExitOk;
}

int cmd_margin_scan(const RunConfig& c, std::ostream& out) {
  std::vector<double> grid = c.omega_c_grid;
  if (grid.empty()) grid = parse_linear_grid("0:6:61");
  const double factor = 8.0 * c.rho + 1.0 / (2.0 * std::numbers::pi * std::numbers::pi);
  Json rows = Json::array();
  Json flagged = Json::array();
  for (double wc : grid) {
    if (wc < 0.0) throw UsageError("omega must be non-negative");
    const double omega = wc / factor;
    const MarginReport m = degeneracy_margin(c.rho, omega);
    rows.push_back({{"omega_c", wc}, {"omega", omega}, {"margin", m.margin},
                    {"worst_mode", m.worst_mode}, {"degenerate", m.degenerate}});
    if (m.degenerate) flagged.push_back(wc);
  }
  Json j;
  j["rho"] = c.rho;
  j["scan"] = rows;
  j["degenerate_omega_c"] = flagged;
  std::filesystem::create_directories(c.out_dir);
  write_json(std::filesystem::path(c.out_dir) / "report.json", j);
  out << "degenerate omega_c: " << flagged.dump() << "\n";
  return kExitOk;
}

}  // namespace

std::vector<double> parse_eps_grid(const std::string& text) {
  std::vector<double> g = parse_grid(text, true);
  for (double e : g) {
    if (!(e > 0.0 && e < 1.0)) throw UsageError("eps values must lie in (0, 1)");
  }
  std::sort(g.begin(), g.end(), std::greater<>());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

std::vector<double> parse_linear_grid(const std::string& text) { return parse_grid(text, false); }

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
  RunConfig c;
  CLI::App app{"Steady thin vortex rings by spectral boundary integrals"};
  app.require_subcommand(1);
  std::string eps_grid, omega_grid;
  std::optional<double> eps;

  auto add_common = [&](CLI::App* sub, bool solving) {
    sub->add_option("--rho", c.rho, "density ratio parameter (>= 0)");
    sub->add_option("--sigma-kind", c.sigma_kind, "none | c_over_eps | c_log_over_eps | c_power")
        ->check(CLI::IsMember({"none", "c_over_eps", "c_log_over_eps", "c_power"}));
    sub->add_option("--sigma-c", c.sigma_c, "surface-tension coefficient c");
    sub->add_option("--sigma-p", c.sigma_p, "exponent for c_power, in (1, 2)");
    sub->add_option("--out", c.out_dir, "output directory");
    if (!solving) return;
    sub->add_option("--modes", c.modes, "cosine modes M")->check(CLI::Range(2, 512));
    sub->add_option("--grid", c.grid, "boundary points N (even, >= 4M)")->check(CLI::Range(8, 8192));
    sub->add_option("--tol", c.tol, "Newton tolerance on the residual max-norm")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--plot", c.plot, "write SVG plots");
    sub->add_flag("--force", c.force, "solve even if the surface-tension law is rejected");
  };
  CLI::App* solve = app.add_subcommand("solve", "single Newton solve");
  add_common(solve, true);
  solve->add_option("--eps", eps, "thin-ring parameter")->required();
  CLI::App* sweep = app.add_subcommand("sweep", "continuation over an eps grid");
  add_common(sweep, true);
  sweep->add_option("--eps-grid", eps_grid, "a:b:n (log-spaced) or comma list")->required();
  CLI::App* check = app.add_subcommand("check-sigma", "admissibility of a surface-tension law");
  add_common(check, false);
  CLI::App* scan = app.add_subcommand("margin-scan", "degeneracy margin over omega (8 rho + 1/(2 pi^2))");
  add_common(scan, false);
  scan->add_option("--omega-c-grid", omega_grid, "a:b:n (linear) or comma list");

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  c.command = app.get_subcommands().front()->get_name();
  c.eps = eps;
  if (c.eps && !(*c.eps > 0.0 && *c.eps < 1.0)) throw UsageError("--eps must lie in (0, 1)");
  if (!eps_grid.empty()) c.eps_grid = parse_eps_grid(eps_grid);
  if (!omega_grid.empty()) c.omega_c_grid = parse_linear_grid(omega_grid);
  if (!(c.rho >= 0.0)) throw UsageError("--rho must be non-negative");
  if (c.grid % 2 != 0 || c.grid < 4 * c.modes) throw UsageError("--grid must be even and >= 4 * modes");
  if (c.sigma_kind != "none" && !(c.sigma_c > 0.0)) throw UsageError("--sigma-c must be positive");
  law_of(c);
  return c;
}

int run(const RunConfig& c, std::ostream& out) {
  if (c.command == "solve") return cmd_solve(c, out);
  if (c.command == "sweep") return cmd_sweep(c, out);
  if (c.command == "check-sigma") return cmd_check_sigma(c, out);
  if (c.command == "margin-scan") return cmd_margin_scan(c, out);
  throw UsageError("unknown command '" + c.command + "'");
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  try {
    const auto parsed = parse_args(argc, argv, out);
    if (!parsed) return kExitOk;
    c = *parsed;
    return run(c, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    Json j;
    j["error"] = {{"kind", "usage"}, {"message", e.what()}, {"exit_code", kExitUsage}};
    out << j.dump() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    return fail(c, out, kExitNumerical, "internal", e.what());
  }
}

}  // namespace thinring::cli
