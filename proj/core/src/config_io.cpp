#include "axicd/config_io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <sstream>

#include "axicd/errors.hpp"
#include "json.hpp"

namespace axicd {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text, const std::string& context) {
  std::size_t b = text.find_first_not_of(" \t\r");
  std::size_t e = text.find_last_not_of(" \t\r");
  if (b == std::string::npos) fail(ErrorClass::io, context + ": empty number");
  const char* first = text.data() + b;
  const char* last = text.data() + e + 1;
  if (*first == '+') ++first;
  double v = 0.0;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    fail(ErrorClass::io, context + ": not a number: '" + text + "'");
  return v;
}

// ---------------------------------------------------------------------------
// config parsing

namespace {

using Ptree = boost::property_tree::ptree;

double get_double(const std::string& key, const std::string& v) {
  try {
    return parse_double(v, key);
  } catch (const SolverError&) {
    fail(ErrorClass::config, key + ": expected a number, got '" + v + "'");
  }
}

int get_int(const std::string& key, const std::string& v) {
  const double d = get_double(key, v);
  if (d != std::floor(d) || std::abs(d) > 1e9) fail(ErrorClass::config, key + ": expected an integer");
  return static_cast<int>(d);
}

std::vector<double> get_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(get_double(key, item));
  if (out.empty()) fail(ErrorClass::config, key + ": empty list");
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\"");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\"");
  return s.substr(b, e - b + 1);
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  Ptree pt;
  try {
    std::istringstream in(text);
    boost::property_tree::ini_parser::read_ini(in, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    fail(ErrorClass::config, std::string("config syntax: ") + e.message() + " (line " +
                                 std::to_string(e.line()) + ")");
  }
  RunConfig c;
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, std::map<std::string, Setter>> schema = {
      {"gas",
       {{"gamma", [&](auto& k, auto& v) { c.gas.gamma = get_double(k, v); }},
        {"p0", [&](auto& k, auto& v) { c.gas.p0 = get_double(k, v); }},
        {"rho0_minus", [&](auto& k, auto& v) { c.gas.rho0_minus = get_double(k, v); }},
        {"rho0_plus", [&](auto& k, auto& v) { c.gas.rho0_plus = get_double(k, v); }},
        {"u0", [&](auto& k, auto& v) { c.gas.u0 = get_double(k, v); }}}},
      {"profile",
       {{"family", [&](auto&, auto& v) { c.profile.family = trim(v); }},
        {"amp_S", [&](auto& k, auto& v) { c.profile.amp_S = get_double(k, v); }},
        {"amp_nu", [&](auto& k, auto& v) { c.profile.amp_nu = get_double(k, v); }},
        {"amp_ur", [&](auto& k, auto& v) { c.profile.amp_ur = get_double(k, v); }},
        {"epsilon", [&](auto& k, auto& v) { c.profile.epsilon = get_double(k, v); }},
        {"sigma_scale", [&](auto& k, auto& v) { c.profile.sigma_scale = get_double(k, v); }},
        {"seed",
         [&](auto& k, auto& v) {
           const int s = get_int(k, v);
           if (s < 0) fail(ErrorClass::config, k + ": must be non-negative");
           c.profile.seed = static_cast<std::uint64_t>(s);
         }},
        {"table_path", [&](auto&, auto& v) { c.profile.table_path = trim(v); }}}},
      {"grid",
       {{"L", [&](auto& k, auto& v) { c.solver.L = get_double(k, v); }},
        {"nx", [&](auto& k, auto& v) { c.solver.nx = get_int(k, v); }},
        {"nr", [&](auto& k, auto& v) { c.solver.nr = get_int(k, v); }}}},
      {"solver",
       {{"tol_inner", [&](auto& k, auto& v) { c.solver.tol_inner = get_double(k, v); }},
        {"tol_middle", [&](auto& k, auto& v) { c.solver.tol_middle = get_double(k, v); }},
        {"tol_outer", [&](auto& k, auto& v) { c.solver.tol_outer = get_double(k, v); }},
        {"max_iter_inner", [&](auto& k, auto& v) { c.solver.max_iter_inner = get_int(k, v); }},
        {"max_iter_middle", [&](auto& k, auto& v) { c.solver.max_iter_middle = get_int(k, v); }},
        {"max_iter_outer", [&](auto& k, auto& v) { c.solver.max_iter_outer = get_int(k, v); }},
        {"relax_inner", [&](auto& k, auto& v) { c.solver.relax_inner = get_double(k, v); }},
        {"relax_middle", [&](auto& k, auto& v) { c.solver.relax_middle = get_double(k, v); }},
        {"relax_outer", [&](auto& k, auto& v) { c.solver.relax_outer = get_double(k, v); }},
        {"max_wall_seconds", [&](auto& k, auto& v) { c.solver.max_wall_seconds = get_double(k, v); }},
        {"gate_flux_coeff", [&](auto& k, auto& v) { c.solver.gate_flux_coeff = get_double(k, v); }},
        {"gate_ode_coeff", [&](auto& k, auto& v) { c.solver.gate_ode_coeff = get_double(k, v); }},
        {"gate_bernoulli", [&](auto& k, auto& v) { c.solver.gate_bernoulli = get_double(k, v); }},
        {"gate_linear_residual",
         [&](auto& k, auto& v) { c.solver.gate_linear_residual = get_double(k, v); }}}},
      {"diagnostics",
       {{"windows", [&](auto& k, auto& v) { c.diagnostics.windows = get_int(k, v); }},
        {"decay_fraction", [&](auto& k, auto& v) { c.diagnostics.decay_fraction = get_double(k, v); }}}},
      {"sweep", {{"scales", [&](auto& k, auto& v) { c.sweep_scales = get_list(k, v); }}}},
      {"output", {{"dir", [&](auto&, auto& v) { c.output_dir = trim(v); }}}},
  };
  for (const auto& [section, body] : pt) {
    if (body.empty() && !body.data().empty())
      fail(ErrorClass::config, "key '" + section + "' outside of a section");
    const auto sit = schema.find(section);
    if (sit == schema.end()) fail(ErrorClass::config, "unknown section [" + section + "]");
    for (const auto& [key, node] : body) {
      const std::string path = section + "." + key;
      const auto kit = sit->second.find(key);
      if (kit == sit->second.end()) fail(ErrorClass::config, "unknown key " + path);
      kit->second(path, node.data());
    }
  }
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorClass::config, "cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig c = parse_config_text(ss.str());
  // relative table paths are taken relative to the config file
  if (c.profile.family == "table" && !c.profile.table_path.empty() &&
      fs::path(c.profile.table_path).is_relative())
    c.profile.table_path = (fs::path(path).parent_path() / c.profile.table_path).string();
  return c;
}

void validate_run_config(const RunConfig& c) {
  try {
    validate_gas(c.gas);
  } catch (const SolverError& e) {
    fail(ErrorClass::config, std::string("gas: ") + e.what());
  }
  const GasModel gm(c.gas);
  try {
    validate_profile(make_profile(c.profile, gm));
  } catch (const SolverError& e) {
    fail(ErrorClass::config, std::string("profile: ") + e.what());
  }
  validate_solver_config(c.solver);
  if (c.diagnostics.windows < 1 || c.diagnostics.windows > c.solver.nx)
    fail(ErrorClass::config, "diagnostics.windows must lie in [1, grid.nx]");
  if (!(c.diagnostics.decay_fraction > 0 && c.diagnostics.decay_fraction <= 1))
    fail(ErrorClass::config, "diagnostics.decay_fraction must lie in (0, 1]");
  for (double s : c.sweep_scales)
    if (!(s >= 0) || !std::isfinite(s)) fail(ErrorClass::config, "sweep.scales must be non-negative");
  if (c.output_dir.empty()) fail(ErrorClass::config, "output.dir must not be empty");
}

// ---------------------------------------------------------------------------
// writers

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorClass::io, "cannot write " + path);
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out = open_out(path);
  out << text;
  if (!out) fail(ErrorClass::io, "write failed: " + path);
}

json history_json(const LevelHistory& h) {
  return json{{"converged", h.converged}, {"iterations", h.iterations()}, {"changes", h.changes},
              {"ratios", h.ratios}};
}

}  // namespace

void write_fields_csv(const std::string& path, const SolutionState& s) {
  std::ofstream out = open_out(path);
  out << "x,r,phi,psi,S,Lambda,u_x,u_r,u_theta,rho,p\n";
  const ReferenceGrid& g = s.geo.grid;
  for (int i = 0; i <= g.nx; ++i) {
    for (int j = 0; j <= g.nr; ++j) {
      const double row[11] = {s.geo.x(i),    s.geo.radius(i, j), s.phi(i, j),   s.psi(i, j),
                              s.S(i, j),     s.Lambda(i, j),     s.u.ux(i, j),  s.u.ur(i, j),
                              s.u.uth(i, j), s.rho(i, j),        s.p(i, j)};
      for (int k = 0; k < 11; ++k) out << (k ? "," : "") << format_double(row[k]);
      out << '\n';
    }
  }
  if (!out) fail(ErrorClass::io, "write failed: " + path);
}

void write_free_boundary_csv(const std::string& path, const SolutionState& s) {
  std::ofstream out = open_out(path);
  out << "x,f\n";
  for (int i = 0; i <= s.geo.grid.nx; ++i)
    out << format_double(s.geo.x(i)) << ',' << format_double(s.geo.f[i]) << '\n';
  if (!out) fail(ErrorClass::io, "write failed: " + path);
}

std::string report_json(const SolveReport& r) {
  json j;
  j["converged"] = r.converged;
  j["levels_converged"] = r.levels_converged;
  j["exit_code"] = r.exit_code;
  if (r.error_class.empty()) {
    j["error"] = nullptr;
  } else {
    j["error"] = json{{"class", r.error_class}, {"message", r.error_message}, {"cause", r.error_cause}};
  }
  j["grid"] = json{{"L", r.L}, {"nx", r.nx}, {"nr", r.nr}};
  j["sigma_scale"] = r.sigma_scale;
  j["sigma_surrogate"] = r.sigma;
  json mid = json::array();
  for (const auto& m : r.middle) mid.push_back(history_json(m));
  j["iterations"] = json{{"outer", history_json(r.outer)},
                         {"middle", mid},
                         {"inner", json{{"solves", r.inner_solves},
                                        {"iterations", r.inner_iterations},
                                        {"max_ratio", r.inner_max_ratio},
                                        {"last", history_json(r.last_inner)}}}};
  j["residuals"] = json{{"elliptic_linear", r.elliptic_residual},
                        {"inner_change", r.inner_change},
                        {"middle_change", r.middle_change},
                        {"outer_change", r.outer_change},
                        {"transport_clamp", r.transport_clamp},
                        {"free_boundary_ode_max", r.ode_residual_max},
                        {"free_boundary_ode_l2", r.ode_residual_l2},
                        {"flux_balance_solver_quadrature", r.flux_balance},
                        {"anchor_drift", r.anchor_drift},
                        {"min_interface_radicand", r.min_interface_radicand}};
  j["response"] = json{{"f_deviation", r.f_deviation}, {"u_deviation", r.u_deviation}};
  json gates = json::object();
  for (const auto& [name, ok] : r.gates) gates[name] = ok;
  j["gates"] = gates;
  return j.dump(2) + "\n";
}

std::string diagnostics_json(const DiagnosticsReport& d) {
  json j;
  j["euler_residual"] = json{{"continuity", d.euler_residual[0]},
                             {"radial_momentum", d.euler_residual[1]},
                             {"entropy_transport", d.euler_residual[2]},
                             {"angular_momentum_transport", d.euler_residual[3]}};
  j["bernoulli_deviation"] = d.bernoulli_deviation;
  j["stream_bernoulli_residual"] = d.stream_bernoulli_residual;
  j["interface"] = json{{"pressure_nodal", d.interface_pressure_nodal},
                        {"pressure_trace", d.interface_pressure_trace},
                        {"normal_velocity_nodal", d.interface_normal_nodal},
                        {"normal_velocity_trace", d.interface_normal_trace}};
  j["flux_imbalance"] = json{{"max", d.flux_imbalance_max}, {"profile", d.flux_imbalance}};
  j["subsonic_margin_min"] = d.subsonic_margin_min;
  j["degeneracy_floor_ratio"] = d.degeneracy_floor_ratio;
  j["rho_min"] = d.rho_min;
  j["rho_floor_ratio"] = d.rho_floor_ratio;
  j["max_abs_Lambda"] = d.max_abs_Lambda;
  j["omega"] = json{{"two_way_agreement", d.omega_agreement},
                    {"entrance_error", d.omega_entrance_error},
                    {"axis_max", d.omega_axis_max}};
  j["free_boundary_ode"] = json{{"max", d.ode.max}, {"l2", d.ode.l2}};
  json w = json::array();
  for (const auto& s : d.windows)
    w.push_back(json{{"x0", s.x0},
                     {"x1", s.x1},
                     {"ur_max", s.ur_max},
                     {"dx_ur_max", s.dx_ur_max},
                     {"dr_ur_max", s.dr_ur_max},
                     {"ur_c1", s.ur_c1},
                     {"radial_balance", s.radial_balance},
                     {"centrifugal_max", s.centrifugal_max},
                     {"pressure_deviation", s.pressure_deviation},
                     {"omega_max", s.omega_max}});
  j["farfield"] = json{{"policy", "final window <= decay_fraction * first window"},
                       {"decay_fraction", d.decay_fraction},
                       {"ur_decay", d.ur_decay},
                       {"radial_balance_decay", d.balance_decay},
                       {"pressure_decay", d.pressure_decay},
                       {"omega_decay", d.omega_decay},
                       {"windows", w}};
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// readers

namespace {

std::vector<std::vector<double>> read_csv(const std::string& path, const std::string& header,
                                          std::size_t columns) {
  std::ifstream in(path);
  if (!in) fail(ErrorClass::io, "cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line != header)
    fail(ErrorClass::io, path + ": unexpected header");
  std::vector<std::vector<double>> rows;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
      row.push_back(parse_double(cell, path + ":" + std::to_string(n)));
    if (row.size() != columns) fail(ErrorClass::io, path + ":" + std::to_string(n) + ": wrong column count");
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

SolutionState read_solution(const std::string& dir, const SolverConfig& cfg) {
  const ReferenceGrid grid = build_reference_grid(cfg.L, cfg.nx, cfg.nr);
  const auto fb = read_csv((fs::path(dir) / "free_boundary.csv").string(), "x,f", 2);
  if (static_cast<int>(fb.size()) != grid.nx + 1)
    fail(ErrorClass::io, "free_boundary.csv does not match grid.nx");
  std::vector<double> f;
  for (const auto& row : fb) f.push_back(row[1]);
  SolutionState s;
  s.geo = metric_coefficients(FreeBoundaryCurve(cfg.L, std::move(f)), grid);
  const auto rows = read_csv((fs::path(dir) / "fields.csv").string(),
                             "x,r,phi,psi,S,Lambda,u_x,u_r,u_theta,rho,p", 11);
  if (static_cast<int>(rows.size()) != grid.nodes())
    fail(ErrorClass::io, "fields.csv does not match the grid");
  s.phi = Field2D(grid, AxisKind::even);
  s.psi = Field2D(grid, AxisKind::odd);
  s.S = Field2D(grid, AxisKind::even);
  s.Lambda = Field2D(grid, AxisKind::even);
  s.u = VelocityField{Field2D(grid, AxisKind::even), Field2D(grid, AxisKind::odd),
                      Field2D(grid, AxisKind::odd)};
  s.rho = Field2D(grid, AxisKind::even);
  s.p = Field2D(grid, AxisKind::even);
  Field2D* cols[9] = {&s.phi, &s.psi, &s.S, &s.Lambda, &s.u.ux, &s.u.ur, &s.u.uth, &s.rho, &s.p};
  for (std::size_t k = 0; k < rows.size(); ++k)
    for (int c = 0; c < 9; ++c) cols[c]->v[k] = rows[k][static_cast<std::size_t>(c) + 2];
  return s;
}

// ---------------------------------------------------------------------------
// runs

namespace {

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorClass::io, "cannot create directory " + dir + ": " + ec.message());
}

std::string timing_json(const SolveReport& r) {
  return json{{"wall_seconds", r.wall_seconds}}.dump(2) + "\n";
}

SolveResult solve_and_write(const RunConfig& c, const std::string& dir) {
  ensure_dir(dir);
  SolveResult res = solve_full(c.problem());
  const fs::path d(dir);
  if (res.state) {
    write_fields_csv((d / "fields.csv").string(), *res.state);
    write_free_boundary_csv((d / "free_boundary.csv").string(), *res.state);
  }
  write_text((d / "report.json").string(), report_json(res.report));
  if (res.diagnostics) write_text((d / "diagnostics.json").string(), diagnostics_json(*res.diagnostics));
  write_text((d / "timing.json").string(), timing_json(res.report));
  return res;
}

}  // namespace

int run_and_write(const RunConfig& c, const std::string& dir) {
  try {
    validate_run_config(c);
    return solve_and_write(c, dir).report.exit_code;
  } catch (const SolverError& e) {
    return exit_code_for(e.error_class());
  }
}

int run_sweep(const RunConfig& c, const std::string& dir) {
  validate_run_config(c);
  ensure_dir(dir);
  std::vector<std::future<SolveResult>> jobs;
  std::vector<std::string> names;
  for (double s : c.sweep_scales) {
    RunConfig rc = c;
    rc.profile.sigma_scale = s;
    const std::string sub = (fs::path(dir) / ("scale_" + format_double(s))).string();
    names.push_back(sub);
    jobs.push_back(std::async(std::launch::async, [rc, sub] { return solve_and_write(rc, sub); }));
  }
  std::ostringstream table;
  table << "sigma_scale,sigma_surrogate,converged,exit_code,error_class,f_deviation,u_deviation,"
           "outer_iterations\n";
  int code = 0;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const SolveResult res = jobs[k].get();
    const SolveReport& r = res.report;
    table << format_double(c.sweep_scales[k]) << ',' << format_double(r.sigma) << ','
          << (r.converged ? "true" : "false") << ',' << r.exit_code << ',' << r.error_class << ','
          << format_double(r.f_deviation) << ',' << format_double(r.u_deviation) << ','
          << r.outer.iterations() << '\n';
    if (code == 0 && r.exit_code != 0) code = r.exit_code;
  }
  write_text((fs::path(dir) / "sweep_summary.csv").string(), table.str());
  return code;
}

int run_diagnose(const RunConfig& c, const std::string& run_dir, const std::string& out_dir) {
  validate_run_config(c);
  const GasModel gm(c.gas);
  const EntranceProfile profile = make_profile(c.profile, gm);
  const SolutionState s = read_solution(run_dir, c.solver);
  const DiagnosticsReport d = full_diagnostics(gm, profile, s, c.diagnostics);
  ensure_dir(out_dir);
  write_text((fs::path(out_dir) / "diagnostics.json").string(), diagnostics_json(d));
  return 0;
}

}  // namespace axicd
