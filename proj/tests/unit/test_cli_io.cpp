#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "axicd/config_io.hpp"
#include "axicd/errors.hpp"

using namespace axicd;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
  const char* env = std::getenv("AXICD_TEST_TMP");
  const fs::path base = env ? fs::path(env) : fs::temp_directory_path() / "axicd_tests";
  const fs::path p = base / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_error(const std::string& text) {
  try {
    validate_run_config(parse_config_text(text));
  } catch (const SolverError& e) {
    CHECK(e.error_class() == ErrorClass::config);
    return e.what();
  }
  return {};
}

const char* kSmall = R"(
[grid]
L = 2
nx = 32
nr = 32
[profile]
sigma_scale = 1e-3
)";
}  // namespace

TEST_CASE("an empty config fills defaults and validates") {
  const RunConfig c = parse_config_text("");
  CHECK_NOTHROW(validate_run_config(c));
  CHECK(c.solver.nx == 64);
  CHECK(c.gas.gamma == 1.4);
  CHECK(c.sweep_scales.size() == 3u);
}

TEST_CASE("config values land in the right fields") {
  const RunConfig c = parse_config_text(R"(
[gas]
gamma = 1.3
u0 = 0.25
[profile]
family = random
seed = 11
[grid]
nx = 48
[solver]
tol_outer = 1e-7
[diagnostics]
windows = 8
[sweep]
scales = 1e-3, 3e-3
[output]
dir = somewhere
)");
  CHECK(c.gas.gamma == 1.3);
  CHECK(c.gas.u0 == 0.25);
  CHECK(c.profile.family == "random");
  CHECK(c.profile.seed == 11u);
  CHECK(c.solver.nx == 48);
  CHECK(c.solver.tol_outer == 1e-7);
  CHECK(c.diagnostics.windows == 8);
  CHECK(c.sweep_scales == std::vector<double>{1e-3, 3e-3});
  CHECK(c.output_dir == "somewhere");
}

TEST_CASE("unknown keys and sections are rejected with their path") {
  CHECK(config_error("[gas]\ngama = 1.4\n").find("gas.gama") != std::string::npos);
  CHECK(config_error("[gass]\nx = 1\n").find("gass") != std::string::npos);
  CHECK(config_error("[grid]\nnx = many\n").find("grid.nx") != std::string::npos);
  CHECK(config_error("[grid]\nnx = 32.5\n").find("grid.nx") != std::string::npos);
}

TEST_CASE("supersonic inflow is reported as a subsonicity violation") {
  const double c0 = std::sqrt(1.4);
  const std::string msg = config_error("[gas]\nu0 = " + std::to_string(2 * c0) + "\n");
  CHECK(msg.find("subsonic") != std::string::npos);
}

TEST_CASE("invariant violations are explained") {
  CHECK(config_error("[solver]\nrelax_inner = 0\n").find("relax") != std::string::npos);
  CHECK(config_error("[profile]\nfamily = spiral\n").find("spiral") != std::string::npos);
  CHECK(config_error("[diagnostics]\ndecay_fraction = 2\n").find("decay_fraction") != std::string::npos);
}

TEST_CASE("number formatting round-trips exactly") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 2000; ++k) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(u(rng) * 30));
    CHECK(parse_double(format_double(v), "test") == v);
  }
  CHECK(format_double(1.0) == "1");
  CHECK_THROWS_AS(parse_double("1.0x", "test"), SolverError);
}

TEST_CASE("background run writes u_r = 0 and p = 1 on every row") {
  RunConfig c = parse_config_text("[profile]\nfamily = background\n[grid]\nL = 2\nnx = 32\nnr = 32\n");
  const fs::path dir = scratch("background");
  CHECK(run_and_write(c, dir.string()) == 0);
  std::ifstream in(dir / "fields.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,r,phi,psi,S,Lambda,u_x,u_r,u_theta,rho,p");
  int rows = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 11u);
    CHECK(parse_double(cells[7], "u_r") == 0.0);
    CHECK(parse_double(cells[10], "p") == 1.0);
    ++rows;
  }
  CHECK(rows == 33 * 33);
  CHECK(fs::exists(dir / "free_boundary.csv"));
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "diagnostics.json"));
}

TEST_CASE("fields round-trip bit for bit and diagnostics regenerate identically") {
  const RunConfig c = parse_config_text(kSmall);
  const fs::path dir = scratch("roundtrip");
  REQUIRE(run_and_write(c, dir.string()) == 0);
  const ProblemSpec spec = c.problem();
  const SolveResult res = solve_full(spec);
  REQUIRE(res.state);
  const SolutionState back = read_solution(dir.string(), c.solver);
  CHECK(back.phi.v == res.state->phi.v);
  CHECK(back.psi.v == res.state->psi.v);
  CHECK(back.S.v == res.state->S.v);
  CHECK(back.Lambda.v == res.state->Lambda.v);
  CHECK(back.u.ux.v == res.state->u.ux.v);
  CHECK(back.rho.v == res.state->rho.v);
  CHECK(back.p.v == res.state->p.v);
  CHECK(back.geo.f.samples() == res.state->geo.f.samples());

  const std::string before = slurp(dir / "diagnostics.json");
  const fs::path again = scratch("rediagnosed");
  CHECK(run_diagnose(c, dir.string(), again.string()) == 0);
  CHECK(slurp(again / "diagnostics.json") == before);

  // reports are deterministic across runs
  const fs::path dir2 = scratch("roundtrip2");
  REQUIRE(run_and_write(c, dir2.string()) == 0);
  CHECK(slurp(dir2 / "report.json") == slurp(dir / "report.json"));
  CHECK(slurp(dir2 / "fields.csv") == slurp(dir / "fields.csv"));
}

TEST_CASE("sweep writes one directory per scale and a summary table") {
  const RunConfig c = parse_config_text(std::string(kSmall) + "[sweep]\nscales = 1e-3, 2e-3, 4e-3\n");
  const fs::path dir = scratch("sweep");
  CHECK(run_sweep(c, dir.string()) == 0);
  int subdirs = 0;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_directory()) {
      ++subdirs;
      CHECK(fs::exists(e.path() / "report.json"));
    }
  CHECK(subdirs == 3);
  std::ifstream in(dir / "sweep_summary.csv");
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("failed runs still write a report and map to a nonzero exit code") {
  RunConfig c = parse_config_text("[profile]\nsigma_scale = 0.5\n[grid]\nnx = 32\nnr = 32\n");
  const fs::path dir = scratch("diverged");
  const int code = run_and_write(c, dir.string());
  CHECK(code == exit_code_for(ErrorClass::inner_divergence));
  const std::string report = slurp(dir / "report.json");
  CHECK(report.find("\"class\": \"") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "fields.csv"));
}
