#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "axicd/entrance_profile.hpp"
#include "axicd/errors.hpp"
#include "axicd/interp.hpp"

using namespace axicd;

TEST_CASE("monotone cubic interpolates and inverts") {
  std::vector<double> x, y;
  for (int k = 0; k <= 10; ++k) {
    x.push_back(0.1 * k);
    y.push_back(std::exp(x.back()));
  }
  const MonotoneCubic m(x, y);
  CHECK(m.strictly_increasing());
  for (int k = 0; k <= 10; ++k) CHECK(m(x[k]) == doctest::Approx(y[k]));
  CHECK(m(0.55) == doctest::Approx(std::exp(0.55)).epsilon(1e-4));
  CHECK(m.inverse(std::exp(0.55)) == doctest::Approx(0.55).epsilon(1e-4));
  CHECK(m(-1.0) == y.front());
}

TEST_CASE("four-point Lagrange interpolation is exact for cubics") {
  std::vector<double> v;
  auto p = [](double t) { return 1 - t + 2 * t * t - 0.5 * t * t * t; };
  for (int k = 0; k <= 10; ++k) v.push_back(p(0.2 * k));
  for (double t : {0.0, 0.13, 1.01, 1.99, 2.0}) CHECK(lagrange4_uniform(v.data(), 11, 0.2, t) == doctest::Approx(p(t)));
}

TEST_CASE("every built-in family satisfies the entrance conditions") {
  const GasModel gm;
  for (const char* fam : {"bump", "random", "background"}) {
    ProfileSpec s;
    s.family = fam;
    const EntranceProfile p = make_profile(s, gm);
    CHECK_NOTHROW(validate_profile(p));
    CHECK(p.ur_en(0.5 - s.epsilon) == 0.0);
  }
}

TEST_CASE("sigma surrogate scales linearly with the perturbation scale") {
  const GasModel gm;
  ProfileSpec s;
  s.sigma_scale = 1e-3;
  const double a = sigma_surrogate(make_profile(s, gm));
  s.sigma_scale = 2e-3;
  const double b = sigma_surrogate(make_profile(s, gm));
  CHECK(a > 0.0);
  CHECK(b / a == doctest::Approx(2.0).epsilon(1e-9));
  s.family = "background";
  CHECK(sigma_surrogate(make_profile(s, gm)) == 0.0);
}

TEST_CASE("entrance potential integrates the radial speed from r = 1/2") {
  const GasModel gm;
  ProfileSpec s;
  s.sigma_scale = 1e-2;
  const EntranceProfile p = make_profile(s, gm);
  CHECK(entrance_potential(p, 0.5) == 0.0);
  const double r = 0.2, d = 1e-5;
  const double deriv = (entrance_potential(p, r + d) - entrance_potential(p, r - d)) / (2 * d);
  CHECK(deriv == doctest::Approx(p.ur_en(r)).epsilon(1e-6));
}

TEST_CASE("random family is reproducible per seed") {
  const GasModel gm;
  ProfileSpec s;
  s.family = "random";
  s.seed = 7;
  const EntranceProfile a = make_profile(s, gm), b = make_profile(s, gm);
  s.seed = 8;
  const EntranceProfile c = make_profile(s, gm);
  CHECK(a.S_en(0.3) == b.S_en(0.3));
  CHECK(a.S_en(0.3) != c.S_en(0.3));
}

TEST_CASE("table profile with radial speed inside the support band is rejected") {
  const GasModel gm;
  const std::string path = "axicd_bad_profile.txt";
  {
    std::ofstream out(path);
    out << "# r S nu ur\n";
    for (int k = 0; k <= 20; ++k) {
      const double r = 0.025 * k;
      out << r << ' ' << gm.bg.S0_minus << ' ' << 0.0 << ' ' << 1e-3 * r * r << '\n';
    }
  }
  try {
    validate_profile(read_profile_table(path, 0.05, gm.bg.S0_minus, 1.0));
    FAIL("support violation accepted");
  } catch (const SolverError& e) {
    CHECK(e.error_class() == ErrorClass::config);
    CHECK(std::string(e.what()).find("support") != std::string::npos);
  }
  std::remove(path.c_str());
}
