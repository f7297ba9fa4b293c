#include "axicd/entrance_profile.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include "axicd/errors.hpp"
#include "axicd/interp.hpp"

namespace axicd {

namespace {

constexpr double kPi = std::numbers::pi;

// Smooth radial shape with g(0)=0, C^2 cutoff at R, unit maximum.
double cutoff_shape(double r, double R) {
  if (r >= R) return 0.0;
  const double t = r / R;
  const double s = 1.0 - t * t;
  static const double peak = (1.0 / std::sqrt(7.0)) * std::pow(6.0 / 7.0, 3);
  return t * s * s * s / peak;
}

}  // namespace

EntranceProfile make_profile(const ProfileSpec& spec, const GasModel& gm) {
  const double S0 = gm.bg.S0_minus;
  const double u0 = gm.gas.u0;
  const double s = spec.sigma_scale;
  const double R = 0.5 - spec.epsilon;
  EntranceProfile p;
  p.epsilon = spec.epsilon;
  p.S0 = S0;
  p.family = spec.family;

  if (spec.family == "background") {
    p.S_en = [S0](double) { return S0; };
    p.nu_en = [](double) { return 0.0; };
    p.ur_en = [](double) { return 0.0; };
  } else if (spec.family == "bump") {
    const double aS = s * spec.amp_S, anu = s * spec.amp_nu * u0, aur = s * spec.amp_ur * u0;
    p.S_en = [=](double r) { return S0 * (1.0 + aS * std::cos(2.0 * kPi * r)); };
    p.nu_en = [=](double r) { return anu * 4.0 * r * r; };
    p.ur_en = [=](double r) { return aur * cutoff_shape(r, R); };
  } else if (spec.family == "random") {
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double a[3], b[2], c[2];
    for (double& v : a) v = U(rng);
    for (double& v : b) v = U(rng);
    for (double& v : c) v = U(rng);
    const double aS = s * spec.amp_S, anu = s * spec.amp_nu * u0, aur = s * spec.amp_ur * u0;
    p.S_en = [=](double r) {
      double acc = 0.0;
      for (int k = 1; k <= 3; ++k) acc += a[k - 1] * std::cos(2.0 * kPi * k * r) / (k * k);
      return S0 * (1.0 + aS * acc);
    };
    p.nu_en = [=](double r) {
      const double y = 4.0 * r * r;
      return anu * y * (b[0] + b[1] * y);
    };
    p.ur_en = [=](double r) { return aur * cutoff_shape(r, R) * (c[0] + c[1] * r / R); };
  } else if (spec.family == "table") {
    p = read_profile_table(spec.table_path, spec.epsilon, S0, s);
  } else {
    fail(ErrorClass::config, "profile.family: unknown family '" + spec.family + "'");
  }
  p.sigma = sigma_surrogate(p);
  return p;
}

EntranceProfile profile_from_table(const std::vector<double>& r, const std::vector<double>& S,
                                   const std::vector<double>& nu, const std::vector<double>& ur,
                                   double epsilon, double S0, double scale) {
  const std::size_t n = r.size();
  if (n < 4 || S.size() != n || nu.size() != n || ur.size() != n)
    fail(ErrorClass::config, "profile table: need at least 4 rows of r S nu ur");
  if (r.front() != 0.0 || std::abs(r.back() - 0.5) > 1e-12)
    fail(ErrorClass::config, "profile table: r must span [0, 1/2]");
  std::vector<double> Ss(n), nus(n), urs(n);
  for (std::size_t k = 0; k < n; ++k) {
    Ss[k] = S0 + scale * (S[k] - S0);
    nus[k] = scale * nu[k];
    urs[k] = scale * ur[k];
  }
  EntranceProfile p;
  p.epsilon = epsilon;
  p.S0 = S0;
  p.family = "table";
  try {
    auto iS = std::make_shared<MonotoneCubic>(r, Ss);
    auto inu = std::make_shared<MonotoneCubic>(r, nus);
    auto iur = std::make_shared<MonotoneCubic>(r, urs);
    p.S_en = [iS](double x) { return (*iS)(x); };
    p.nu_en = [inu](double x) { return (*inu)(x); };
    p.ur_en = [iur](double x) { return (*iur)(x); };
  } catch (const std::invalid_argument& e) {
    fail(ErrorClass::config, std::string("profile table: ") + e.what());
  }
  p.sigma = sigma_surrogate(p);
  return p;
}

EntranceProfile read_profile_table(const std::string& path, double epsilon, double S0,
                                   double scale) {
  std::ifstream in(path);
  if (!in) fail(ErrorClass::io, "cannot open profile table '" + path + "'");
  std::vector<double> r, S, nu, ur;
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double a, b, c, d;
    if (!(ls >> a)) continue;
    if (!(ls >> b >> c >> d)) fail(ErrorClass::config, "profile table: malformed row '" + line + "'");
    r.push_back(a);
    S.push_back(b);
    nu.push_back(c);
    ur.push_back(d);
  }
  return profile_from_table(r, S, nu, ur, epsilon, S0, scale);
}

double sigma_surrogate(const EntranceProfile& p, int samples) {
  const double h = 0.5 / samples;
  std::vector<double> s(samples + 1), v(samples + 1), u(samples + 1);
  for (int k = 0; k <= samples; ++k) {
    const double r = k * h;
    s[k] = p.S_en(r) - p.S0;
    v[k] = p.nu_en(r);
    u[k] = p.ur_en(r);
  }
  auto norms = [&](const std::vector<double>& a, int order) {
    double d0 = 0, d1 = 0, d2 = 0;
    for (int k = 0; k <= samples; ++k) d0 = std::max(d0, std::abs(a[k]));
    for (int k = 0; k < samples; ++k) d1 = std::max(d1, std::abs(a[k + 1] - a[k]) / h);
    if (order >= 2)
      for (int k = 1; k < samples; ++k)
        d2 = std::max(d2, std::abs(a[k + 1] - 2 * a[k] + a[k - 1]) / (h * h));
    return d0 + d1 + d2;
  };
  return norms(s, 2) + norms(v, 2) + norms(u, 1);
}

void validate_profile(const EntranceProfile& p) {
  if (!(p.epsilon > 0.0 && p.epsilon < 0.1))
    fail(ErrorClass::config, "profile.epsilon must lie in (0, 1/10)");
  const int n = 400;
  double scale_S = 0, scale_nu = 0, scale_ur = 0;
  for (int k = 0; k <= n; ++k) {
    const double r = 0.5 * k / n;
    const double S = p.S_en(r);
    if (!(S > 0.0) || !std::isfinite(S)) fail(ErrorClass::config, "profile: S_en must be positive");
    scale_S = std::max(scale_S, std::abs(S - p.S0));
    scale_nu = std::max(scale_nu, std::abs(p.nu_en(r)));
    scale_ur = std::max(scale_ur, std::abs(p.ur_en(r)));
  }
  // support condition for the entrance radial speed
  for (int k = 0; k <= n; ++k) {
    const double r = (0.5 - p.epsilon) + p.epsilon * k / n;
    if (std::abs(p.ur_en(r)) > 1e-14 * (1.0 + scale_ur)) {
      std::ostringstream os;
      os << "support condition violated: u_r^en(" << r << ") = " << p.ur_en(r)
         << " but must vanish for r >= 1/2 - epsilon";
      fail(ErrorClass::config, os.str());
    }
  }
  if (p.ur_en(0.0) != 0.0) fail(ErrorClass::config, "axis compatibility: u_r^en(0) must be 0");
  if (std::abs(p.nu_en(0.0)) > 1e-14 * (1.0 + scale_nu))
    fail(ErrorClass::config, "axis compatibility: nu_en(0) must be 0");
  const double d = 1e-5;
  const double dS = (p.S_en(d) - p.S_en(0.0)) / d;
  const double dnu = (p.nu_en(d) - p.nu_en(0.0)) / d;
  if (std::abs(dS) > 1e-8 + 1e-3 * scale_S)
    fail(ErrorClass::config, "compatibility: dS_en/dr must vanish at r = 0");
  if (std::abs(dnu) > 1e-8 + 1e-3 * scale_nu)
    fail(ErrorClass::config, "compatibility: dnu_en/dr must vanish at r = 0");
}

double entrance_potential(const EntranceProfile& p, double r) {
  if (r == 0.5) return 0.0;
  auto g = [&](double t) { return p.ur_en(t); };
  return -boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, r, 0.5, 12, 1e-15);
}

}  // namespace axicd
