#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "axicd/gas_state.hpp"

namespace axicd {

/// How an entrance profile is generated. sigma_scale multiplies the
/// perturbation away from the background for every family.
struct ProfileSpec {
  std::string family = "bump";  // bump | random | table | background
  double amp_S = 1.0;           // relative entropy perturbation
  double amp_nu = 1.0;          // swirl speed in units of u0
  double amp_ur = 1.0;          // radial speed in units of u0
  double epsilon = 0.05;        // u_r^en vanishes for r >= 1/2 - epsilon
  double sigma_scale = 1e-3;
  std::uint64_t seed = 1;
  std::string table_path;       // family == table: columns r S nu ur
};

/// Radial entrance data on [0, 1/2]: entropy, swirl speed, radial speed.
struct EntranceProfile {
  std::function<double(double)> S_en;
  std::function<double(double)> nu_en;
  std::function<double(double)> ur_en;
  double epsilon = 0.05;
  double sigma = 0.0;  // discrete surrogate smallness measure
  double S0 = 1.0;     // background entropy the perturbation is measured from
  std::string family;

  double Lambda_en(double r) const { return r * nu_en(r); }
};

EntranceProfile make_profile(const ProfileSpec& spec, const GasModel& gm);

/// Profile from sampled columns, interpolated monotone-cubically.
EntranceProfile profile_from_table(const std::vector<double>& r, const std::vector<double>& S,
                                   const std::vector<double>& nu, const std::vector<double>& ur,
                                   double epsilon, double S0, double scale = 1.0);

/// Reads "r S nu ur" rows (whitespace or comma separated, '#' comments).
EntranceProfile read_profile_table(const std::string& path, double epsilon, double S0,
                                   double scale);

/// Max of sampled values plus first and second difference quotients of
/// S_en - S0 and nu_en, values and first differences of ur_en.
double sigma_surrogate(const EntranceProfile& p, int samples = 200);

/// Throws SolverError(config) naming the violated condition.
void validate_profile(const EntranceProfile& p);

/// Entrance potential: integral of ur_en from 1/2 to r.
double entrance_potential(const EntranceProfile& p, double r);

}  // namespace axicd
