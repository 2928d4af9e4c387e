#include "cvxfem/time_integration.hpp"

namespace cvxfem {

double cfl_limit(const std::vector<double>& lumped_mass, const std::vector<double>& viscosity_sums) {
  double dt = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lumped_mass.size(); ++i) {
    if (viscosity_sums[i] > 0.0) dt = std::min(dt, lumped_mass[i] / (2.0 * viscosity_sums[i]));
  }
  return dt;
}

double compute_dt(const std::vector<double>& lumped_mass, const std::vector<double>& viscosity_sums,
                  const TimeControls& controls, double t) {
  if (!(controls.cfl > 0.0) || controls.cfl > 1.0) {
    throw Error("CFL number must lie in (0, 1], got " + std::to_string(controls.cfl));
  }
  double dt = std::min(controls.cfl * cfl_limit(lumped_mass, viscosity_sums), controls.dt_max);
  if (std::isinf(dt)) throw Error("no wave speed bounds the time step and dt_max is not set");
  const double remaining = controls.t_end - t;
  if (remaining > 0.0 && dt >= remaining) dt = remaining;
  if (!(dt > 0.0)) throw Error("nonpositive time step " + std::to_string(dt));
  return dt;
}

RkScheme parse_rk_scheme(const std::string& name) {
  if (name == "euler") return RkScheme::Euler;
  if (name == "ssp2") return RkScheme::Ssp2;
  if (name == "ssp3") return RkScheme::Ssp3;
  throw ConfigError("unknown rk scheme '" + name + "' (valid: euler, ssp2, ssp3)");
}

std::string to_string(RkScheme scheme) {
  switch (scheme) {
    case RkScheme::Euler:
      return "euler";
    case RkScheme::Ssp2:
      return "ssp2";
    case RkScheme::Ssp3:
      return "ssp3";
  }
  return "?";
}

}  // namespace cvxfem
