#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "cvxfem/types.hpp"

namespace cvxfem {

enum class RkScheme { Euler, Ssp2, Ssp3 };

struct TimeControls {
  double cfl = 0.5;
  double t_end = 1.0;
  RkScheme scheme = RkScheme::Ssp2;
  double dt_max = std::numeric_limits<double>::infinity();
};

/// dt = cfl * min_i m_i / (2 sum_{e in E_i} d^e), capped by dt_max and
/// truncated so the step ends exactly at t_end. `viscosity_sums` holds the
/// per-node sums of all viscosity coefficients (element and boundary).
double compute_dt(const std::vector<double>& lumped_mass, const std::vector<double>& viscosity_sums,
                  const TimeControls& controls, double t);

/// Largest step satisfying 2 dt / m_i * sum d <= 1 at every node.
double cfl_limit(const std::vector<double>& lumped_mass, const std::vector<double>& viscosity_sums);

inline double value_norm(double v) { return std::abs(v); }
inline bool is_finite(double v) { return std::isfinite(v); }
inline bool is_finite(const State& s) {
  return std::isfinite(s[0]) && std::isfinite(s[1]) && std::isfinite(s[2]) && std::isfinite(s[3]);
}

template <class Vec>
Vec combine(double a, const Vec& x, double b, const Vec& y) {
  Vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = a * x[i] + b * y[i];
  return r;
}

template <class Vec>
void check_finite(const Vec& u, int stage, double t) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!is_finite(u[i])) {
      throw Error("non-finite value at node " + std::to_string(i) + " after stage " +
                  std::to_string(stage) + " (t = " + std::to_string(t) + ")");
    }
  }
}

/// One SSP Runge-Kutta step in Shu-Osher form. `step_map(u, dt, t)` is a
/// forward-Euler stage (for FCT the full predictor-corrector step), so
/// every stage result is a convex combination of forward-Euler results.
/// `observer(stage, u)` sees every stage result.
template <class Vec, class StepMap>
Vec ssp_rk_step(RkScheme scheme, StepMap&& step_map, const Vec& u, double dt, double t,
                const std::function<void(int, const Vec&)>& observer = {}) {
  const auto stage = [&](int k, Vec v) {
    check_finite(v, k, t);
    if (observer) observer(k, v);
    return v;
  };
  switch (scheme) {
    case RkScheme::Euler:
      return stage(1, step_map(u, dt, t));
    case RkScheme::Ssp2: {
      const Vec u1 = stage(1, step_map(u, dt, t));
      return stage(2, combine(0.5, u, 0.5, step_map(u1, dt, t + dt)));
    }
    case RkScheme::Ssp3: {
      const Vec u1 = stage(1, step_map(u, dt, t));
      const Vec u2 = stage(2, combine(0.75, u, 0.25, step_map(u1, dt, t + dt)));
      return stage(3, combine(1.0 / 3.0, u, 2.0 / 3.0, step_map(u2, dt, t + 0.5 * dt)));
    }
  }
  return u;
}

RkScheme parse_rk_scheme(const std::string& name);
std::string to_string(RkScheme scheme);

}  // namespace cvxfem
