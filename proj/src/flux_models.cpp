#include "cvxfem/flux_models.hpp"

#include <algorithm>
#include <cmath>

namespace cvxfem {

FluxModel FluxModel::linear_advection(VelocityField velocity) {
  if (!velocity) throw Error("linear advection needs a velocity field");
  FluxModel m;
  m.kind_ = ModelKind::LinearAdvection;
  m.velocity_ = std::move(velocity);
  return m;
}

FluxModel FluxModel::burgers() {
  FluxModel m;
  m.kind_ = ModelKind::Burgers;
  return m;
}

FluxModel FluxModel::euler(double gamma) {
  if (!(gamma > 1.0)) throw Error("Euler model needs gamma > 1");
  FluxModel m;
  m.kind_ = ModelKind::Euler;
  m.gamma_ = gamma;
  return m;
}

Vec2 FluxModel::velocity(const Vec2& x) const {
  return kind_ == ModelKind::LinearAdvection ? velocity_(x) : Vec2{0.0, 0.0};
}

Flux FluxModel::flux_frozen(const State& u, const Vec2& v) const {
  Flux f;
  switch (kind_) {
    case ModelKind::LinearAdvection:
      f.x[0] = v[0] * u[0];
      f.y[0] = v[1] * u[0];
      break;
    case ModelKind::Burgers:
      f.x[0] = f.y[0] = 0.5 * u[0] * u[0];
      break;
    case ModelKind::Euler: {
      if (!(u[0] > 0.0)) throw InadmissibleState("Euler flux at nonpositive density");
      const double vx = u[1] / u[0], vy = u[2] / u[0];
      const double p = pressure(u);
      f.x = {u[1], u[1] * vx + p, u[2] * vx, (u[3] + p) * vx};
      f.y = {u[2], u[1] * vy, u[2] * vy + p, (u[3] + p) * vy};
      break;
    }
  }
  return f;
}

double FluxModel::max_wave_speed(const State& ul, const State& ur, const Vec2& n,
                                 const Vec2& v) const {
  switch (kind_) {
    case ModelKind::LinearAdvection:
      return std::abs(dot(v, n));
    case ModelKind::Burgers:
      // f'(u).n = u (n1 + n2) is monotone in u, so the extreme speed sits at an endpoint.
      return std::max(std::abs(ul[0]), std::abs(ur[0])) * std::abs(n[0] + n[1]);
    case ModelKind::Euler:
      return euler_wave_speed(ul, ur, n);
  }
  return 0.0;
}

double FluxModel::euler_wave_speed(const State& ul, const State& ur, const Vec2& n) const {
  const auto wl = primitives(ul);
  const auto wr = primitives(ur);
  if (!(wl.p > 0.0) || !(wr.p > 0.0)) {
    throw InadmissibleState("wave speed requested for a state with nonpositive pressure");
  }
  const double unl = dot(wl.v, n), unr = dot(wr.v, n);
  const double simple = std::max(std::abs(unl) + wl.c, std::abs(unr) + wr.c);
  if (estimate_ == WaveSpeedEstimate::Simple) return simple;

  const double g = gamma_;
  const double expo = (g - 1.0) / (2.0 * g);
  const double num = wl.c + wr.c - 0.5 * (g - 1.0) * (unr - unl);
  double p_star = 0.0;
  if (num > 0.0) {
    const double den = wl.c * std::pow(wl.p, -expo) + wr.c * std::pow(wr.p, -expo);
    p_star = std::pow(num / den, 1.0 / expo);
  }
  const double k = (g + 1.0) / (2.0 * g);
  const double lambda_l = unl - wl.c * std::sqrt(1.0 + k * std::max(0.0, (p_star - wl.p) / wl.p));
  const double lambda_r = unr + wr.c * std::sqrt(1.0 + k * std::max(0.0, (p_star - wr.p) / wr.p));
  return std::max({simple, -lambda_l, lambda_r});
}

bool FluxModel::admissible(const State& u, double slack, const AdmissibleSet& set) const {
  for (int k = 0; k < m(); ++k) {
    if (!std::isfinite(u[k])) return false;
  }
  if (kind_ != ModelKind::Euler) return u[0] >= set.u_min - slack && u[0] <= set.u_max + slack;
  if (u[0] < -slack) return false;
  if (!(u[0] > 0.0)) return u[1] == 0.0 && u[2] == 0.0 && u[3] >= -slack;
  return internal_energy_density(u) >= -slack;
}

double FluxModel::internal_energy_density(const State& u) const {
  return u[3] - 0.5 * (u[1] * u[1] + u[2] * u[2]) / u[0];
}

double FluxModel::pressure(const State& u) const {
  return (gamma_ - 1.0) * internal_energy_density(u);
}

EulerPrimitives FluxModel::primitives(const State& u) const {
  if (!(u[0] > 0.0)) throw InadmissibleState("nonpositive density " + std::to_string(u[0]));
  EulerPrimitives w;
  w.rho = u[0];
  w.v = {u[1] / u[0], u[2] / u[0]};
  w.p = pressure(u);
  w.c = std::sqrt(gamma_ * std::max(w.p, 0.0) / w.rho);
  return w;
}

State FluxModel::conserved(const EulerPrimitives& w) const {
  return {w.rho, w.rho * w.v[0], w.rho * w.v[1],
          w.p / (gamma_ - 1.0) + 0.5 * w.rho * (w.v[0] * w.v[0] + w.v[1] * w.v[1])};
}

std::string FluxModel::name() const {
  switch (kind_) {
    case ModelKind::LinearAdvection:
      return "advection";
    case ModelKind::Burgers:
      return "burgers";
    case ModelKind::Euler:
      return "euler";
  }
  return "unknown";
}

}  // namespace cvxfem
