#pragma once

#include <functional>
#include <limits>
#include <string>

#include "cvxfem/types.hpp"

namespace cvxfem {

enum class ModelKind { LinearAdvection, Burgers, Euler };

/// Estimator for the maximum wave speed of a 1D Riemann problem.
///   Simple:     max(|v_l.n| + c_l, |v_r.n| + c_r) for Euler.
///   Guaranteed: additionally bounded by the two-rarefaction estimate of the
///               intermediate pressure, which is an upper bound for 1 < gamma <= 5/3.
/// Scalar models ignore the choice: their bound is exact.
enum class WaveSpeedEstimate { Simple, Guaranteed };

using VelocityField = std::function<Vec2(const Vec2&)>;

struct EulerPrimitives {
  double rho = 0.0;
  Vec2 v{};
  double p = 0.0;
  double c = 0.0;
};

/// Global admissible set. For scalar models it is the interval
/// [u_min, u_max]; for Euler it is {rho > 0, rho*e > 0} and the interval is
/// ignored.
struct AdmissibleSet {
  double u_min = -std::numeric_limits<double>::infinity();
  double u_max = std::numeric_limits<double>::infinity();
};

class FluxModel {
 public:
  static FluxModel linear_advection(VelocityField velocity);
  static FluxModel burgers();
  static FluxModel euler(double gamma);

  ModelKind kind() const { return kind_; }
  /// Number of conserved components.
  int m() const { return kind_ == ModelKind::Euler ? 4 : 1; }
  double gamma() const { return gamma_; }
  bool is_system() const { return kind_ == ModelKind::Euler; }

  WaveSpeedEstimate wave_speed_estimate() const { return estimate_; }
  void set_wave_speed_estimate(WaveSpeedEstimate e) { estimate_ = e; }

  /// Advection velocity at a point; zero for the nonlinear models.
  Vec2 velocity(const Vec2& x) const;

  /// f(u) at position x.
  Flux flux(const State& u, const Vec2& x) const { return flux_frozen(u, velocity(x)); }
  /// f(u) with the advection velocity supplied directly. Elements freeze the
  /// velocity at one value so that all element integrals stay exact.
  Flux flux_frozen(const State& u, const Vec2& velocity) const;

  /// Upper bound for the wave speeds of the Riemann problem with flux f.n
  /// and states (ul, ur); n must be a unit vector.
  double max_wave_speed(const State& ul, const State& ur, const Vec2& n,
                        const Vec2& velocity = {0.0, 0.0}) const;

  bool admissible(const State& u, double slack, const AdmissibleSet& set = {}) const;

  EulerPrimitives primitives(const State& u) const;
  State conserved(const EulerPrimitives& w) const;
  double pressure(const State& u) const;
  /// Internal energy density rho*e = E - |m|^2 / (2 rho).
  double internal_energy_density(const State& u) const;

  std::string name() const;

 private:
  ModelKind kind_ = ModelKind::LinearAdvection;
  double gamma_ = 1.4;
  VelocityField velocity_;
  WaveSpeedEstimate estimate_ = WaveSpeedEstimate::Simple;

  double euler_wave_speed(const State& ul, const State& ur, const Vec2& n) const;
};

}  // namespace cvxfem
