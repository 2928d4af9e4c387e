#include <cmath>
#include <random>

#include "cvxfem/schemes.hpp"
#include "cvxfem/simulation.hpp"
#include "cvxfem/time_integration.hpp"
#include "doctest.h"

using namespace cvxfem;

namespace {

using Scalar = std::vector<double>;

// Forward-Euler map of u' = -u.
Scalar decay(const Scalar& u, double dt, double) {
  Scalar r(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) r[i] = u[i] - dt * u[i];
  return r;
}

double integrate(RkScheme s, double dt, double t_end) {
  Scalar u{1.0};
  const int n = static_cast<int>(std::lround(t_end / dt));
  for (int k = 0; k < n; ++k) u = ssp_rk_step(s, decay, u, dt, k * dt);
  return u[0];
}

MeshData structured(int n, bool periodic) {
  RectangleSpec spec;
  spec.nx = spec.ny = n;
  spec.periodic_x = spec.periodic_y = periodic;
  return build_mesh_data(structured_rectangle(spec));
}

}  // namespace

TEST_CASE("compute_dt") {
  TimeControls c;
  c.cfl = 0.8;
  c.t_end = 10.0;
  SUBCASE("no viscosity falls back to dt_max") {
    c.dt_max = 0.125;
    CHECK(compute_dt({1.0, 2.0}, {0.0, 0.0}, c, 0.0) == 0.125);
    c.dt_max = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(compute_dt({1.0, 2.0}, {0.0, 0.0}, c, 0.0), Error);
  }
  SUBCASE("single unit right triangle") {
    const MeshData mesh = build_mesh_data(read_mesh("nodes 3\n0 0\n1 0\n0 1\ntriangles 1\n0 1 2\n"));
    const auto model = FluxModel::linear_advection([](const Vec2&) { return Vec2{1.0, 0.0}; });
    // Element viscosity only; boundary faces are left out of this check.
    std::vector<ElementWork> w;
    compute_low_order_work(mesh, model, Field(3, State{1.0, 0, 0, 0}), w);
    CHECK(w[0].d == doctest::Approx(0.5));
    const std::vector<double> visc(3, w[0].d);
    CHECK(compute_dt(mesh.lumped_mass, visc, c, 0.0) == doctest::Approx(0.8 / 6).epsilon(1e-15));
  }
  SUBCASE("truncated to land on t_end") {
    CHECK(compute_dt({1.0}, {1.0}, c, 9.9) == doctest::Approx(0.1).epsilon(1e-12));
  }
  SUBCASE("dt_max caps the step") {
    c.dt_max = 0.01;
    CHECK(compute_dt({1.0}, {1.0}, c, 0.0) == 0.01);
  }
  SUBCASE("halving h roughly halves dt") {
    const auto model = FluxModel::linear_advection([](const Vec2&) { return Vec2{1.0, 0.5}; });
    SchemeOptions o;
    o.kind = SchemeKind::LowOrder;
    double previous = 0.0;
    for (int n : {8, 16, 32}) {
      const MeshData mesh = structured(n, true);
      Scheme scheme(mesh, model, o);
      const Field u(mesh.num_dofs(), State{1.0, 0, 0, 0});
      const double dt = compute_dt(mesh.lumped_mass, scheme.viscosity_sums(u, 0.0), c, 0.0);
      if (previous > 0.0) CHECK(previous / dt == doctest::Approx(2.0).epsilon(1e-10));
      previous = dt;
    }
  }
}

TEST_CASE("ssp_rk_step: hand computations") {
  CHECK(ssp_rk_step(RkScheme::Ssp2, decay, Scalar{1.0}, 1.0, 0.0)[0] == 0.5);
  // Shu-Osher SSP3 on u' = -u with dt = 0.1.
  const double dt = 0.1;
  const double u1 = 1.0 - dt;
  const double u2 = 0.75 + 0.25 * (u1 - dt * u1);
  const double u3 = 1.0 / 3.0 + 2.0 / 3.0 * (u2 - dt * u2);
  CHECK(std::abs(ssp_rk_step(RkScheme::Ssp3, decay, Scalar{1.0}, dt, 0.0)[0] - u3) <= 1e-15);
  const auto zero = [](const Scalar& u, double, double) { return u; };
  for (auto s : {RkScheme::Euler, RkScheme::Ssp2, RkScheme::Ssp3}) {
    CHECK(ssp_rk_step(s, zero, Scalar{0.3, -2.0}, 0.7, 0.0) == Scalar{0.3, -2.0});
  }
}

TEST_CASE("ssp_rk_step: classical order") {
  const double exact = std::exp(-1.0);
  for (auto [scheme, order] : {std::pair{RkScheme::Ssp2, 1.95}, std::pair{RkScheme::Ssp3, 2.90}}) {
    const double e1 = std::abs(integrate(scheme, 0.1, 1.0) - exact);
    const double e2 = std::abs(integrate(scheme, 0.05, 1.0) - exact);
    const double e3 = std::abs(integrate(scheme, 0.025, 1.0) - exact);
    CHECK(std::log2(e1 / e2) >= order);
    CHECK(std::log2(e2 / e3) >= order);
  }
}

TEST_CASE("ssp_rk_step: observer sees every stage and NaN aborts") {
  int stages = 0;
  const std::function<void(int, const Scalar&)> count = [&](int, const Scalar&) { ++stages; };
  ssp_rk_step(RkScheme::Ssp3, decay, Scalar{1.0}, 0.1, 0.0, count);
  CHECK(stages == 3);
  const auto poison = [](const Scalar& u, double, double) { return Scalar(u.size(), std::nan("")); };
  CHECK_THROWS_AS(ssp_rk_step(RkScheme::Ssp2, poison, Scalar{1.0}, 0.1, 0.0), Error);
}

TEST_CASE("parse_rk_scheme") {
  CHECK(parse_rk_scheme("euler") == RkScheme::Euler);
  CHECK(parse_rk_scheme("ssp2") == RkScheme::Ssp2);
  CHECK(parse_rk_scheme("ssp3") == RkScheme::Ssp3);
  CHECK(to_string(RkScheme::Ssp3) == "ssp3");
  CHECK_THROWS_AS(parse_rk_scheme("rk4"), ConfigError);
}

TEST_CASE("Simulation: stage bounds, mass per stage and exact end time") {
  const MeshData mesh = structured(16, true);
  const auto model =
      FluxModel::linear_advection([](const Vec2& x) { return Vec2{0.5 - x[1], x[0] - 0.5}; });
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> val(0.0, 1.0);
  Field u0(mesh.num_dofs());
  for (auto& s : u0) s = {val(rng), 0, 0, 0};
  double m0 = 0.0;
  for (int i = 0; i < mesh.num_dofs(); ++i) m0 += mesh.lumped_mass[i] * u0[i][0];

  for (auto kind : {SchemeKind::Fct, SchemeKind::Mcl}) {
    SchemeOptions o;
    o.kind = kind;
    TimeControls c;
    c.cfl = 0.9;
    c.t_end = 0.3;
    c.scheme = RkScheme::Ssp3;
    Simulation sim(mesh, model, o, c, u0, AdmissibleSet{0.0, 1.0});
    double worst = 0.0, drift = 0.0;
    sim.set_stage_observer([&](int, const Field& v) {
      double m = 0.0;
      for (int i = 0; i < mesh.num_dofs(); ++i) {
        worst = std::max({worst, -v[i][0], v[i][0] - 1.0});
        m += mesh.lumped_mass[i] * v[i][0];
      }
      drift = std::max(drift, std::abs(m - m0) / m0);
    });
    sim.run_to_end();
    CHECK(sim.time() == 0.3);
    CHECK(worst <= 1e-12);
    CHECK(drift <= 1e-12);
  }
}

TEST_CASE("Simulation: CFL violations in later stages are retried") {
  // A pressure blast raises the wave speeds between stages, so the step
  // chosen from stage 0 at CFL 1 breaks the condition in stage 1.
  const MeshData mesh = structured(16, true);
  const auto euler = FluxModel::euler(1.4);
  Field u0(mesh.num_dofs());
  for (int i = 0; i < mesh.num_dofs(); ++i) {
    const Vec2 x = mesh.dof_position(i);
    const bool inside = std::hypot(x[0] - 0.5, x[1] - 0.5) < 0.15;
    u0[i] = euler.conserved({1.0, {0.0, 0.0}, inside ? 10.0 : 1.0, 0.0});
  }
  SchemeOptions o;
  o.kind = SchemeKind::Mcl;
  TimeControls c;
  c.cfl = 1.0;
  c.t_end = 0.02;
  Simulation sim(mesh, euler, o, c, u0);
  CHECK_NOTHROW(sim.run_to_end());
  CHECK(sim.time() == 0.02);
  CHECK(sim.retries() > 0);
  for (const auto& s : sim.state()) CHECK(euler.admissible(s, 0.0));
}
