#include <cmath>
#include <random>
#include <sstream>

#include "cvxfem/diagnostics.hpp"
#include "cvxfem/simulation.hpp"
#include "doctest.h"

using namespace cvxfem;

namespace {

MeshData unit_square(int n, bool periodic) {
  RectangleSpec spec;
  spec.nx = spec.ny = n;
  spec.periodic_x = spec.periodic_y = periodic;
  return build_mesh_data(structured_rectangle(spec));
}

FluxModel rotation() {
  return FluxModel::linear_advection([](const Vec2& x) { return Vec2{0.5 - x[1], x[0] - 0.5}; });
}

Field random_unit_field(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> val(0.0, 1.0);
  Field u(n);
  for (auto& s : u) s = {val(rng), 0, 0, 0};
  return u;
}

}  // namespace

TEST_CASE("rd_weights") {
  const auto w = rd_weights({2, -1, -1});
  CHECK(w.r_plus == 2.0);
  CHECK(w.r_minus == -2.0);
  CHECK(w.beta_plus == Triple{1, 0, 0});
  CHECK(w.beta_minus == Triple{0, 0.5, 0.5});
  CHECK_FALSE(w.beta_classical.has_value());

  const auto z = rd_weights({0, 0, 0});
  CHECK(z.r_plus == 0.0);
  CHECK(z.r_minus == 0.0);
  CHECK(z.beta_plus == Triple{0, 0, 0});
  CHECK(z.beta_minus == Triple{0, 0, 0});

  const auto c = rd_weights({3, -1, 2});
  REQUIRE(c.beta_classical.has_value());
  CHECK((*c.beta_classical)[0] == doctest::Approx(0.75));

  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  for (int s = 0; s < 10000; ++s) {
    const Triple r{val(rng), val(rng), val(rng)};
    const auto x = rd_weights(r);
    const Triple back = rd_reconstruct(x);
    double bp = 0.0, bm = 0.0;
    for (int i = 0; i < 3; ++i) {
      REQUIRE(std::abs(back[i] - r[i]) <= 1e-12);
      REQUIRE(x.beta_plus[i] >= 0.0);
      REQUIRE(x.beta_minus[i] >= 0.0);
      bp += x.beta_plus[i];
      bm += x.beta_minus[i];
    }
    if (x.r_plus > 0.0) REQUIRE(bp == doctest::Approx(1.0).epsilon(1e-14));
    if (x.r_minus < 0.0) REQUIRE(bm == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("audit_step") {
  const MeshData mesh = unit_square(8, true);
  const auto model = rotation();
  const AdmissibleSet unit{0.0, 1.0};
  const StepStats none;

  SUBCASE("constant admissible state") {
    const Field u(mesh.num_dofs(), State{0.5, 0, 0, 0});
    const State totals = conserved_totals(mesh, u);
    CHECK(totals[0] == doctest::Approx(0.5).epsilon(1e-14));
    const auto r = audit_step(mesh, model, unit, u, none, totals, totals, 0.0, 0.0);
    CHECK(r.bound_violation == 0.0);
    CHECK(r.conservation_drift == 0.0);
    CHECK(r.zerosum_defect == 0.0);
    CHECK(r.admissible);
    CHECK(r.min[0] == 0.5);
    CHECK(r.max[0] == 0.5);
    CHECK_NOTHROW(enforce(r, AuditTolerances{}));
  }
  SUBCASE("injected fault") {
    Field u = random_unit_field(mesh.num_dofs(), 3);
    u[17][0] = 1.0 + 1e-3;
    const State totals = conserved_totals(mesh, u);
    const auto r = audit_step(mesh, model, unit, u, none, totals, totals, 0.0, 0.0);
    CHECK(r.bound_violation == doctest::Approx(1e-3));
    CHECK(r.bound_violation_node == 17);
    CHECK_FALSE(r.admissible);
    try {
      enforce(r, AuditTolerances{});
      FAIL("expected AuditFailure");
    } catch (const AuditFailure& e) {
      CHECK(std::string(e.what()).find("node 17") != std::string::npos);
    }
  }
  SUBCASE("conservation drift and zero-sum defect are detected") {
    const Field u(mesh.num_dofs(), State{0.5, 0, 0, 0});
    const State totals = conserved_totals(mesh, u);
    State shifted = totals;
    shifted[0] *= 1.0 + 1e-6;
    const auto drift = audit_step(mesh, model, unit, u, none, shifted, totals, 0.0, 0.0);
    CHECK(drift.conservation_drift == doctest::Approx(1e-6).epsilon(1e-3));
    CHECK_THROWS_AS(enforce(drift, AuditTolerances{}), AuditFailure);

    StepStats bad;
    bad.f_star.assign(mesh.num_elements(), LocalStates{});
    bad.alpha.assign(mesh.num_elements(), 1.0);
    bad.f_star[5][0][0] = 0.5;
    bad.f_star[5][1][0] = -0.25;
    const auto zs = audit_step(mesh, model, unit, u, bad, totals, totals, 0.0, 0.0);
    CHECK(zs.zerosum_element == 5);
    CHECK(zs.zerosum_defect > 0.1);
    try {
      enforce(zs, AuditTolerances{});
      FAIL("expected AuditFailure");
    } catch (const AuditFailure& e) {
      CHECK(std::string(e.what()).find("element 5") != std::string::npos);
    }
  }
  SUBCASE("low-order step on random data") {
    const Field u = random_unit_field(mesh.num_dofs(), 4);
    SchemeOptions o;
    o.kind = SchemeKind::LowOrder;
    Scheme scheme(mesh, model, o);
    const double dt = 0.9 * scheme.admissible_dt(u, 0.0);
    const Field next = scheme.step(u, dt, 0.0);
    const State t0 = conserved_totals(mesh, u);
    State scale{};
    for (int i = 0; i < mesh.num_dofs(); ++i) scale[0] += mesh.lumped_mass[i] * std::abs(u[i][0]);
    const auto r = audit_step(mesh, model, unit, next, scheme.last_stats(), t0, scale, dt, dt);
    CHECK(r.bound_violation <= 1e-12);
    CHECK(r.conservation_drift <= 1e-12);
    CHECK_NOTHROW(enforce(r, AuditTolerances{}));
  }
  SUBCASE("Euler admissibility") {
    const auto euler = FluxModel::euler(1.4);
    Field u(mesh.num_dofs(), euler.conserved({1.0, {0.0, 0.0}, 1.0, 0.0}));
    u[3][3] = 0.1 * u[3][3] - 1.0;
    const State t0 = conserved_totals(mesh, u);
    const auto r = audit_step(mesh, euler, {}, u, none, t0, t0, 0.0, 0.0);
    CHECK_FALSE(r.admissible);
    CHECK(r.bound_violation_node == 3);
  }
}

TEST_CASE("auditing does not change the trajectory") {
  const MeshData mesh = unit_square(12, true);
  const Field u0 = random_unit_field(mesh.num_dofs(), 9);
  TimeControls c;
  c.t_end = 0.2;
  SchemeOptions o;
  Simulation plain(mesh, rotation(), o, c, u0, {0.0, 1.0});
  plain.run_to_end();
  std::ostringstream csv;
  Simulation audited(mesh, rotation(), o, c, u0, {0.0, 1.0});
  audited.set_audit(1, AuditTolerances{}, &csv);
  audited.run_to_end();
  CHECK(plain.state() == audited.state());
  CHECK(plain.steps() == audited.steps());
}

TEST_CASE("error_norms") {
  const MeshData mesh = unit_square(10, false);
  const ExactSolution exact = [](const Vec2& x, double t) {
    return State{std::sin(x[0] + t) * x[1], 0, 0, 0};
  };
  Field u(mesh.num_dofs());
  for (int i = 0; i < mesh.num_dofs(); ++i) u[i] = exact(mesh.dof_position(i), 0.3);
  const auto zero = error_norms(mesh, u, exact, 0.3);
  CHECK(zero.l1 == 0.0);
  CHECK(zero.l2 == 0.0);
  CHECK(zero.linf == 0.0);

  for (auto& s : u) s[0] += 0.01;
  const auto off = error_norms(mesh, u, exact, 0.3);
  CHECK(off.l1 == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(off.l2 == doctest::Approx(0.01).epsilon(1e-10));
  CHECK(off.linf == doctest::Approx(0.01).epsilon(1e-10));
}

TEST_CASE("diagnostics CSV") {
  CHECK(csv_header(rotation()) == "t,dt,min_u,max_u,total_u,bound_violation,zerosum_defect,alpha_mean\n");
  CHECK(csv_header(FluxModel::euler(1.4)) ==
        "t,dt,min_rho,min_mom_x,min_mom_y,min_E,max_rho,max_mom_x,max_mom_y,max_E,"
        "total_rho,total_mom_x,total_mom_y,total_E,bound_violation,zerosum_defect,alpha_mean\n");
  StepReport r;
  r.t = 0.5;
  r.dt = 0.1;
  r.min[0] = -1.0;
  r.max[0] = 2.0;
  r.total[0] = 0.25;
  CHECK(csv_row(rotation(), r) == "0.5,0.10000000000000001,-1,2,0.25,0,0,1\n");
  CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
}
