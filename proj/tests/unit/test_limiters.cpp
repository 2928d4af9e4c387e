#include <cmath>
#include <numeric>
#include <random>

#include "cvxfem/limiters.hpp"
#include "cvxfem/schemes.hpp"
#include "doctest.h"

using namespace cvxfem;

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

ElementConstraints bounds(const Triple& lo, const Triple& hi) { return {lo, hi}; }

Triple random_zero_sum(Rng& rng) {
  Triple f{uniform(rng, -1, 1), uniform(rng, -1, 1), 0.0};
  f[2] = -f[0] - f[1];
  return f;
}

ElementConstraints random_bounds(Rng& rng) {
  ElementConstraints b;
  for (int i = 0; i < 3; ++i) {
    b.f_min[i] = -uniform(rng, 0, 1);
    b.f_max[i] = uniform(rng, 0, 1);
  }
  return b;
}

double sum(const Triple& t) { return t[0] + t[1] + t[2]; }
double abs_sum(const Triple& t) { return std::abs(t[0]) + std::abs(t[1]) + std::abs(t[2]); }

void check_triple(const Triple& got, const Triple& want) {
  for (int i = 0; i < 3; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-14));
}

MeshData periodic_mesh(int n) {
  RectangleSpec spec;
  spec.nx = spec.ny = n;
  spec.periodic_x = spec.periodic_y = true;
  return build_mesh_data(structured_rectangle(spec));
}

FluxModel rotation() {
  return FluxModel::linear_advection([](const Vec2& x) { return Vec2{0.5 - x[1], x[0] - 0.5}; });
}

Field random_scalar_field(Rng& rng, int n) {
  Field u(n);
  for (auto& s : u) s = {uniform(rng, 0, 1), 0, 0, 0};
  return u;
}

Field random_euler_field(Rng& rng, const FluxModel& euler, int n) {
  Field u(n);
  for (auto& s : u) {
    s = euler.conserved({uniform(rng, 0.5, 2.0), {uniform(rng, -1, 1), uniform(rng, -1, 1)},
                         uniform(rng, 0.5, 2.0), 0.0});
  }
  return u;
}

SchemeOptions options(SchemeKind kind, ScalarLimiter limiter) {
  SchemeOptions o;
  o.kind = kind;
  o.limiter = limiter;
  if (kind == SchemeKind::Fct) o.bounds = BoundsMode::Stencil;
  return o;
}

State totals(const MeshData& mesh, const Field& u) {
  State t{};
  for (int i = 0; i < mesh.num_dofs(); ++i) t += mesh.lumped_mass[i] * u[i];
  return t;
}

}  // namespace

TEST_CASE("scaling limiter: worked examples") {
  const auto r = scaling_limiter({3, -1, -2}, bounds({-2, -2, -1}, {1, 2, 2}));
  check_triple(r.alpha, {1.0 / 3, 1.0, 0.5});
  CHECK(r.alpha_element == doctest::Approx(1.0 / 3).epsilon(1e-15));
  check_triple(r.f_star, {1.0, -1.0 / 3, -2.0 / 3});

  const auto inside = scaling_limiter({0.5, -0.25, -0.25}, bounds({-1, -1, -1}, {1, 1, 1}));
  CHECK(inside.alpha_element == 1.0);
  check_triple(inside.f_star, {0.5, -0.25, -0.25});

  const auto zero = scaling_limiter({0, 0, 0}, bounds({-1, -1, -1}, {1, 1, 1}));
  CHECK(zero.alpha_element == 1.0);
  check_triple(zero.f_star, {0, 0, 0});
}

TEST_CASE("clip-and-scale: worked examples") {
  check_triple(clip_and_scale({3, -1, -2}, bounds({-2, -2, -1}, {1, 2, 2})).f_star, {1.0, -0.5, -0.5});
  check_triple(clip_and_scale({0.5, -0.25, -0.25}, bounds({-1, -1, -1}, {1, 1, 1})).f_star,
               {0.5, -0.25, -0.25});
  check_triple(clip_and_scale({2, -1, 0}, bounds({-9, -9, -9}, {2, 9, 9})).f_star, {1.0, -1.0, 0.0});
}

TEST_CASE("scalar limiters satisfy the constraints on random data") {
  Rng rng(101);
  for (int s = 0; s < 100000; ++s) {
    const Triple f = random_zero_sum(rng);
    const auto b = random_bounds(rng);
    const auto sc = scaling_limiter(f, b);
    const auto cs = clip_and_scale(f, b);
    for (const auto* r : {&sc, &cs}) {
      REQUIRE(std::abs(sum(r->f_star)) <= 1e-15);
      for (int i = 0; i < 3; ++i) {
        REQUIRE(r->f_star[i] <= b.f_max[i] + 1e-15);
        REQUIRE(r->f_star[i] >= b.f_min[i] - 1e-15);
      }
    }
    for (int i = 0; i < 3; ++i) REQUIRE(sc.f_star[i] * f[i] >= 0.0);
    REQUIRE(sc.alpha_element >= 0.0);
    REQUIRE(sc.alpha_element <= 1.0);
    // C&S is less diffusive than scaling.
    REQUIRE(abs_sum(cs.f_star) >= abs_sum(sc.f_star) - 1e-15);
  }
}

TEST_CASE("clip-and-scale depends continuously on the data") {
  Rng rng(103);
  double worst = 0.0;
  for (int s = 0; s < 10000; ++s) {
    const Triple f = random_zero_sum(rng);
    const auto b = random_bounds(rng);
    Triple delta = random_zero_sum(rng);
    const double size = 1e-8 * std::max({std::abs(f[0]), std::abs(f[1]), std::abs(f[2])});
    double dmax = 0.0;
    for (double& d : delta) {
      d *= size;
      dmax = std::max(dmax, std::abs(d));
    }
    if (dmax == 0.0) continue;
    Triple g = f;
    for (int i = 0; i < 3; ++i) g[i] += delta[i];
    const auto a = clip_and_scale(f, b).f_star;
    const auto c = clip_and_scale(g, b).f_star;
    for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(a[i] - c[i]) / dmax);
  }
  CHECK(worst <= 10.0);
}

TEST_CASE("balance_within") {
  Rng rng(107);
  for (int s = 0; s < 20000; ++s) {
    const Triple f{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)};
    Triple lo, hi;
    for (int i = 0; i < 3; ++i) {
      lo[i] = f[i] - uniform(rng, 0, 1);
      hi[i] = f[i] + uniform(rng, 0, 1);
    }
    const Triple out = balance_within(f, lo, hi);
    REQUIRE(std::abs(sum(out)) <= 1e-14);
    const bool feasible = sum(lo) <= 0.0 && sum(hi) >= 0.0;
    for (int i = 0; i < 3; ++i) {
      // Entries move against the sign of the imbalance only.
      if (sum(f) > 0.0) REQUIRE(out[i] <= f[i] + 1e-15);
      if (sum(f) < 0.0) REQUIRE(out[i] >= f[i] - 1e-15);
      if (feasible) {
        REQUIRE(out[i] >= lo[i] - 1e-14);
        REQUIRE(out[i] <= hi[i] + 1e-14);
      }
    }
  }
  const double inf = std::numeric_limits<double>::infinity();
  const Triple open = balance_within({1, 1, 1}, {0, -inf, -inf}, {inf, inf, inf});
  CHECK(open[0] == 1.0);
  CHECK(open[1] == -0.5);
  CHECK(open[2] == -0.5);
}

TEST_CASE("product rule: fixed points") {
  const Triple gamma{2, 2, 2};
  const Triple rho{1.0, 2.0, 0.5};
  SUBCASE("constant ratio") {
    const double phi0 = 0.7;
    const Triple base_rhophi{phi0 * rho[0], phi0 * rho[1], phi0 * rho[2]};
    const Triple f_rho{0.3, -0.2, -0.1};
    const Triple f_rhophi{0.9, -0.4, -0.5};
    const Triple phi{phi0, phi0, phi0};
    const auto prep = product_rule_prepare(f_rho, f_rhophi, rho, base_rhophi, gamma, phi, phi);
    const Triple out = product_rule_finish(prep, phi, phi, gamma, ScalarLimiter::ClipAndScale);
    for (int i = 0; i < 3; ++i) {
      const double rho_star = rho[i] + f_rho[i] / gamma[i];
      CHECK((base_rhophi[i] + out[i] / gamma[i]) / rho_star == doctest::Approx(phi0).epsilon(1e-14));
    }
  }
  SUBCASE("zero contributions") {
    const Triple base_rhophi{0.1, 0.2, 0.3};
    const Triple lo{0.0, 0.0, 0.0}, hi{1.0, 1.0, 1.0};
    const auto prep = product_rule_prepare({0, 0, 0}, {0, 0, 0}, rho, base_rhophi, gamma, lo, hi);
    for (double v : prep.shift) CHECK(v == 0.0);
    for (double v : prep.g) CHECK(v == 0.0);
    const Triple out = product_rule_finish(prep, lo, hi, gamma, ScalarLimiter::ClipAndScale);
    for (double v : out) CHECK(v == 0.0);
  }
  SUBCASE("nonpositive limited density") {
    CHECK_THROWS_AS(product_rule_prepare({-4, 2, 2}, {0, 0, 0}, rho, {0, 0, 0}, gamma, {0, 0, 0},
                                         {1, 1, 1}),
                    InadmissibleState);
  }
}

TEST_CASE("product rule: bounds and zero sum on random data") {
  Rng rng(109);
  for (auto limiter : {ScalarLimiter::ClipAndScale, ScalarLimiter::Scale}) {
    for (int s = 0; s < 10000; ++s) {
      const double g = uniform(rng, 0.5, 5.0);
      const Triple gamma{g, g, g};
      Triple rho, phi, base_rhophi;
      for (int i = 0; i < 3; ++i) {
        rho[i] = uniform(rng, 0.2, 2.0);
        phi[i] = uniform(rng, -1, 1);
        base_rhophi[i] = rho[i] * phi[i];
      }
      // Density step: C&S against bounds that keep rho^* positive.
      ElementConstraints rb;
      for (int i = 0; i < 3; ++i) {
        rb.f_min[i] = -g * rho[i] * uniform(rng, 0.0, 0.9);
        rb.f_max[i] = g * uniform(rng, 0.0, 1.0);
      }
      const Triple f_rho = clip_and_scale(random_zero_sum(rng), rb).f_star;
      Triple f_rhophi = random_zero_sum(rng);
      for (double& v : f_rhophi) v *= 3.0;
      // Ratio bounds containing the element's low-order ratios.
      const double lo_all = *std::min_element(phi.begin(), phi.end());
      const double hi_all = *std::max_element(phi.begin(), phi.end());
      Triple pmin, pmax;
      for (int i = 0; i < 3; ++i) {
        pmin[i] = lo_all - uniform(rng, 0, 0.2);
        pmax[i] = hi_all + uniform(rng, 0, 0.2);
      }
      const auto prep = product_rule_prepare(f_rho, f_rhophi, rho, base_rhophi, gamma, pmin, pmax);
      const Triple out = product_rule_finish(prep, pmin, pmax, gamma, limiter);
      REQUIRE(std::abs(sum(out)) <= 1e-12 * std::max(1.0, abs_sum(f_rhophi)));
      for (int i = 0; i < 3; ++i) {
        const double rho_star = rho[i] + f_rho[i] / g;
        const double value = base_rhophi[i] + out[i] / g;
        REQUIRE(value >= rho_star * pmin[i] - 1e-12);
        REQUIRE(value <= rho_star * pmax[i] + 1e-12);
      }
    }
  }
}

TEST_CASE("product rule: zero sum for arbitrary bounds") {
  Rng rng(113);
  for (int s = 0; s < 10000; ++s) {
    const Triple gamma{1.5, 1.5, 1.5};
    Triple rho, base_rhophi, pmin, pmax;
    for (int i = 0; i < 3; ++i) {
      rho[i] = uniform(rng, 0.5, 2.0);
      base_rhophi[i] = rho[i] * uniform(rng, -1, 1);
      pmin[i] = uniform(rng, -1, 0);
      pmax[i] = uniform(rng, 0, 1);
    }
    Triple f_rho = random_zero_sum(rng);
    for (double& v : f_rho) v *= 0.3;
    const Triple f_rhophi = random_zero_sum(rng);
    const auto prep = product_rule_prepare(f_rho, f_rhophi, rho, base_rhophi, gamma, pmin, pmax);
    const Triple out = product_rule_finish(prep, pmin, pmax, gamma, ScalarLimiter::ClipAndScale);
    REQUIRE(std::abs(sum(out)) <= 1e-12);
  }
}

TEST_CASE("idp_fix") {
  const auto euler = FluxModel::euler(1.4);
  const State u{1, 0, 0, 2.5};
  const LocalStates base{u, u, u};
  const Triple gamma{2, 2, 2};
  CHECK(idp_fix(euler, base, LocalStates{}, gamma) == 1.0);

  const LocalStates small{State{0, 0.1, 0, 0.2}, State{0, -0.1, 0, -0.1}, State{0, 0, 0, -0.1}};
  CHECK(idp_fix(euler, base, small, gamma) == 1.0);

  // The full correction drives the pressure at node 0 negative.
  const LocalStates big{State{0.0, 3.0, 0.0, -6.0}, State{0.0, -1.5, 0.0, 3.0},
                        State{0.0, -1.5, 0.0, 3.0}};
  const double alpha = idp_fix(euler, base, big, gamma);
  CHECK(alpha > 0.0);
  CHECK(alpha < 1.0);
  const auto state_at = [&](double a, int i) { return base[i] + (a / gamma[i]) * big[i]; };
  for (int i = 0; i < 3; ++i) CHECK(euler.internal_energy_density(state_at(alpha, i)) >= 0.0);
  CHECK(euler.internal_energy_density(state_at(std::min(1.0, alpha + std::ldexp(1.0, -30)), 0)) < 0.0);

  const LocalStates bad{State{-1, 0, 0, 1}, u, u};
  CHECK_THROWS_AS(idp_fix(euler, bad, big, gamma), InadmissibleState);
}

TEST_CASE("local bounds") {
  const MeshData mesh = periodic_mesh(8);
  const auto model = rotation();
  Rng rng(127);
  SUBCASE("constant field") {
    const Field u(mesh.num_dofs(), State{0.4, 0, 0, 0});
    for (auto kind : {SchemeKind::Fct, SchemeKind::Mcl}) {
      Scheme scheme(mesh, model, options(kind, ScalarLimiter::ClipAndScale));
      const auto [lo, hi] = scheme.local_bounds(u, 0.01, 0.0);
      for (int i = 0; i < mesh.num_dofs(); ++i) {
        CHECK(lo[i] == doctest::Approx(0.4).epsilon(1e-15));
        CHECK(hi[i] == doctest::Approx(0.4).epsilon(1e-15));
      }
    }
  }
  SUBCASE("MCL bounds contain u_i and every bar state") {
    const Field u = random_scalar_field(rng, mesh.num_dofs());
    Scheme scheme(mesh, model, options(SchemeKind::Mcl, ScalarLimiter::ClipAndScale));
    const auto [lo, hi] = scheme.local_bounds(u, 0.01, 0.0);
    for (int i = 0; i < mesh.num_dofs(); ++i) {
      CHECK(lo[i] <= u[i][0]);
      CHECK(hi[i] >= u[i][0]);
    }
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const auto& nodes = mesh.conn.element_nodes[e];
      for (int i = 0; i < 3; ++i) {
        const double b = scheme.works()[e].bar_states[i][0];
        CHECK(lo[nodes[i]] <= b);
        CHECK(hi[nodes[i]] >= b);
      }
    }
    // Stencil bounds contain bar-state bounds for scalars.
    SchemeOptions o = options(SchemeKind::Mcl, ScalarLimiter::ClipAndScale);
    o.bounds = BoundsMode::Stencil;
    Scheme stencil(mesh, model, o);
    const auto [slo, shi] = stencil.local_bounds(u, 0.01, 0.0);
    for (int i = 0; i < mesh.num_dofs(); ++i) {
      CHECK(slo[i] <= lo[i] + 1e-15);
      CHECK(shi[i] >= hi[i] - 1e-15);
      CHECK(slo[i] >= 0.0);
      CHECK(shi[i] <= 1.0);
    }
  }
}

TEST_CASE("FCT driver") {
  const MeshData mesh = periodic_mesh(8);
  const auto model = rotation();
  Rng rng(131);
  const Field u = random_scalar_field(rng, mesh.num_dofs());
  Scheme low(mesh, model, options(SchemeKind::LowOrder, ScalarLimiter::Zero));
  const double dt = 0.9 * low.admissible_dt(u, 0.0);
  const Field u_low = low.low_order_step(u, dt, 0.0);

  SUBCASE("zero correction recovers the low-order step") {
    Scheme fct(mesh, model, options(SchemeKind::Fct, ScalarLimiter::Zero));
    const Field out = fct.fct_step(u, dt, 0.0);
    for (int i = 0; i < mesh.num_dofs(); ++i) CHECK(out[i][0] == u_low[i][0]);
  }
  SUBCASE("constant state is a fixed point") {
    Scheme fct(mesh, model, options(SchemeKind::Fct, ScalarLimiter::ClipAndScale));
    const Field c(mesh.num_dofs(), State{0.25, 0, 0, 0});
    for (const auto& s : fct.fct_step(c, dt, 0.0)) CHECK(s[0] == doctest::Approx(0.25).epsilon(1e-14));
  }
  SUBCASE("result is the convex combination of limited element states") {
    for (auto lim : {ScalarLimiter::Scale, ScalarLimiter::ClipAndScale}) {
      Scheme fct(mesh, model, options(SchemeKind::Fct, lim));
      const Field out = fct.fct_step(u, dt, 0.0);
      std::vector<double> combo(mesh.num_dofs(), 0.0);
      for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& nodes = mesh.conn.element_nodes[e];
        const double me = mesh.geometry[e].m_elem;
        for (int i = 0; i < 3; ++i) {
          const double star = u_low[nodes[i]][0] + dt * fct.last_stats().f_star[e][i][0] / me;
          combo[nodes[i]] += me * star;
        }
      }
      for (int i = 0; i < mesh.num_dofs(); ++i) {
        CHECK(std::abs(combo[i] / mesh.lumped_mass[i] - out[i][0]) <= 1e-12);
      }
    }
  }
  SUBCASE("CFL violation is reported before any update") {
    Scheme fct(mesh, model, options(SchemeKind::Fct, ScalarLimiter::ClipAndScale));
    CHECK_THROWS_AS(fct.fct_step(u, 1.5 * dt / 0.9, 0.0), CflViolation);
  }
}

TEST_CASE("MCL driver: recovery limits") {
  const MeshData mesh = periodic_mesh(8);
  const auto model = rotation();
  Rng rng(137);
  const Field u = random_scalar_field(rng, mesh.num_dofs());

  SchemeOptions open = options(SchemeKind::Mcl, ScalarLimiter::ClipAndScale);
  open.bounds = BoundsMode::Unbounded;
  Scheme mcl(mesh, model, open);
  Scheme galerkin(mesh, model, options(SchemeKind::Galerkin, ScalarLimiter::Unlimited));
  const Field a = mcl.mcl_rhs(u, 0.0);
  const Field b = galerkin.mcl_rhs(u, 0.0);
  for (int i = 0; i < mesh.num_dofs(); ++i) CHECK(std::abs(a[i][0] - b[i][0]) <= 1e-12);

  Scheme zero(mesh, model, options(SchemeKind::Mcl, ScalarLimiter::Zero));
  Scheme low(mesh, model, options(SchemeKind::LowOrder, ScalarLimiter::Zero));
  const Field r0 = zero.mcl_rhs(u, 0.0);
  const double dt = 1e-3;
  const Field ul = low.low_order_step(u, dt, 0.0);
  for (int i = 0; i < mesh.num_dofs(); ++i) {
    CHECK(std::abs(r0[i][0] - (ul[i][0] - u[i][0]) * mesh.lumped_mass[i] / dt) <= 1e-12);
  }
}

TEST_CASE("scalar schemes keep random data in [0, 1]") {
  const MeshData mesh = periodic_mesh(16);
  const auto model = rotation();
  Rng rng(139);
  const Field u = random_scalar_field(rng, mesh.num_dofs());
  for (auto kind : {SchemeKind::LowOrder, SchemeKind::Fct, SchemeKind::Mcl}) {
    for (auto lim : {ScalarLimiter::Scale, ScalarLimiter::ClipAndScale}) {
      for (auto mode : {BoundsMode::BarState, BoundsMode::Stencil}) {
        SchemeOptions o = options(kind, kind == SchemeKind::LowOrder ? ScalarLimiter::Zero : lim);
        o.bounds = mode;
        Scheme scheme(mesh, model, o);
        const double dt = 0.9 * scheme.admissible_dt(u, 0.0);
        const Field out = scheme.step(u, dt, 0.0);
        for (const auto& s : out) {
          CHECK(s[0] >= -1e-12);
          CHECK(s[0] <= 1.0 + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("Euler schemes stay admissible and conservative") {
  const MeshData mesh = periodic_mesh(8);
  const auto euler = FluxModel::euler(1.4);
  Rng rng(149);
  const Field u = random_euler_field(rng, euler, mesh.num_dofs());
  const State before = totals(mesh, u);
  for (auto kind : {SchemeKind::LowOrder, SchemeKind::Fct, SchemeKind::Mcl}) {
    for (auto lim : {ScalarLimiter::Scale, ScalarLimiter::ClipAndScale}) {
      for (auto system : {SystemLimiting::Sequential, SystemLimiting::Synchronized}) {
        SchemeOptions o = options(kind, kind == SchemeKind::LowOrder ? ScalarLimiter::Zero : lim);
        o.system = system;
        Scheme scheme(mesh, euler, o);
        const double dt = 0.9 * scheme.admissible_dt(u, 0.0);
        const Field out = scheme.step(u, dt, 0.0);
        for (const auto& s : out) CHECK(euler.admissible(s, 0.0));
        const State after = totals(mesh, out);
        for (int k = 0; k < 4; ++k) {
          CHECK(std::abs(after[k] - before[k]) <= 1e-12 * std::max(1.0, std::abs(before[k])));
        }
        for (const auto& f : scheme.last_stats().f_star) {
          for (int k = 0; k < 4; ++k) {
            const double scale = std::max({1.0, std::abs(f[0][k]), std::abs(f[1][k]), std::abs(f[2][k])});
            CHECK(std::abs(f[0][k] + f[1][k] + f[2][k]) <= 1e-12 * scale);
          }
        }
      }
    }
  }
}
