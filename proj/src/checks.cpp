#include "cvxfem/checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cvxfem/diagnostics.hpp"
#include "cvxfem/limiters.hpp"
#include "cvxfem/schemes.hpp"
#include "cvxfem/spatial.hpp"

namespace cvxfem {
namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

std::array<Vec2, 3> random_triangle(Rng& rng) {
  for (;;) {
    std::array<Vec2, 3> p;
    for (auto& q : p) q = {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
    const double area = 0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) -
                               (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]));
    if (area > 0.05) return p;
  }
}

State random_state(Rng& rng, const FluxModel& model) {
  if (!model.is_system()) return {uniform(rng, -1.0, 1.0), 0.0, 0.0, 0.0};
  EulerPrimitives w;
  w.rho = uniform(rng, 0.2, 2.0);
  w.v = {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
  w.p = uniform(rng, 0.2, 2.0);
  return model.conserved(w);
}

CheckResult check_geometry(Rng& rng, int samples) {
  CheckResult r{"geometry", true, 0.0, ""};
  for (int s = 0; s < samples; ++s) {
    const auto p = random_triangle(rng);
    const auto g = triangle_geometry(p[0], p[1], p[2]);
    Vec2 sum{};
    double scale = 0.0;
    for (const auto& c : g.c) {
      sum[0] += c[0];
      sum[1] += c[1];
      scale = std::max(scale, norm(c));
    }
    r.worst = std::max(r.worst, norm(sum) / scale);
  }
  r.passed = r.worst <= 1e-14;
  r.detail = "max |sum c_i| / max |c_i|";
  return r;
}

CheckResult check_zero_sum(Rng& rng, int samples) {
  CheckResult r{"zero-sum and fluctuation", true, 0.0, ""};
  const FluxModel models[] = {
      FluxModel::linear_advection([](const Vec2& x) { return Vec2{1.0 - x[1], 0.5 + x[0]}; }),
      FluxModel::burgers(), FluxModel::euler(1.4)};
  for (const auto& model : models) {
    for (int s = 0; s < samples; ++s) {
      const auto p = random_triangle(rng);
      const auto g = triangle_geometry(p[0], p[1], p[2]);
      const Vec2 v = model.velocity({(p[0][0] + p[1][0] + p[2][0]) / 3.0,
                                     (p[0][1] + p[1][1] + p[2][1]) / 3.0});
      LocalStates u, udot;
      for (int i = 0; i < 3; ++i) {
        u[i] = random_state(rng, model);
        udot[i] = random_state(rng, model);
      }
      const State ubar = element_average(u);
      const double d = rusanov_viscosity(model, g, u, ubar, v);
      const auto f = antidiffusive_contributions(model, g, u, udot, ubar, d, v);
      const auto rl = low_order_residual(model, g, u, v);
      const auto rh = high_order_residual(model, g, u, udot, v);
      const State re = fluctuation(model, g, u, v);
      for (int k = 0; k < model.m(); ++k) {
        double scale = std::abs(re[k]);
        for (int i = 0; i < 3; ++i) {
          scale = std::max({scale, std::abs(f[i][k]), std::abs(rl[i][k]), std::abs(rh[i][k])});
        }
        scale = std::max(scale, 1.0);
        const double defects[] = {f[0][k] + f[1][k] + f[2][k],
                                  rl[0][k] + rl[1][k] + rl[2][k] - re[k],
                                  rh[0][k] + rh[1][k] + rh[2][k] - re[k]};
        for (double dfc : defects) r.worst = std::max(r.worst, std::abs(dfc) / scale);
      }
    }
  }
  r.passed = r.worst <= 1e-12;
  r.detail = "relative defect of sum f_i, sum r_L - r, sum r_H - r";
  return r;
}

CheckResult check_limiters(Rng& rng, int samples) {
  CheckResult r{"limiter constraints", true, 0.0, ""};
  for (int s = 0; s < samples; ++s) {
    Triple f{uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0), 0.0};
    f[2] = -f[0] - f[1];
    ElementConstraints b;
    for (int i = 0; i < 3; ++i) {
      b.f_min[i] = -uniform(rng, 0.0, 1.0);
      b.f_max[i] = uniform(rng, 0.0, 1.0);
    }
    for (auto lim : {ScalarLimiter::Scale, ScalarLimiter::ClipAndScale}) {
      const auto out = limit_scalar(lim, f, b);
      double sum = 0.0;
      for (int i = 0; i < 3; ++i) {
        sum += out.f_star[i];
        r.worst = std::max({r.worst, out.f_star[i] - b.f_max[i], b.f_min[i] - out.f_star[i]});
      }
      r.worst = std::max(r.worst, std::abs(sum));
    }
  }
  r.passed = r.worst <= 1e-14;
  r.detail = "bound excess and zero-sum defect of f*";
  return r;
}

CheckResult check_rd_weights(Rng& rng, int samples) {
  CheckResult r{"rd weight reconstruction", true, 0.0, ""};
  for (int s = 0; s < samples; ++s) {
    const Triple res{uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
    const auto w = rd_weights(res);
    const auto back = rd_reconstruct(w);
    for (int i = 0; i < 3; ++i) {
      r.worst = std::max(r.worst, std::abs(back[i] - res[i]));
      if (w.beta_plus[i] < 0.0 || w.beta_minus[i] < 0.0) r.worst = std::max(r.worst, 1.0);
    }
  }
  r.passed = r.worst <= 1e-12;
  r.detail = "max |beta r - r_i|";
  return r;
}

CheckResult check_low_order_idp(Rng& rng) {
  CheckResult r{"low-order IDP step", true, 0.0, ""};
  RectangleSpec spec;
  spec.nx = spec.ny = 16;
  spec.periodic_x = spec.periodic_y = true;
  const MeshData mesh = build_mesh_data(structured_rectangle(spec));
  const FluxModel model =
      FluxModel::linear_advection([](const Vec2& x) { return Vec2{0.5 - x[1], x[0] - 0.5}; });
  Field u(mesh.num_dofs());
  for (auto& s : u) s = {uniform(rng, 0.0, 1.0), 0.0, 0.0, 0.0};
  SchemeOptions o;
  o.kind = SchemeKind::LowOrder;
  Scheme scheme(mesh, model, o);
  const double dt = 0.9 * scheme.admissible_dt(u, 0.0);
  const Field next = scheme.low_order_step(u, dt, 0.0);
  for (const auto& s : next) r.worst = std::max({r.worst, -s[0], s[0] - 1.0});
  r.passed = r.worst <= 1e-12;
  r.detail = "max excursion outside [0, 1]";
  return r;
}

}  // namespace

std::vector<CheckResult> run_checks(std::uint64_t seed, int samples) {
  Rng rng(seed);
  std::vector<CheckResult> out;
  out.push_back(check_geometry(rng, samples));
  out.push_back(check_zero_sum(rng, samples));
  out.push_back(check_limiters(rng, 10 * samples));
  out.push_back(check_rd_weights(rng, samples));
  out.push_back(check_low_order_idp(rng));
  return out;
}

}  // namespace cvxfem
