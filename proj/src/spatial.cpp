#include "cvxfem/spatial.hpp"

#include <algorithm>

namespace cvxfem {
namespace {

constexpr double kViscosityFloor = 1e-300;

std::array<Flux, 3> nodal_fluxes(const FluxModel& model, const LocalStates& u, const Vec2& v) {
  return {model.flux_frozen(u[0], v), model.flux_frozen(u[1], v), model.flux_frozen(u[2], v)};
}

Flux mean_flux(const std::array<Flux, 3>& f) {
  constexpr double third = 1.0 / 3.0;
  return {third * (f[0].x + f[1].x + f[2].x), third * (f[0].y + f[1].y + f[2].y)};
}

// int_K phi_i (udot_i - udot_h) = sum_j m_ij (udot_i - udot_j)
State mass_term(const ElementGeometry& geom, const LocalStates& udot, int i) {
  State r{};
  for (int j = 0; j < 3; ++j) r += geom.m_pair[i][j] * (udot[i] - udot[j]);
  return r;
}

}  // namespace

State element_average(const LocalStates& u) {
  constexpr double third = 1.0 / 3.0;
  return third * (u[0] + u[1] + u[2]);
}

double rusanov_viscosity(const FluxModel& model, const ElementGeometry& geom, const LocalStates& u,
                         const State& ubar, const Vec2& velocity) {
  double d = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double len = norm(geom.c[i]);
    const Vec2 n{geom.c[i][0] / len, geom.c[i][1] / len};
    d = std::max(d, model.max_wave_speed(u[i], ubar, n, velocity) * len);
  }
  return d;
}

State bar_state(const FluxModel& model, const ElementGeometry& geom, int i, const State& u_i,
                const State& ubar, double d, const Vec2& velocity) {
  const State mean = 0.5 * (ubar + u_i);
  if (d <= kViscosityFloor) return mean;
  const Flux df = model.flux_frozen(ubar, velocity) - model.flux_frozen(u_i, velocity);
  return mean - (0.5 / d) * dot(df, geom.c[i]);
}

LocalStates rusanov_residual(const FluxModel& model, const ElementGeometry& geom,
                             const LocalStates& u, const Vec2& velocity) {
  const State ubar = element_average(u);
  const double d = rusanov_viscosity(model, geom, u, ubar, velocity);
  const Flux fbar = model.flux_frozen(ubar, velocity);
  LocalStates r;
  for (int i = 0; i < 3; ++i) r[i] = d * (ubar - u[i]) - dot(fbar, geom.c[i]);
  return r;
}

LocalStates low_order_residual(const FluxModel& model, const ElementGeometry& geom,
                               const LocalStates& u, const Vec2& velocity) {
  LocalStates r = rusanov_residual(model, geom, u, velocity);
  const auto f = nodal_fluxes(model, u, velocity);
  // The edge opposite node j has outward normal times length 2 c_j; on it
  // int phi_i^2 = L/3 and int phi_i phi_k = L/6.
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (j == i) continue;
      const int k = 3 - i - j;
      const Vec2 nl{2.0 * geom.c[j][0], 2.0 * geom.c[j][1]};
      const Flux edge{(1.0 / 3.0) * f[i].x + (1.0 / 6.0) * f[k].x,
                      (1.0 / 3.0) * f[i].y + (1.0 / 6.0) * f[k].y};
      r[i] -= dot(edge, nl);
    }
  }
  return r;
}

LocalStates high_order_residual(const FluxModel& model, const ElementGeometry& geom,
                                const LocalStates& u, const LocalStates& udot,
                                const Vec2& velocity) {
  const auto f = nodal_fluxes(model, u, velocity);
  // int_K phi_i grad(phi_j) = |K| grad(phi_j) / 3
  State div{};
  for (int j = 0; j < 3; ++j) {
    const Vec2 w{geom.area * geom.grad[j][0] / 3.0, geom.area * geom.grad[j][1] / 3.0};
    div += dot(f[j], w);
  }
  LocalStates r;
  for (int i = 0; i < 3; ++i) r[i] = mass_term(geom, udot, i) - div;
  return r;
}

LocalStates antidiffusive_contributions(const FluxModel& model, const ElementGeometry& geom,
                                        const LocalStates& u, const LocalStates& udot,
                                        const State& ubar, double d, const Vec2& velocity) {
  const Flux fmean = mean_flux(nodal_fluxes(model, u, velocity));
  const Flux dflux = fmean - model.flux_frozen(ubar, velocity);
  LocalStates f;
  for (int i = 0; i < 3; ++i) {
    // int grad(phi_i).(f_h - f(ubar)) = |K| grad(phi_i).(mean f - f(ubar)) = -c_i.(...)
    f[i] = mass_term(geom, udot, i) - dot(dflux, geom.c[i]) - d * (ubar - u[i]);
  }
  return f;
}

State fluctuation(const FluxModel& model, const ElementGeometry& geom, const LocalStates& u,
                  const Vec2& velocity) {
  const auto f = nodal_fluxes(model, u, velocity);
  State r{};
  for (int j = 0; j < 3; ++j) r += dot(f[j], geom.c[j]);
  return r;
}

Vec2 element_velocity(const FluxModel& model, const MeshData& mesh, int e) {
  if (model.kind() != ModelKind::LinearAdvection) return {0.0, 0.0};
  Vec2 v{0.0, 0.0};
  for (int node : mesh.mesh.triangles[e]) {
    const Vec2 vn = model.velocity(mesh.mesh.nodes[node]);
    v[0] += vn[0];
    v[1] += vn[1];
  }
  return {v[0] / 3.0, v[1] / 3.0};
}

LocalStates gather(const MeshData& mesh, const Field& u, int e) {
  const auto& t = mesh.conn.element_nodes[e];
  return {u[t[0]], u[t[1]], u[t[2]]};
}

void compute_low_order_work(const MeshData& mesh, const FluxModel& model, const Field& u,
                            std::vector<ElementWork>& works) {
  works.resize(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    auto& w = works[e];
    const auto& geom = mesh.geometry[e];
    const LocalStates ul = gather(mesh, u, e);
    w.velocity = element_velocity(model, mesh, e);
    w.ubar = element_average(ul);
    w.d = rusanov_viscosity(model, geom, ul, w.ubar, w.velocity);
    const Flux fbar = model.flux_frozen(w.ubar, w.velocity);
    for (int i = 0; i < 3; ++i) {
      w.bar_states[i] = bar_state(model, geom, i, ul[i], w.ubar, w.d, w.velocity);
      const Flux fi = model.flux_frozen(ul[i], w.velocity);
      w.r_rusanov[i] = w.d * (w.ubar - ul[i]) - dot(fbar, geom.c[i]);
      w.r_bar[i] = w.r_rusanov[i] + dot(fi, geom.c[i]);
    }
  }
}

Field lumped_time_derivative(const MeshData& mesh, const std::vector<ElementWork>& works) {
  Field udot(mesh.num_dofs(), State{});
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& t = mesh.conn.element_nodes[e];
    for (int i = 0; i < 3; ++i) udot[t[i]] += works[e].r_rusanov[i];
  }
  for (int i = 0; i < mesh.num_dofs(); ++i) udot[i] = (1.0 / mesh.lumped_mass[i]) * udot[i];
  return udot;
}

Field lumped_time_derivative(const MeshData& mesh, const FluxModel& model, const Field& u) {
  std::vector<ElementWork> works;
  compute_low_order_work(mesh, model, u, works);
  return lumped_time_derivative(mesh, works);
}

void compute_antidiffusion(const MeshData& mesh, const FluxModel& model, const Field& u,
                           const Field& udot, std::vector<ElementWork>& works) {
  for (int e = 0; e < mesh.num_elements(); ++e) {
    auto& w = works[e];
    w.f = antidiffusive_contributions(model, mesh.geometry[e], gather(mesh, u, e),
                                      gather(mesh, udot, e), w.ubar, w.d, w.velocity);
  }
}

void element_residuals(const MeshData& mesh, const FluxModel& model, const Field& u,
                       const Field& udot, std::vector<ElementWork>& works) {
  for (int e = 0; e < mesh.num_elements(); ++e) {
    auto& w = works[e];
    const auto& geom = mesh.geometry[e];
    const LocalStates ul = gather(mesh, u, e);
    w.r_low = low_order_residual(model, geom, ul, w.velocity);
    w.r_high = high_order_residual(model, geom, ul, gather(mesh, udot, e), w.velocity);
    w.fluctuation = fluctuation(model, geom, ul, w.velocity);
  }
}

}  // namespace cvxfem
