#pragma once

#include <array>
#include <vector>

#include "cvxfem/flux_models.hpp"
#include "cvxfem/mesh.hpp"

namespace cvxfem {

using LocalStates = std::array<State, 3>;

/// Per-element quantities shared by every scheme.
///
/// Three forms of the low-order element residual are kept. `r_rusanov` is
/// the contribution d(ubar - u_i) - f(ubar).c_i. `r_bar` is the bar-state form
/// 2d(ubar_i - u_i) = r_rusanov + f(u_i).c_i, which the schemes assemble: the
/// extra term sums to zero at interior nodes and cancels the boundary-face
/// flux at boundary nodes. `r_low` is the residual-distribution form
/// r_high - f, which carries the element boundary flux -oint(phi_i f_h.n)
/// instead. All three assemble to the same nodal right side on periodic
/// meshes, but only `r_low` sums to the fluctuation element by element.
struct ElementWork {
  Vec2 velocity{};  // frozen advection velocity (zero for nonlinear models)
  State ubar{};
  double d = 0.0;
  LocalStates bar_states{};
  LocalStates r_rusanov{};
  LocalStates r_bar{};
  LocalStates f{};

  // Residual decomposition; filled only by element_residuals().
  LocalStates r_low{};
  LocalStates r_high{};
  State fluctuation{};
};

/// Values of one element gathered from the global state.
struct LocalData {
  LocalStates u{};
  LocalStates udot{};
};

State element_average(const LocalStates& u);

/// d^e = max_i lambda_i |c_i| with lambda_i the wave-speed bound of the
/// Riemann problem (ubar, u_i) in direction c_i/|c_i|.
double rusanov_viscosity(const FluxModel& model, const ElementGeometry& geom, const LocalStates& u,
                         const State& ubar, const Vec2& velocity = {});

/// Bar state of local node i. Falls back to the arithmetic mean when d = 0.
State bar_state(const FluxModel& model, const ElementGeometry& geom, int i, const State& u_i,
                const State& ubar, double d, const Vec2& velocity = {});

/// Rusanov element contribution d(ubar - u_i) - f(ubar).c_i.
LocalStates rusanov_residual(const FluxModel& model, const ElementGeometry& geom,
                             const LocalStates& u, const Vec2& velocity = {});

/// Residual-distribution low-order residual: the Rusanov contribution plus
/// the element boundary flux -oint(phi_i f_h.n), integrated edge by edge.
LocalStates low_order_residual(const FluxModel& model, const ElementGeometry& geom,
                               const LocalStates& u, const Vec2& velocity = {});

/// Galerkin element residual int phi_i (udot_i - udot_h) - int phi_i div f_h
/// with group finite-element fluxes.
LocalStates high_order_residual(const FluxModel& model, const ElementGeometry& geom,
                                const LocalStates& u, const LocalStates& udot,
                                const Vec2& velocity = {});

/// f_i = int phi_i (udot_i - udot_h) + int grad(phi_i).(f_h - f(ubar)) - d(ubar - u_i).
LocalStates antidiffusive_contributions(const FluxModel& model, const ElementGeometry& geom,
                                        const LocalStates& u, const LocalStates& udot,
                                        const State& ubar, double d, const Vec2& velocity = {});

/// r^e = -int div f_h = sum_j f(u_j).c_j.
State fluctuation(const FluxModel& model, const ElementGeometry& geom, const LocalStates& u,
                  const Vec2& velocity = {});

/// Frozen element velocity: mean of the nodal velocities at the element's
/// vertex coordinates. Exact at the centroid for affine velocity fields.
Vec2 element_velocity(const FluxModel& model, const MeshData& mesh, int e);

LocalStates gather(const MeshData& mesh, const Field& u, int e);

/// Pass 1 over the elements: averages, viscosity, bar states and Rusanov
/// contributions. `works` is resized as needed.
void compute_low_order_work(const MeshData& mesh, const FluxModel& model, const Field& u,
                            std::vector<ElementWork>& works);

/// udot_i^L = (1/m_i) sum_e r_i^{e,Rusanov} (interior element terms only).
Field lumped_time_derivative(const MeshData& mesh, const std::vector<ElementWork>& works);
Field lumped_time_derivative(const MeshData& mesh, const FluxModel& model, const Field& u);

/// Pass 2: antidiffusive contributions from the low-order work and udot.
void compute_antidiffusion(const MeshData& mesh, const FluxModel& model, const Field& u,
                           const Field& udot, std::vector<ElementWork>& works);

/// Fills the residual decomposition (r_low, r_high, fluctuation) of every
/// element. Diagnostic path; not needed to advance the solution.
void element_residuals(const MeshData& mesh, const FluxModel& model, const Field& u,
                       const Field& udot, std::vector<ElementWork>& works);

}  // namespace cvxfem
