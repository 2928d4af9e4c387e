#pragma once

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cvxfem/flux_models.hpp"
#include "cvxfem/limiters.hpp"
#include "cvxfem/mesh.hpp"
#include "cvxfem/spatial.hpp"

namespace cvxfem {

/// Galerkin: unlimited antidiffusion. LowOrder: Rusanov. Fct: type A
/// predictor-corrector. Mcl: type B monolithic limiting.
enum class SchemeKind { Galerkin, LowOrder, Fct, Mcl };

enum class SystemLimiting { Sequential, Synchronized };

/// Local bounds: BarState uses {u_i} and the bar states (MCL) or
/// {u_i^L, u_i} and the bar states (FCT); Stencil uses the element
/// neighbourhood of the old (MCL) or low-order (FCT) solution; Unbounded
/// switches the local bounds off.
enum class BoundsMode { BarState, Stencil, Unbounded };

struct SchemeOptions {
  SchemeKind kind = SchemeKind::Mcl;
  ScalarLimiter limiter = ScalarLimiter::ClipAndScale;
  SystemLimiting system = SystemLimiting::Sequential;
  BoundsMode bounds = BoundsMode::BarState;
  int idp_iterations = 30;
};

/// Exterior state seen by a boundary face: u_in is the interior nodal state.
using BoundaryCondition =
    std::function<State(const BoundaryFace& face, const State& u_in, double t)>;

/// Limiter statistics of the most recent stage, for auditing.
struct StepStats {
  std::vector<LocalStates> f_star;  // limited contributions per element (empty for low order)
  std::vector<double> alpha;        // per-element correction factor
};

/// Parses `none|low|fct.scale|fct.cs|mcl.scale|mcl.cs` into kind + limiter.
/// FCT defaults to stencil bounds, everything else to bar-state bounds.
SchemeOptions parse_limiter(const std::string& name);
std::string limiter_name(const SchemeOptions& options);

/// Forward-Euler stage operators of all schemes on one mesh. Not
/// thread-safe: each call reuses internal scratch arrays.
class Scheme {
 public:
  Scheme(const MeshData& mesh, const FluxModel& model, SchemeOptions options);

  void set_boundary_condition(BoundaryCondition bc) { bc_ = std::move(bc); }

  const SchemeOptions& options() const { return options_; }
  const MeshData& mesh() const { return mesh_; }
  const FluxModel& model() const { return model_; }

  /// One forward-Euler stage of the configured scheme. Throws CflViolation
  /// before touching the state if dt breaks the CFL condition at u.
  Field step(const Field& u, double dt, double t);

  Field low_order_step(const Field& u, double dt, double t);
  /// Type A: low-order predictor followed by the limited correction.
  Field fct_step(const Field& u, double dt, double t);
  /// m_i du_i/dt assembled from Rusanov terms plus limited antidiffusion.
  Field mcl_rhs(const Field& u, double t);
  /// Forward-Euler step with mcl_rhs.
  Field mcl_step(const Field& u, double dt, double t);

  /// Bounds [u_i^min, u_i^max] of the first component that the limiter
  /// would use for a stage of size dt from u.
  std::pair<std::vector<double>, std::vector<double>> local_bounds(const Field& u, double dt,
                                                                   double t);

  /// Largest CFL-admissible step at state u (CFL number 1).
  double admissible_dt(const Field& u, double t);
  /// Per-node sums of element and boundary viscosities at state u.
  const std::vector<double>& viscosity_sums(const Field& u, double t);

  const StepStats& last_stats() const { return stats_; }
  const std::vector<ElementWork>& works() const { return works_; }

 private:
  struct FaceWork {
    double d = 0.0;
    State bar{};
  };

  void prepare_low_order(const Field& u, double t);
  void prepare_antidiffusion(const Field& u);
  void check_cfl(double dt) const;
  void set_fct_base(const Field& u_low, double dt);
  void set_mcl_base();
  void limit(const Field& u_node_values);
  void limit_scalar_contributions(const std::vector<double>& lo, const std::vector<double>& hi);
  using RatioBounds = std::array<std::vector<double>, 3>;
  void limit_sequential(const std::vector<double>& rho_lo, const std::vector<double>& rho_hi,
                        const RatioBounds& phi_lo, const RatioBounds& phi_hi);
  void limit_synchronized(const std::vector<double>& rho_lo, const std::vector<double>& rho_hi,
                          const RatioBounds& phi_lo, const RatioBounds& phi_hi);
  /// Per-node bounds of value(state) over the configured set of states.
  void node_bounds(const Field& u_node_values, const std::function<double(const State&)>& value,
                   std::vector<double>& lo, std::vector<double>& hi) const;

  const MeshData& mesh_;
  FluxModel model_;
  SchemeOptions options_;
  BoundaryCondition bc_;

  std::vector<ElementWork> works_;
  std::vector<FaceWork> faces_;
  std::vector<double> visc_sum_;
  Field low_rhs_;  // assembled Rusanov right side (times 1, not divided by m)
  Field udot_;
  std::vector<LocalStates> base_;
  std::vector<Triple> gamma_;
  StepStats stats_;
};

}  // namespace cvxfem
