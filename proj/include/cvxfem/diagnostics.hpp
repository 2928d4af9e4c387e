#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cvxfem/flux_models.hpp"
#include "cvxfem/mesh.hpp"
#include "cvxfem/schemes.hpp"

namespace cvxfem {

/// Splitting of three nodal residuals into positive and negative
/// fluctuations with nonnegative weights.
struct RdWeights {
  double r_plus = 0.0;
  double r_minus = 0.0;
  Triple beta_plus{};
  Triple beta_minus{};
  /// Classical weights r_i / r^e, defined only when r^e != 0.
  std::optional<Triple> beta_classical;
};

RdWeights rd_weights(const Triple& r);

/// Reconstructs r_i from the weights: beta_{i,+} r_+ + beta_{i,-} r_-.
Triple rd_reconstruct(const RdWeights& w);

struct AuditTolerances {
  double bounds = 1e-10;        // absolute
  double conservation = 1e-10;  // relative
};

struct StepReport {
  double t = 0.0;
  double dt = 0.0;
  State min{};
  State max{};
  State total{};  // sum_i m_i u_i
  double bound_violation = 0.0;
  int bound_violation_node = -1;
  double conservation_drift = 0.0;  // max relative drift over components
  double zerosum_defect = 0.0;      // relative to the element's contribution scale
  int zerosum_element = -1;
  bool admissible = true;
  double alpha_mean = 1.0;
  double alpha_min = 1.0;
};

/// Conserved totals sum_i m_i u_i.
State conserved_totals(const MeshData& mesh, const Field& u);

/// Recomputes every report quantity from the state and the limited
/// contributions; never reads cached values from the scheme. The
/// conservation drift is only meaningful on closed (periodic) meshes and is
/// reported as zero otherwise. `initial_totals` and `initial_scale`
/// (sum_i m_i |u_i|) define the relative drift.
StepReport audit_step(const MeshData& mesh, const FluxModel& model, const AdmissibleSet& global,
                      const Field& u, const StepStats& stats, const State& initial_totals,
                      const State& initial_scale, double t, double dt);

/// Throws AuditFailure naming the offending node or element when a report
/// exceeds the tolerances.
void enforce(const StepReport& report, const AuditTolerances& tol);

struct ErrorNorms {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

using ExactSolution = std::function<State(const Vec2& x, double t)>;

/// Lumped-mass quadrature: L1 = sum m_i |e_i|, L2 = sqrt(sum m_i e_i^2).
ErrorNorms error_norms(const MeshData& mesh, const Field& u, const ExactSolution& exact, double t,
                       int component = 0);

/// Same norms from plain nodal data (e.g. read back from a VTK file).
ErrorNorms error_norms(const std::vector<double>& mass, const std::vector<Vec2>& points,
                       const std::vector<double>& values, const ExactSolution& exact, double t,
                       int component = 0);

/// Diagnostics CSV: `t,dt,min_*,max_*,total_*,bound_violation,zerosum_defect,alpha_mean`.
std::string csv_header(const FluxModel& model);
std::string csv_row(const FluxModel& model, const StepReport& report);

std::vector<std::string> component_names(const FluxModel& model);

/// printf-style %.17g formatting used by every writer.
std::string format_double(double v);

}  // namespace cvxfem
