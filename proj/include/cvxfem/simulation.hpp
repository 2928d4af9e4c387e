#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>

#include "cvxfem/config.hpp"
#include "cvxfem/diagnostics.hpp"
#include "cvxfem/schemes.hpp"
#include "cvxfem/time_integration.hpp"

namespace cvxfem {

/// SSP Runge-Kutta time loop around one Scheme, with optional audits.
class Simulation {
 public:
  Simulation(const MeshData& mesh, const FluxModel& model, SchemeOptions options,
             TimeControls controls, Field u0, AdmissibleSet global = {});

  void set_boundary_condition(BoundaryCondition bc) { scheme_.set_boundary_condition(std::move(bc)); }
  void set_stage_observer(std::function<void(int, const Field&)> f) { observer_ = std::move(f); }

  /// Audit every `every` steps (0 disables); rows go to `csv` when given.
  /// Bounds are enforced only for schemes that claim to preserve them.
  void set_audit(int every, AuditTolerances tol, std::ostream* csv = nullptr);

  /// Advances one step, truncated to land exactly on min(target, t_end).
  /// A stage that breaks the CFL condition is retried with a smaller step.
  double step(double target);
  void run_to_end();

  bool done() const { return t_ >= controls_.t_end; }
  const Field& state() const { return u_; }
  double time() const { return t_; }
  int steps() const { return steps_; }
  int retries() const { return retries_; }
  const StepReport& last_report() const { return report_; }
  const Scheme& scheme() const { return scheme_; }

 private:
  void audit(double dt);

  const MeshData& mesh_;
  Scheme scheme_;
  TimeControls controls_;
  AdmissibleSet global_;
  Field u_;
  double t_ = 0.0;
  int steps_ = 0;
  int retries_ = 0;

  std::function<void(int, const Field&)> observer_;
  int audit_every_ = 0;
  AuditTolerances tol_;
  std::ostream* csv_ = nullptr;
  State initial_totals_{};
  State initial_scale_{};
  StepReport report_;
};

struct RunOptions {
  std::optional<std::string> out_dir;
  std::optional<int> audit_every;
  bool quiet = false;
};

struct RunResult {
  bool ok = true;
  std::string failure;
  int steps = 0;
  double t = 0.0;
  double wall_seconds = 0.0;
  std::optional<ErrorNorms> norms;
  StepReport final_report;
  Field u;
};

/// Runs a configured benchmark and writes config.effective, diagnostics.csv,
/// snapshot_NNNN.vtk and summary.txt into the output directory.
RunResult run(const RunConfig& config, const RunOptions& options = {});

}  // namespace cvxfem
