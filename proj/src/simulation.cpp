#include "cvxfem/simulation.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "cvxfem/benchmarks.hpp"
#include "cvxfem/vtk.hpp"

namespace cvxfem {
namespace {

constexpr int kMaxRetries = 50;

}  // namespace

Simulation::Simulation(const MeshData& mesh, const FluxModel& model, SchemeOptions options,
                       TimeControls controls, Field u0, AdmissibleSet global)
    : mesh_(mesh), scheme_(mesh, model, options), controls_(controls), global_(global),
      u_(std::move(u0)) {
  if (static_cast<int>(u_.size()) != mesh.num_dofs()) {
    throw Error("initial field has " + std::to_string(u_.size()) + " values for " +
                std::to_string(mesh.num_dofs()) + " degrees of freedom");
  }
  initial_totals_ = conserved_totals(mesh, u_);
  for (int i = 0; i < mesh.num_dofs(); ++i) {
    for (std::size_t k = 0; k < kMaxComponents; ++k) {
      initial_scale_[k] += mesh.lumped_mass[i] * std::abs(u_[i][k]);
    }
  }
}

void Simulation::set_audit(int every, AuditTolerances tol, std::ostream* csv) {
  audit_every_ = every;
  tol_ = tol;
  if (scheme_.options().kind == SchemeKind::Galerkin) {
    tol_.bounds = std::numeric_limits<double>::infinity();
  }
  csv_ = csv;
  if (csv_) *csv_ << csv_header(scheme_.model());
  if (audit_every_ > 0) audit(0.0);
}

void Simulation::audit(double dt) {
  report_ = audit_step(mesh_, scheme_.model(), global_, u_, scheme_.last_stats(), initial_totals_,
                       initial_scale_, t_, dt);
  if (csv_) *csv_ << csv_row(scheme_.model(), report_);
  enforce(report_, tol_);
}

double Simulation::step(double target) {
  target = std::min(target, controls_.t_end);
  TimeControls c = controls_;
  c.t_end = target;
  double dt = compute_dt(mesh_.lumped_mass, scheme_.viscosity_sums(u_, t_), c, t_);
  const auto map = [this](const Field& v, double h, double s) { return scheme_.step(v, h, s); };
  for (int attempt = 0;; ++attempt) {
    try {
      Field next = ssp_rk_step(controls_.scheme, map, u_, dt, t_, observer_);
      u_ = std::move(next);
      break;
    } catch (const CflViolation& e) {
      if (attempt == kMaxRetries) throw;
      ++retries_;
      dt = std::min(0.95 * dt, controls_.cfl * e.admissible_dt());
    }
  }
  t_ = dt == target - t_ ? target : t_ + dt;
  ++steps_;
  if (audit_every_ > 0 && steps_ % audit_every_ == 0) audit(dt);
  return dt;
}

void Simulation::run_to_end() {
  while (!done()) step(controls_.t_end);
}

RunResult run(const RunConfig& config, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  namespace fs = std::filesystem;
  const fs::path out = options.out_dir.value_or(config.out_dir);
  fs::create_directories(out);
  {
    std::ofstream echo(out / "config.effective");
    echo << effective_config(config);
  }

  RunResult result;
  const Benchmark bench = make_benchmark(config);
  const MeshData mesh = build_mesh_data(make_mesh(config, bench));
  const Field u0 = initial_field(mesh, bench.initial);

  AdmissibleSet global;
  if (!bench.model.is_system()) {
    global.u_min = global.u_max = u0[0][0];
    for (const State& s : u0) {
      global.u_min = std::min(global.u_min, s[0]);
      global.u_max = std::max(global.u_max, s[0]);
    }
  }
  for (int i = 0; i < mesh.num_dofs(); ++i) {
    if (!bench.model.admissible(u0[i], 0.0, global)) {
      throw InadmissibleState("initial state is not admissible at node " + std::to_string(i));
    }
  }

  std::ofstream csv(out / "diagnostics.csv", std::ios::binary);
  Simulation sim(mesh, bench.model, config.scheme, config.time, u0, global);
  if (bench.boundary) sim.set_boundary_condition(bench.boundary);

  int snapshot = 0;
  const auto write_snapshot = [&] {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%04d.vtk", snapshot++);
    write_vtk(mesh, bench.model, sim.state(), sim.time(), (out / name).string());
  };

  try {
    sim.set_audit(options.audit_every.value_or(config.audit_every), config.tolerances, &csv);
    write_snapshot();
    const double every = config.output_every_t;
    double next = every > 0.0 ? every : config.time.t_end;
    while (!sim.done()) {
      sim.step(next);
      if (sim.time() >= next) {
        write_snapshot();
        if (!options.quiet) {
          std::printf("t = %.6g  steps = %d\n", sim.time(), sim.steps());
        }
        next = every > 0.0 ? std::min(next + every, config.time.t_end) : config.time.t_end;
      }
    }
    if (snapshot == 1) write_snapshot();
  } catch (const Error& e) {
    char ctx[96];
    std::snprintf(ctx, sizeof ctx, "step %d, t = %.17g: ", sim.steps() + 1, sim.time());
    result.ok = false;
    result.failure = ctx + std::string(e.what());
  }

  result.steps = sim.steps();
  result.t = sim.time();
  result.u = sim.state();
  result.final_report = sim.last_report();
  if (bench.exact && result.ok) result.norms = error_norms(mesh, sim.state(), *bench.exact, sim.time());
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::ofstream summary(out / "summary.txt");
  summary << "benchmark = " << config.benchmark << "\n"
          << "model = " << bench.model.name() << "\n"
          << "limiter = " << limiter_name(config.scheme) << "\n"
          << "dofs = " << mesh.num_dofs() << "\n"
          << "elements = " << mesh.num_elements() << "\n"
          << "steps = " << result.steps << "\n"
          << "cfl_retries = " << sim.retries() << "\n"
          << "t = " << format_double(result.t) << "\n"
          << "wall_seconds = " << result.wall_seconds << "\n";
  const auto names = component_names(bench.model);
  State lo, hi;
  lo.fill(std::numeric_limits<double>::infinity());
  hi.fill(-std::numeric_limits<double>::infinity());
  for (const State& s : result.u) {
    for (std::size_t k = 0; k < names.size(); ++k) {
      lo[k] = std::min(lo[k], s[k]);
      hi[k] = std::max(hi[k], s[k]);
    }
  }
  for (std::size_t k = 0; k < names.size(); ++k) {
    summary << "min_" << names[k] << " = " << format_double(lo[k]) << "\n"
            << "max_" << names[k] << " = " << format_double(hi[k]) << "\n";
  }
  if (bench.model.is_system()) {
    double pmin = std::numeric_limits<double>::infinity();
    for (const State& s : result.u) pmin = std::min(pmin, bench.model.pressure(s));
    summary << "min_pressure = " << format_double(pmin) << "\n";
  }
  if (result.norms) {
    summary << "error_l1 = " << format_double(result.norms->l1) << "\n"
            << "error_l2 = " << format_double(result.norms->l2) << "\n"
            << "error_linf = " << format_double(result.norms->linf) << "\n";
  }
  summary << "status = " << (result.ok ? "ok" : "FAILED: " + result.failure) << "\n";
  return result;
}

}  // namespace cvxfem
