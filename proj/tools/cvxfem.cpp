#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "cvxfem/benchmarks.hpp"
#include "cvxfem/checks.hpp"
#include "cvxfem/config.hpp"
#include "cvxfem/simulation.hpp"
#include "cvxfem/vtk.hpp"

using namespace cvxfem;

namespace {

int solve(const std::string& config_path, const std::string& out, int audit_every, bool quiet) {
  const RunConfig config = read_config_file(config_path);
  RunOptions options;
  if (!out.empty()) options.out_dir = out;
  if (audit_every >= 0) options.audit_every = audit_every;
  options.quiet = quiet;
  const RunResult r = run(config, options);
  if (!r.ok) {
    std::fprintf(stderr, "run failed: %s\n", r.failure.c_str());
    return 2;
  }
  if (!quiet) {
    std::printf("finished: %d steps, t = %.17g, %.2f s\n", r.steps, r.t, r.wall_seconds);
    if (r.norms) {
      std::printf("L1 = %.6e  L2 = %.6e  Linf = %.6e\n", r.norms->l1, r.norms->l2, r.norms->linf);
    }
  }
  return 0;
}

int norms(const std::string& vtk_path, const std::string& exact, const std::string& config_path,
          const std::string& velocity, double time, const std::string& field) {
  RunConfig config;
  if (!config_path.empty()) {
    config = read_config_file(config_path);
    if (config.benchmark != exact) {
      throw ConfigError("config benchmark '" + config.benchmark + "' does not match --exact '" +
                        exact + "'");
    }
  } else {
    std::string text = "mesh = structured:1\nbenchmark = " + exact + "\n";
    if (!velocity.empty()) text += "velocity = " + velocity + "\n";
    config = parse_config(text);
  }
  const Benchmark bench = make_benchmark(config);
  if (!bench.exact) throw ConfigError("benchmark '" + exact + "' has no exact solution");

  const VtkSnapshot snap = read_vtk_file(vtk_path);
  const auto it = snap.fields.find(field);
  if (it == snap.fields.end()) throw Error("field '" + field + "' not found in " + vtk_path);
  const int component = field == "u" || field == "rho" ? 0
                        : field == "mom_x"             ? 1
                        : field == "mom_y"             ? 2
                        : field == "E"                 ? 3
                                                       : -1;
  if (component < 0) throw Error("norms need a conserved field, got '" + field + "'");

  // Without periodic identification every node is its own degree of freedom.
  const MeshData mesh = build_mesh_data(snap.mesh);
  const double t = std::isnan(time) ? snap.time : time;
  const ErrorNorms n =
      error_norms(mesh.lumped_mass, mesh.mesh.nodes, it->second, *bench.exact, t, component);
  std::printf("t = %.17g\nL1 = %.17g\nL2 = %.17g\nLinf = %.17g\n", t, n.l1, n.l2, n.linf);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex-limited continuous finite elements for hyperbolic conservation laws"};
  app.require_subcommand(1);

  std::string config_path, out;
  int audit_every = -1;
  bool quiet = false;
  auto* solve_cmd = app.add_subcommand("solve", "Run a configured benchmark");
  solve_cmd->add_option("config", config_path, "Configuration file")->required();
  solve_cmd->add_option("--out", out, "Output directory (overrides out_dir)");
  solve_cmd->add_option("--audit-every", audit_every, "Audit cadence in steps (0: off)");
  solve_cmd->add_flag("--quiet", quiet, "Suppress progress output");

  RectangleSpec spec;
  std::string mesh_out;
  auto* mesh_cmd = app.add_subcommand("mesh-gen", "Write a structured triangulation");
  mesh_cmd->add_option("--nx", spec.nx, "Cells in x")->required();
  mesh_cmd->add_option("--ny", spec.ny, "Cells in y")->required();
  mesh_cmd->add_option("--x0", spec.x0);
  mesh_cmd->add_option("--x1", spec.x1);
  mesh_cmd->add_option("--y0", spec.y0);
  mesh_cmd->add_option("--y1", spec.y1);
  mesh_cmd->add_flag("--periodic-x", spec.periodic_x);
  mesh_cmd->add_flag("--periodic-y", spec.periodic_y);
  mesh_cmd->add_option("-o,--output", mesh_out, "Mesh file (stdout if omitted)");

  std::uint64_t seed = 1;
  int samples = 1000;
  auto* check_cmd = app.add_subcommand("check", "Run the invariant suite on random data");
  check_cmd->add_option("--seed", seed);
  check_cmd->add_option("--samples", samples)->check(CLI::PositiveNumber);

  std::string vtk_path, exact, norms_config, velocity, field = "u";
  double time = std::nan("");
  auto* norms_cmd = app.add_subcommand("norms", "Error norms of a VTK snapshot");
  norms_cmd->add_option("snapshot", vtk_path, "VTK file")->required();
  norms_cmd->add_option("--exact", exact, "Benchmark providing the exact solution")->required();
  norms_cmd->add_option("--config", norms_config, "Configuration with benchmark parameters");
  norms_cmd->add_option("--velocity", velocity, "Advection velocity: rotation or vx,vy");
  norms_cmd->add_option("--time", time, "Evaluation time (default: snapshot time)");
  norms_cmd->add_option("--field", field, "Field to compare");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) return solve(config_path, out, audit_every, quiet);
    if (*mesh_cmd) {
      const std::string text = write_mesh(structured_rectangle(spec));
      if (mesh_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream f(mesh_out);
        if (!(f << text)) throw Error("cannot write '" + mesh_out + "'");
      }
      return 0;
    }
    if (*check_cmd) {
      bool ok = true;
      for (const auto& r : run_checks(seed, samples)) {
        std::printf("%-28s %s  worst = %.3e  (%s)\n", r.name.c_str(), r.passed ? "PASS" : "FAIL",
                    r.worst, r.detail.c_str());
        ok = ok && r.passed;
      }
      return ok ? 0 : 1;
    }
    if (*norms_cmd) return norms(vtk_path, exact, norms_config, velocity, time, field);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
