#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cvxfem/config.hpp"
#include "cvxfem/diagnostics.hpp"
#include "cvxfem/mesh.hpp"
#include "cvxfem/schemes.hpp"

namespace cvxfem {

using InitialCondition = std::function<State(const Vec2& x)>;

struct Benchmark {
  std::string id;
  RectangleSpec domain;  // mesh recipe; nx, ny are cells per unit length
  FluxModel model;
  InitialCondition initial;
  BoundaryCondition boundary;     // empty: no open boundary expected
  std::optional<ExactSolution> exact;
};

const std::vector<std::string>& benchmark_ids();

/// Model name each benchmark runs with.
std::string benchmark_model(const std::string& id);
/// One period for the advection benchmarks.
double benchmark_t_end(const std::string& id, const VelocitySpec& velocity);

/// Builds the benchmark with the model parameters of the configuration.
Benchmark make_benchmark(const RunConfig& config);

/// Mesh of the configuration: either read from file or generated on the
/// benchmark domain with h = 1/n.
Mesh make_mesh(const RunConfig& config, const Benchmark& bench);

Field initial_field(const MeshData& mesh, const InitialCondition& u0);

/// Post-shock state behind a normal shock moving at Mach `mach` into gas at
/// rest with density rho and pressure p.
struct ShockState {
  double rho = 0.0;
  double p = 0.0;
  double u = 0.0;           // post-shock gas speed along the shock normal
  double shock_speed = 0.0;
};
ShockState rankine_hugoniot(double gamma, double rho, double p, double mach);

}  // namespace cvxfem
