#include "cvxfem/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace cvxfem {

RdWeights rd_weights(const Triple& r) {
  RdWeights w;
  for (double ri : r) {
    w.r_plus += std::max(0.0, ri);
    w.r_minus += std::min(0.0, ri);
  }
  for (int i = 0; i < 3; ++i) {
    w.beta_plus[i] = w.r_plus > 0.0 ? std::max(0.0, r[i]) / w.r_plus : 0.0;
    w.beta_minus[i] = w.r_minus < 0.0 ? std::min(0.0, r[i]) / w.r_minus : 0.0;
  }
  const double total = r[0] + r[1] + r[2];
  if (total != 0.0) w.beta_classical = Triple{r[0] / total, r[1] / total, r[2] / total};
  return w;
}

Triple rd_reconstruct(const RdWeights& w) {
  Triple r{};
  for (int i = 0; i < 3; ++i) r[i] = w.beta_plus[i] * w.r_plus + w.beta_minus[i] * w.r_minus;
  return r;
}

State conserved_totals(const MeshData& mesh, const Field& u) {
  State total{};
  for (int i = 0; i < mesh.num_dofs(); ++i) total += mesh.lumped_mass[i] * u[i];
  return total;
}

namespace {

double violation(const FluxModel& model, const AdmissibleSet& global, const State& u) {
  if (model.is_system()) {
    const double rho = u[0];
    if (!(rho > 0.0)) return -rho;
    return std::max(0.0, -model.internal_energy_density(u));
  }
  return std::max({0.0, global.u_min - u[0], u[0] - global.u_max});
}

}  // namespace

StepReport audit_step(const MeshData& mesh, const FluxModel& model, const AdmissibleSet& global,
                      const Field& u, const StepStats& stats, const State& initial_totals,
                      const State& initial_scale, double t, double dt) {
  const int m = model.m();
  StepReport rep;
  rep.t = t;
  rep.dt = dt;
  rep.min.fill(std::numeric_limits<double>::infinity());
  rep.max.fill(-std::numeric_limits<double>::infinity());
  for (int k = m; k < static_cast<int>(kMaxComponents); ++k) rep.min[k] = rep.max[k] = 0.0;

  for (int i = 0; i < mesh.num_dofs(); ++i) {
    for (int k = 0; k < m; ++k) {
      rep.min[k] = std::min(rep.min[k], u[i][k]);
      rep.max[k] = std::max(rep.max[k], u[i][k]);
    }
    const double v = violation(model, global, u[i]);
    if (v > rep.bound_violation || (std::isnan(v) && rep.bound_violation_node < 0)) {
      rep.bound_violation = v;
      rep.bound_violation_node = i;
    }
    if (!model.admissible(u[i], 0.0, global)) rep.admissible = false;
  }
  rep.total = conserved_totals(mesh, u);

  if (mesh.periodic_closed()) {
    for (int k = 0; k < m; ++k) {
      const double denom = initial_scale[k] > 0.0 ? initial_scale[k] : 1.0;
      rep.conservation_drift =
          std::max(rep.conservation_drift, std::abs(rep.total[k] - initial_totals[k]) / denom);
    }
  }

  for (std::size_t e = 0; e < stats.f_star.size(); ++e) {
    for (int k = 0; k < m; ++k) {
      double sum = 0.0, scale = 0.0;
      for (const State& f : stats.f_star[e]) {
        sum += f[k];
        scale += std::abs(f[k]);
      }
      const double defect = std::abs(sum) / std::max(1.0, scale);
      if (defect > rep.zerosum_defect) {
        rep.zerosum_defect = defect;
        rep.zerosum_element = static_cast<int>(e);
      }
    }
  }

  if (!stats.alpha.empty()) {
    double sum = 0.0;
    rep.alpha_min = 1.0;
    for (double a : stats.alpha) {
      sum += a;
      rep.alpha_min = std::min(rep.alpha_min, a);
    }
    rep.alpha_mean = sum / static_cast<double>(stats.alpha.size());
  }
  return rep;
}

void enforce(const StepReport& r, const AuditTolerances& tol) {
  char buf[256];
  if (!(r.bound_violation <= tol.bounds)) {
    std::snprintf(buf, sizeof buf, "bound violation %.3e at node %d (t = %.17g)", r.bound_violation,
                  r.bound_violation_node, r.t);
    throw AuditFailure(buf);
  }
  if (!(r.conservation_drift <= tol.conservation)) {
    std::snprintf(buf, sizeof buf, "conservation drift %.3e (t = %.17g)", r.conservation_drift, r.t);
    throw AuditFailure(buf);
  }
  if (!(r.zerosum_defect <= tol.conservation)) {
    std::snprintf(buf, sizeof buf, "zero-sum defect %.3e in element %d (t = %.17g)",
                  r.zerosum_defect, r.zerosum_element, r.t);
    throw AuditFailure(buf);
  }
}

ErrorNorms error_norms(const std::vector<double>& mass, const std::vector<Vec2>& points,
                       const std::vector<double>& values, const ExactSolution& exact, double t,
                       int component) {
  ErrorNorms n;
  double l2 = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double e = std::abs(values[i] - exact(points[i], t)[component]);
    n.l1 += mass[i] * e;
    l2 += mass[i] * e * e;
    n.linf = std::max(n.linf, e);
  }
  n.l2 = std::sqrt(l2);
  return n;
}

ErrorNorms error_norms(const MeshData& mesh, const Field& u, const ExactSolution& exact, double t,
                       int component) {
  std::vector<Vec2> points(mesh.num_dofs());
  std::vector<double> values(mesh.num_dofs());
  for (int i = 0; i < mesh.num_dofs(); ++i) {
    points[i] = mesh.dof_position(i);
    values[i] = u[i][component];
  }
  return error_norms(mesh.lumped_mass, points, values, exact, t, component);
}

std::vector<std::string> component_names(const FluxModel& model) {
  if (model.is_system()) return {"rho", "mom_x", "mom_y", "E"};
  return {"u"};
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_header(const FluxModel& model) {
  const auto names = component_names(model);
  std::string h = "t,dt";
  for (const char* prefix : {"min_", "max_", "total_"}) {
    for (const auto& n : names) h += "," + std::string(prefix) + n;
  }
  return h + ",bound_violation,zerosum_defect,alpha_mean\n";
}

std::string csv_row(const FluxModel& model, const StepReport& r) {
  const int m = model.m();
  std::string row = format_double(r.t) + "," + format_double(r.dt);
  for (const State* s : {&r.min, &r.max, &r.total}) {
    for (int k = 0; k < m; ++k) row += "," + format_double((*s)[k]);
  }
  row += "," + format_double(r.bound_violation) + "," + format_double(r.zerosum_defect) + "," +
         format_double(r.alpha_mean) + "\n";
  return row;
}

}  // namespace cvxfem
