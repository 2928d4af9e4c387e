#include "cvxfem/schemes.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include "cvxfem/time_integration.hpp"

namespace cvxfem {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCflSlack = 1e-12;

Triple component(const LocalStates& s, int k) { return {s[0][k], s[1][k], s[2][k]}; }

void set_component(LocalStates& s, int k, const Triple& v) {
  for (int i = 0; i < 3; ++i) s[i][k] = v[i];
}

}  // namespace

SchemeOptions parse_limiter(const std::string& name) {
  SchemeOptions o;
  if (name == "none") {
    o.kind = SchemeKind::Galerkin;
    o.limiter = ScalarLimiter::Unlimited;
  } else if (name == "low") {
    o.kind = SchemeKind::LowOrder;
    o.limiter = ScalarLimiter::Zero;
  } else if (name == "fct.scale" || name == "fct.cs" || name == "mcl.scale" || name == "mcl.cs") {
    o.kind = name.rfind("fct", 0) == 0 ? SchemeKind::Fct : SchemeKind::Mcl;
    o.limiter = name.substr(4) == "cs" ? ScalarLimiter::ClipAndScale : ScalarLimiter::Scale;
    if (o.kind == SchemeKind::Fct) o.bounds = BoundsMode::Stencil;
  } else {
    throw ConfigError("unknown limiter '" + name +
                      "' (valid: none, low, fct.scale, fct.cs, mcl.scale, mcl.cs)");
  }
  return o;
}

std::string limiter_name(const SchemeOptions& o) {
  switch (o.kind) {
    case SchemeKind::Galerkin:
      return "none";
    case SchemeKind::LowOrder:
      return "low";
    case SchemeKind::Fct:
    case SchemeKind::Mcl: {
      const std::string prefix = o.kind == SchemeKind::Fct ? "fct" : "mcl";
      switch (o.limiter) {
        case ScalarLimiter::Scale:
          return prefix + ".scale";
        case ScalarLimiter::ClipAndScale:
          return prefix + ".cs";
        case ScalarLimiter::Unlimited:
          return prefix + ".unlimited";
        case ScalarLimiter::Zero:
          return prefix + ".zero";
      }
    }
  }
  return "?";
}

Scheme::Scheme(const MeshData& mesh, const FluxModel& model, SchemeOptions options)
    : mesh_(mesh), model_(model), options_(options) {}

void Scheme::prepare_low_order(const Field& u, double t) {
  compute_low_order_work(mesh_, model_, u, works_);
  const int n = mesh_.num_dofs();
  visc_sum_.assign(n, 0.0);
  low_rhs_.assign(n, State{});
  for (int e = 0; e < mesh_.num_elements(); ++e) {
    const auto& nodes = mesh_.conn.element_nodes[e];
    for (int i = 0; i < 3; ++i) {
      visc_sum_[nodes[i]] += works_[e].d;
      low_rhs_[nodes[i]] += works_[e].r_bar[i];
    }
  }

  // Open boundary: Rusanov flux against the exterior state, written as
  // 2 d_b (bar - u_i) so boundary nodes keep the convex-combination form.
  faces_.resize(mesh_.boundary_faces.size());
  for (std::size_t s = 0; s < faces_.size(); ++s) {
    const auto& face = mesh_.boundary_faces[s];
    const State& u_in = u[face.dof];
    const State u_ext = bc_ ? bc_(face, u_in, t) : u_in;
    const Vec2 v = model_.velocity(mesh_.mesh.nodes[face.node]);
    const double lambda = model_.max_wave_speed(u_in, u_ext, face.unit_normal, v);
    auto& fw = faces_[s];
    fw.d = 0.5 * lambda * norm(face.normal_weight);
    fw.bar = 0.5 * (u_in + u_ext);
    if (lambda > 0.0) {
      const Flux df = model_.flux_frozen(u_ext, v) - model_.flux_frozen(u_in, v);
      fw.bar -= (0.5 / lambda) * dot(df, face.unit_normal);
    }
    visc_sum_[face.dof] += fw.d;
    low_rhs_[face.dof] += (2.0 * fw.d) * (fw.bar - u_in);
  }
}

void Scheme::prepare_antidiffusion(const Field& u) {
  const int n = mesh_.num_dofs();
  udot_.resize(n);
  for (int i = 0; i < n; ++i) udot_[i] = (1.0 / mesh_.lumped_mass[i]) * low_rhs_[i];
  compute_antidiffusion(mesh_, model_, u, udot_, works_);
}

void Scheme::check_cfl(double dt) const {
  for (int i = 0; i < mesh_.num_dofs(); ++i) {
    if (2.0 * dt * visc_sum_[i] > (1.0 + kCflSlack) * mesh_.lumped_mass[i]) {
      throw CflViolation(dt, cfl_limit(mesh_.lumped_mass, visc_sum_));
    }
  }
}

const std::vector<double>& Scheme::viscosity_sums(const Field& u, double t) {
  prepare_low_order(u, t);
  return visc_sum_;
}

double Scheme::admissible_dt(const Field& u, double t) {
  prepare_low_order(u, t);
  return cfl_limit(mesh_.lumped_mass, visc_sum_);
}

Field Scheme::step(const Field& u, double dt, double t) {
  switch (options_.kind) {
    case SchemeKind::LowOrder:
      return low_order_step(u, dt, t);
    case SchemeKind::Fct:
      return fct_step(u, dt, t);
    case SchemeKind::Galerkin:
    case SchemeKind::Mcl:
      return mcl_step(u, dt, t);
  }
  return u;
}

Field Scheme::low_order_step(const Field& u, double dt, double t) {
  prepare_low_order(u, t);
  check_cfl(dt);
  stats_.f_star.clear();
  stats_.alpha.clear();
  Field out(u.size());
  for (int i = 0; i < mesh_.num_dofs(); ++i) {
    out[i] = u[i] + (dt / mesh_.lumped_mass[i]) * low_rhs_[i];
  }
  return out;
}

void Scheme::set_fct_base(const Field& u_low, double dt) {
  base_.resize(mesh_.num_elements());
  gamma_.resize(mesh_.num_elements());
  for (int e = 0; e < mesh_.num_elements(); ++e) {
    const auto& nodes = mesh_.conn.element_nodes[e];
    const double g = mesh_.geometry[e].m_elem / dt;
    for (int i = 0; i < 3; ++i) base_[e][i] = u_low[nodes[i]];
    gamma_[e] = {g, g, g};
  }
}

void Scheme::set_mcl_base() {
  base_.resize(mesh_.num_elements());
  gamma_.resize(mesh_.num_elements());
  for (int e = 0; e < mesh_.num_elements(); ++e) {
    base_[e] = works_[e].bar_states;
    const double g = 2.0 * works_[e].d;
    gamma_[e] = {g, g, g};
  }
}

std::pair<std::vector<double>, std::vector<double>> Scheme::local_bounds(const Field& u, double dt,
                                                                         double t) {
  prepare_low_order(u, t);
  if (options_.kind == SchemeKind::Fct) {
    Field u_low(u.size());
    for (int i = 0; i < mesh_.num_dofs(); ++i) {
      u_low[i] = u[i] + (dt / mesh_.lumped_mass[i]) * low_rhs_[i];
    }
    set_fct_base(u_low, dt);
  } else {
    set_mcl_base();
  }
  std::pair<std::vector<double>, std::vector<double>> b;
  node_bounds(u, [](const State& s) { return s[0]; }, b.first, b.second);
  return b;
}

Field Scheme::fct_step(const Field& u, double dt, double t) {
  prepare_low_order(u, t);
  check_cfl(dt);
  prepare_antidiffusion(u);

  const int n = mesh_.num_dofs();
  Field u_low(n);
  for (int i = 0; i < n; ++i) u_low[i] = u[i] + (dt / mesh_.lumped_mass[i]) * low_rhs_[i];

  set_fct_base(u_low, dt);
  limit(u);

  Field out = u_low;
  for (int e = 0; e < mesh_.num_elements(); ++e) {
    const auto& nodes = mesh_.conn.element_nodes[e];
    for (int i = 0; i < 3; ++i) {
      out[nodes[i]] += (dt / mesh_.lumped_mass[nodes[i]]) * stats_.f_star[e][i];
    }
  }
  return out;
}

Field Scheme::mcl_rhs(const Field& u, double t) {
  prepare_low_order(u, t);
  prepare_antidiffusion(u);

  set_mcl_base();
  limit(u);

  Field rhs = low_rhs_;
  for (int e = 0; e < mesh_.num_elements(); ++e) {
    const auto& nodes = mesh_.conn.element_nodes[e];
    for (int i = 0; i < 3; ++i) rhs[nodes[i]] += stats_.f_star[e][i];
  }
  return rhs;
}

Field Scheme::mcl_step(const Field& u, double dt, double t) {
  const Field rhs = mcl_rhs(u, t);
  check_cfl(dt);
  Field out(u.size());
  for (int i = 0; i < mesh_.num_dofs(); ++i) {
    out[i] = u[i] + (dt / mesh_.lumped_mass[i]) * rhs[i];
  }
  return out;
}

void Scheme::node_bounds(const Field& u, const std::function<double(const State&)>& value,
                         std::vector<double>& lo, std::vector<double>& hi) const {
  const int n = mesh_.num_dofs();
  if (options_.bounds == BoundsMode::Unbounded) {
    lo.assign(n, -kInf);
    hi.assign(n, kInf);
    return;
  }
  const bool fct = options_.kind == SchemeKind::Fct;
  lo.assign(n, kInf);
  hi.assign(n, -kInf);
  const auto include = [&](int i, double v) {
    lo[i] = std::min(lo[i], v);
    hi[i] = std::max(hi[i], v);
  };
  // The base states always lie inside their own bounds, so f* = 0 stays feasible.
  for (int e = 0; e < mesh_.num_elements(); ++e) {
    const auto& nodes = mesh_.conn.element_nodes[e];
    for (int i = 0; i < 3; ++i) include(nodes[i], value(base_[e][i]));
  }
  if (options_.bounds == BoundsMode::BarState) {
    for (int i = 0; i < n; ++i) include(i, value(u[i]));
    for (int e = 0; e < mesh_.num_elements(); ++e) {
      const auto& nodes = mesh_.conn.element_nodes[e];
      for (int i = 0; i < 3; ++i) include(nodes[i], value(works_[e].bar_states[i]));
    }
  } else {
    // Stencil of the old solution (MCL) or of the low-order predictor (FCT).
    std::vector<double> values(n);
    for (int i = 0; i < n; ++i) values[i] = value(u[i]);
    if (fct) {
      for (int e = 0; e < mesh_.num_elements(); ++e) {
        const auto& nodes = mesh_.conn.element_nodes[e];
        for (int i = 0; i < 3; ++i) values[nodes[i]] = value(base_[e][i]);
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j : mesh_.stencil[i]) include(i, values[j]);
    }
  }
}

void Scheme::limit(const Field& u) {
  const int ne = mesh_.num_elements();
  stats_.f_star.assign(ne, LocalStates{});
  stats_.alpha.assign(ne, 1.0);

  if (options_.kind == SchemeKind::Galerkin || options_.limiter == ScalarLimiter::Unlimited) {
    for (int e = 0; e < ne; ++e) stats_.f_star[e] = works_[e].f;
    return;
  }
  if (options_.limiter == ScalarLimiter::Zero) {
    std::fill(stats_.alpha.begin(), stats_.alpha.end(), 0.0);
    return;
  }

  std::vector<double> lo, hi;
  node_bounds(u, [](const State& s) { return s[0]; }, lo, hi);
  if (!model_.is_system()) {
    limit_scalar_contributions(lo, hi);
    return;
  }
  std::array<std::vector<double>, 3> phi_lo, phi_hi;
  for (int k = 0; k < 3; ++k) {
    node_bounds(u, [k](const State& s) { return s[k + 1] / s[0]; }, phi_lo[k], phi_hi[k]);
  }
  if (options_.system == SystemLimiting::Sequential) {
    limit_sequential(lo, hi, phi_lo, phi_hi);
  } else {
    limit_synchronized(lo, hi, phi_lo, phi_hi);
  }
}

void Scheme::limit_scalar_contributions(const std::vector<double>& lo,
                                        const std::vector<double>& hi) {
  for (int e = 0; e < mesh_.num_elements(); ++e) {
    const auto& g = gamma_[e];
    if (!(g[0] > 0.0)) continue;  // d^e = 0: no antidiffusion
    const auto& nodes = mesh_.conn.element_nodes[e];
    const auto bounds =
        make_constraints(g, component(base_[e], 0), {lo[nodes[0]], lo[nodes[1]], lo[nodes[2]]},
                         {hi[nodes[0]], hi[nodes[1]], hi[nodes[2]]});
    const auto r = limit_scalar(options_.limiter, component(works_[e].f, 0), bounds);
    set_component(stats_.f_star[e], 0, r.f_star);
    stats_.alpha[e] = r.alpha_element;
  }
}

void Scheme::limit_sequential(const std::vector<double>& rho_lo, const std::vector<double>& rho_hi,
                              const RatioBounds& phi_lo, const RatioBounds& phi_hi) {
  for (int e = 0; e < mesh_.num_elements(); ++e) {
    const auto& g = gamma_[e];
    if (!(g[0] > 0.0)) continue;  // d^e = 0: no antidiffusion
    const auto& nodes = mesh_.conn.element_nodes[e];
    const auto at = [&nodes](const std::vector<double>& v) {
      return Triple{v[nodes[0]], v[nodes[1]], v[nodes[2]]};
    };
    // Density.
    const Triple base_rho = component(base_[e], 0);
    const auto bounds = make_constraints(g, base_rho, at(rho_lo), at(rho_hi));
    const Triple f_rho_star = limit_scalar(options_.limiter, component(works_[e].f, 0), bounds).f_star;
    set_component(stats_.f_star[e], 0, f_rho_star);
    // Products rho * phi.
    for (int k = 0; k < 3; ++k) {
      const Triple lo = at(phi_lo[k]), hi = at(phi_hi[k]);
      const auto prep = product_rule_prepare(f_rho_star, component(works_[e].f, k + 1), base_rho,
                                             component(base_[e], k + 1), g, lo, hi);
      set_component(stats_.f_star[e], k + 1,
                    product_rule_finish(prep, lo, hi, g, options_.limiter));
    }
    // Remaining quasi-concave constraint (internal energy).
    const double alpha = idp_fix(model_, base_[e], stats_.f_star[e], g, options_.idp_iterations);
    for (auto& s : stats_.f_star[e]) s = alpha * s;
    stats_.alpha[e] = alpha;
  }
}

void Scheme::limit_synchronized(const std::vector<double>& rho_lo,
                                const std::vector<double>& rho_hi, const RatioBounds& phi_lo,
                                const RatioBounds& phi_hi) {
  const int ne = mesh_.num_elements();
  for (int e = 0; e < ne; ++e) {
    const auto& g = gamma_[e];
    if (!(g[0] > 0.0)) continue;
    const auto& nodes = mesh_.conn.element_nodes[e];
    const auto& f = works_[e].f;
    const auto rho_bounds = make_constraints(
        g, component(base_[e], 0), {rho_lo[nodes[0]], rho_lo[nodes[1]], rho_lo[nodes[2]]},
        {rho_hi[nodes[0]], rho_hi[nodes[1]], rho_hi[nodes[2]]});
    double alpha = scaling_limiter(component(f, 0), rho_bounds).alpha_element;

    // Largest alpha keeping (base_k + a f_k/g) / (base_0 + a f_0/g) inside
    // [phi_min, phi_max]; both inequalities are linear in a.
    const auto cap = [&alpha](double slack, double rate) {
      if (rate < 0.0) alpha = std::min(alpha, std::max(slack, 0.0) / -rate);
    };
    for (int i = 0; i < 3 && options_.bounds != BoundsMode::Unbounded; ++i) {
      const State& b = base_[e][i];
      for (int k = 0; k < 3; ++k) {
        const double pmin = phi_lo[k][nodes[i]], pmax = phi_hi[k][nodes[i]];
        cap(b[k + 1] - b[0] * pmin, (f[i][k + 1] - pmin * f[i][0]) / g[i]);
        cap(b[0] * pmax - b[k + 1], (pmax * f[i][0] - f[i][k + 1]) / g[i]);
      }
    }
    LocalStates scaled;
    for (int i = 0; i < 3; ++i) scaled[i] = alpha * f[i];
    const double idp = idp_fix(model_, base_[e], scaled, g, options_.idp_iterations);
    for (int i = 0; i < 3; ++i) stats_.f_star[e][i] = idp * scaled[i];
    stats_.alpha[e] = alpha * idp;
  }
}

}  // namespace cvxfem
