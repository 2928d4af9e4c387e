#include "cvxfem/benchmarks.hpp"

#include <cmath>
#include <numbers>

namespace cvxfem {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGaussWidth = 0.15;

Vec2 rotate(const Vec2& x, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {0.5 + c * (x[0] - 0.5) - s * (x[1] - 0.5), 0.5 + s * (x[0] - 0.5) + c * (x[1] - 0.5)};
}

/// Gaussian summed over the nearest periodic images, so that it is smooth on
/// the unit torus.
double periodic_gaussian(const Vec2& x, const Vec2& centre) {
  double u = 0.0;
  for (int a = -1; a <= 1; ++a) {
    for (int b = -1; b <= 1; ++b) {
      const double dx = x[0] - centre[0] + a, dy = x[1] - centre[1] + b;
      u += std::exp(-(dx * dx + dy * dy) / (2.0 * kGaussWidth * kGaussWidth));
    }
  }
  return u;
}

double wrap(double x) { return x - std::floor(x); }

/// Smallest T with T v in Z^2 when the velocity ratio is a fraction with a
/// small denominator; 1 otherwise.
double translation_period(const Vec2& v) {
  const double a = std::abs(v[0]), b = std::abs(v[1]);
  if (a == 0.0 && b == 0.0) return 1.0;
  if (a == 0.0 || b == 0.0) return 1.0 / std::max(a, b);
  for (int q = 1; q <= 64; ++q) {
    const double p = std::round(q * a / b);
    if (p >= 1.0 && std::abs(p - q * a / b) <= 1e-12 * p) return p / a;
  }
  return 1.0;
}

FluxModel build_model(const RunConfig& c) {
  FluxModel model = FluxModel::euler(c.gamma);
  if (c.model == "advection") {
    const VelocitySpec v = c.velocity;
    model = v.rotation ? FluxModel::linear_advection([](const Vec2& x) -> Vec2 {
      return {0.5 - x[1], x[0] - 0.5};
    })
                       : FluxModel::linear_advection([t = v.translation](const Vec2&) { return t; });
  } else if (c.model == "burgers") {
    model = FluxModel::burgers();
  }
  model.set_wave_speed_estimate(c.wave_speed);
  return model;
}

State scalar(double v) { return {v, 0.0, 0.0, 0.0}; }

double solid_bodies(const Vec2& x, BodyKind body) {
  constexpr double r0 = 0.15;
  const auto dist = [&x](double cx, double cy) { return std::hypot(x[0] - cx, x[1] - cy) / r0; };
  if (body == BodyKind::Smooth) {
    const double r = dist(0.25, 0.5);
    return r <= 1.0 ? 0.5 * (1.0 + std::cos(kPi * r)) : 0.0;
  }
  if (dist(0.5, 0.75) <= 1.0 && (std::abs(x[0] - 0.5) >= 0.025 || x[1] >= 0.85)) return 1.0;
  if (const double r = dist(0.5, 0.25); r <= 1.0) return 1.0 - r;
  if (const double r = dist(0.25, 0.5); r <= 1.0) return 0.25 * (1.0 + std::cos(kPi * r));
  return 0.0;
}

Benchmark constant(const RunConfig& c) {
  Benchmark b;
  b.model = build_model(c);
  b.domain.periodic_x = b.domain.periodic_y = true;
  const State u0 = b.model.is_system()
                       ? b.model.conserved({1.0, {0.5, 0.25}, 1.0, 0.0})
                       : scalar(0.5);
  b.initial = [u0](const Vec2&) { return u0; };
  b.exact = [u0](const Vec2&, double) { return u0; };
  return b;
}

Benchmark advected_gaussian(const RunConfig& c) {
  Benchmark b;
  b.model = build_model(c);
  b.domain.periodic_x = b.domain.periodic_y = true;
  if (c.velocity.rotation) {
    const Vec2 centre{0.5, 0.75};
    b.initial = [centre](const Vec2& x) { return scalar(periodic_gaussian(x, centre)); };
    b.exact = [centre](const Vec2& x, double t) {
      return scalar(periodic_gaussian(rotate(x, -t), centre));
    };
  } else {
    const Vec2 centre{0.5, 0.5};
    const Vec2 v = c.velocity.translation;
    b.initial = [centre](const Vec2& x) { return scalar(periodic_gaussian(x, centre)); };
    b.exact = [centre, v](const Vec2& x, double t) {
      return scalar(periodic_gaussian({wrap(x[0] - v[0] * t), wrap(x[1] - v[1] * t)}, centre));
    };
  }
  return b;
}

Benchmark solid_body_rotation(const RunConfig& c) {
  Benchmark b;
  RunConfig rc = c;
  rc.velocity.rotation = true;
  b.model = build_model(rc);
  b.domain.periodic_x = b.domain.periodic_y = true;
  const BodyKind body = c.body;
  b.initial = [body](const Vec2& x) { return scalar(solid_bodies(x, body)); };
  b.exact = [body](const Vec2& x, double t) { return scalar(solid_bodies(rotate(x, -t), body)); };
  return b;
}

Benchmark burgers_riemann(const RunConfig& c) {
  Benchmark b;
  b.model = build_model(c);
  b.domain.periodic_x = b.domain.periodic_y = true;
  b.initial = [](const Vec2& x) {
    if (x[0] < 0.5) return scalar(x[1] > 0.5 ? -0.2 : 0.5);
    return scalar(x[1] > 0.5 ? -1.0 : 0.8);
  };
  return b;
}

Benchmark double_mach(const RunConfig& c) {
  Benchmark b;
  b.model = build_model(c);
  b.domain = {0.0, 4.0, 0.0, 1.0, 4, 1, false, false};
  const FluxModel model = b.model;
  const double rho1 = c.gamma, p1 = 1.0;
  const ShockState s = rankine_hugoniot(c.gamma, rho1, p1, 10.0);
  const double x0 = 1.0 / 6.0;
  const double sqrt3 = std::sqrt(3.0);
  const Vec2 dir{0.5 * sqrt3, -0.5};
  const State pre = model.conserved({rho1, {0.0, 0.0}, p1, 0.0});
  const State post = model.conserved({s.rho, {s.u * dir[0], s.u * dir[1]}, s.p, 0.0});
  // The 60 degree shock line moves horizontally at speed S / cos 30 = 2 S / sqrt 3.
  const double speed = s.shock_speed;
  const auto shock_x = [=](double y, double t) { return x0 + (y + 2.0 * speed * t) / sqrt3; };

  b.initial = [=](const Vec2& x) { return x[0] < shock_x(x[1], 0.0) ? post : pre; };
  b.boundary = [=](const BoundaryFace& f, const State& u_in, double t) -> State {
    const Vec2& x = f.position;
    if (f.tag == "left") return post;
    if (f.tag == "right") return u_in;
    if (f.tag == "top") return x[0] < shock_x(1.0, t) ? post : pre;
    if (f.tag == "bottom") {
      if (x[0] < x0) return post;
      State r = u_in;
      const double mn = u_in[1] * f.unit_normal[0] + u_in[2] * f.unit_normal[1];
      r[1] -= 2.0 * mn * f.unit_normal[0];
      r[2] -= 2.0 * mn * f.unit_normal[1];
      return r;
    }
    throw MeshError("double Mach reflection: unexpected boundary tag '" + f.tag + "'");
  };
  return b;
}

}  // namespace

ShockState rankine_hugoniot(double gamma, double rho, double p, double mach) {
  const double c = std::sqrt(gamma * p / rho);
  const double m2 = mach * mach;
  ShockState s;
  s.shock_speed = mach * c;
  s.rho = rho * (gamma + 1.0) * m2 / ((gamma - 1.0) * m2 + 2.0);
  s.p = p * (1.0 + 2.0 * gamma / (gamma + 1.0) * (m2 - 1.0));
  s.u = s.shock_speed * (1.0 - rho / s.rho);
  return s;
}

const std::vector<std::string>& benchmark_ids() {
  static const std::vector<std::string> ids = {"constant", "advected_gaussian",
                                               "solid_body_rotation", "burgers_riemann", "dmr"};
  return ids;
}

std::string benchmark_model(const std::string& id) {
  if (id == "burgers_riemann") return "burgers";
  if (id == "dmr") return "euler";
  return "advection";
}

double benchmark_t_end(const std::string& id, const VelocitySpec& velocity) {
  if (id == "solid_body_rotation") return 2.0 * kPi;
  if (id == "advected_gaussian" && velocity.rotation) return 2.0 * kPi;
  if (id == "burgers_riemann") return 0.5;
  if (id == "dmr") return 0.2;
  if (id == "advected_gaussian") return translation_period(velocity.translation);
  return 1.0;
}

Benchmark make_benchmark(const RunConfig& c) {
  Benchmark b;
  if (c.benchmark == "constant") b = constant(c);
  else if (c.benchmark == "advected_gaussian") b = advected_gaussian(c);
  else if (c.benchmark == "solid_body_rotation") b = solid_body_rotation(c);
  else if (c.benchmark == "burgers_riemann") b = burgers_riemann(c);
  else if (c.benchmark == "dmr") b = double_mach(c);
  else throw ConfigError("unknown benchmark '" + c.benchmark + "'");
  b.id = c.benchmark;
  return b;
}

Mesh make_mesh(const RunConfig& c, const Benchmark& bench) {
  if (c.mesh.rfind("structured:", 0) != 0) return read_mesh_file(c.mesh);
  const int n = std::stoi(c.mesh.substr(11));
  RectangleSpec spec = bench.domain;
  spec.nx = static_cast<int>(std::lround(n * (spec.x1 - spec.x0)));
  spec.ny = static_cast<int>(std::lround(n * (spec.y1 - spec.y0)));
  return structured_rectangle(spec);
}

Field initial_field(const MeshData& mesh, const InitialCondition& u0) {
  Field u(mesh.num_dofs());
  for (int i = 0; i < mesh.num_dofs(); ++i) u[i] = u0(mesh.dof_position(i));
  return u;
}

}  // namespace cvxfem
