#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cvxfem {

using Vec2 = std::array<double, 2>;

/// Conserved-variable vector. Scalar problems use component 0 only; the
/// compressible Euler equations use (rho, rho*vx, rho*vy, E).
constexpr std::size_t kMaxComponents = 4;
using State = std::array<double, kMaxComponents>;

/// Flux tensor f(u) stored column-wise: x holds the x-direction flux of every
/// component and y the y-direction flux.
struct Flux {
  State x{};
  State y{};
};

using Field = std::vector<State>;

inline State operator+(const State& a, const State& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}
inline State operator-(const State& a, const State& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}
inline State operator*(double s, const State& a) {
  return {s * a[0], s * a[1], s * a[2], s * a[3]};
}
inline State& operator+=(State& a, const State& b) {
  for (std::size_t k = 0; k < kMaxComponents; ++k) a[k] += b[k];
  return a;
}
inline State& operator-=(State& a, const State& b) {
  for (std::size_t k = 0; k < kMaxComponents; ++k) a[k] -= b[k];
  return a;
}

/// f(u) . c for every component.
inline State dot(const Flux& f, const Vec2& c) {
  State r;
  for (std::size_t k = 0; k < kMaxComponents; ++k) r[k] = f.x[k] * c[0] + f.y[k] * c[1];
  return r;
}

inline Flux operator-(const Flux& a, const Flux& b) { return {a.x - b.x, a.y - b.y}; }

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Vec2& a) { return std::hypot(a[0], a[1]); }

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class MeshError : public Error {
 public:
  using Error::Error;
};

class InadmissibleState : public Error {
 public:
  using Error::Error;
};

/// Raised by a forward-Euler stage whose time step breaks the CFL condition.
/// Carries the largest step the stage would have accepted.
class CflViolation : public Error {
 public:
  CflViolation(double dt, double admissible_dt)
      : Error("time step " + std::to_string(dt) + " violates the CFL condition (admissible " +
              std::to_string(admissible_dt) + ")"),
        admissible_dt_(admissible_dt) {}
  double admissible_dt() const { return admissible_dt_; }

 private:
  double admissible_dt_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class AuditFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace cvxfem
