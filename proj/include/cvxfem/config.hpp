#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "cvxfem/diagnostics.hpp"
#include "cvxfem/flux_models.hpp"
#include "cvxfem/schemes.hpp"
#include "cvxfem/time_integration.hpp"

namespace cvxfem {

/// Advection velocity: solid rotation about (0.5, 0.5) with angular speed 1,
/// or a constant translation.
struct VelocitySpec {
  bool rotation = false;
  Vec2 translation{1.0, 1.0};
};

enum class BodyKind { Slotted, Smooth };

struct RunConfig {
  std::string mesh;                 // file path or "structured:<n>" (h = 1/n)
  std::string model = "advection";  // advection | burgers | euler
  double gamma = 1.4;
  VelocitySpec velocity;
  std::string benchmark = "constant";
  BodyKind body = BodyKind::Slotted;
  WaveSpeedEstimate wave_speed = WaveSpeedEstimate::Simple;

  SchemeOptions scheme;
  TimeControls time;
  double output_every_t = 0.0;  // 0: initial and final snapshot only
  int audit_every = 1;
  AuditTolerances tolerances;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
};

/// Parses flat `key = value` lines; `#` starts a comment. Unknown keys,
/// malformed values and a missing mesh are ConfigErrors. Keys absent from
/// the text take their defaults, with model and t_end defaulting to the
/// benchmark's own choice.
RunConfig parse_config(std::string_view text);
RunConfig read_config_file(const std::string& path);

/// Every key with its effective value, in parseable form.
std::string effective_config(const RunConfig& config);

std::string to_string(const VelocitySpec& v);
std::string to_string(BodyKind b);
std::string to_string(WaveSpeedEstimate w);
std::string to_string(BoundsMode b);
std::string to_string(SystemLimiting s);

}  // namespace cvxfem
