#include "cvxfem/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cvxfem/benchmarks.hpp"

namespace cvxfem {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  double v = 0.0;
  in >> v;
  if (in.fail() || !(in >> std::ws).eof()) {
    throw ConfigError("key '" + key + "': malformed number '" + value + "'");
  }
  return v;
}

long long to_integer(const std::string& key, const std::string& value) {
  long long v = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("key '" + key + "': malformed integer '" + value + "'");
  }
  return v;
}

template <class T>
T choose(const std::string& key, const std::string& value,
         const std::vector<std::pair<std::string, T>>& options) {
  std::string valid;
  for (const auto& [name, v] : options) {
    if (name == value) return v;
    valid += (valid.empty() ? "" : ", ") + name;
  }
  throw ConfigError("key '" + key + "': unknown value '" + value + "' (valid: " + valid + ")");
}

VelocitySpec parse_velocity(const std::string& value) {
  VelocitySpec v;
  if (value == "rotation") {
    v.rotation = true;
    return v;
  }
  const auto comma = value.find(',');
  if (comma == std::string::npos) {
    throw ConfigError("key 'velocity': expected 'rotation' or 'vx,vy', got '" + value + "'");
  }
  v.translation = {to_double("velocity", trim(value.substr(0, comma))),
                   to_double("velocity", trim(value.substr(comma + 1)))};
  return v;
}

const std::set<std::string> kKeys = {
    "mesh",   "model",   "gamma",          "velocity",    "benchmark",     "body",
    "limiter", "system_limiter", "idp_fix", "bounds",     "cfl",           "t_end",
    "rk",     "dt_max",  "output_every_t", "audit_every", "tol_bounds",    "tol_conservation",
    "seed",   "out_dir", "wave_speed"};

}  // namespace

std::string to_string(const VelocitySpec& v) {
  if (v.rotation) return "rotation";
  return format_double(v.translation[0]) + "," + format_double(v.translation[1]);
}

std::string to_string(BodyKind b) { return b == BodyKind::Slotted ? "slotted" : "smooth"; }

std::string to_string(WaveSpeedEstimate w) {
  return w == WaveSpeedEstimate::Simple ? "simple" : "guaranteed";
}

std::string to_string(BoundsMode b) {
  switch (b) {
    case BoundsMode::BarState:
      return "barstate";
    case BoundsMode::Stencil:
      return "stencil";
    case BoundsMode::Unbounded:
      return "none";
  }
  return "?";
}

std::string to_string(SystemLimiting s) {
  return s == SystemLimiting::Sequential ? "sequential" : "synchronized";
}

RunConfig parse_config(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (!kKeys.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (value.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty value for '" + key + "'");
    if (kv.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    kv[key] = value;
  }

  RunConfig c;
  const auto has = [&](const char* k) { return kv.count(k) > 0; };

  // Enumerations first.
  if (has("benchmark")) {
    std::vector<std::pair<std::string, std::string>> ids;
    for (const auto& id : benchmark_ids()) ids.emplace_back(id, id);
    c.benchmark = choose("benchmark", kv["benchmark"], ids);
  }
  c.model = has("model") ? choose<std::string>("model", kv["model"],
                                               {{"advection", "advection"},
                                                {"burgers", "burgers"},
                                                {"euler", "euler"}})
                         : benchmark_model(c.benchmark);
  if (c.benchmark != "constant" && c.model != benchmark_model(c.benchmark)) {
    throw ConfigError("benchmark '" + c.benchmark + "' requires model '" +
                      benchmark_model(c.benchmark) + "', got '" + c.model + "'");
  }
  if (has("limiter")) {
    const auto o = parse_limiter(kv["limiter"]);
    c.scheme.kind = o.kind;
    c.scheme.limiter = o.limiter;
    c.scheme.bounds = o.bounds;
  }
  if (has("system_limiter")) {
    c.scheme.system = choose<SystemLimiting>("system_limiter", kv["system_limiter"],
                                             {{"sequential", SystemLimiting::Sequential},
                                              {"synchronized", SystemLimiting::Synchronized}});
  }
  if (has("idp_fix")) choose<int>("idp_fix", kv["idp_fix"], {{"bisection", 0}});
  if (has("bounds")) {
    c.scheme.bounds = choose<BoundsMode>("bounds", kv["bounds"],
                                         {{"barstate", BoundsMode::BarState},
                                          {"stencil", BoundsMode::Stencil},
                                          {"none", BoundsMode::Unbounded}});
  }
  if (has("rk")) c.time.scheme = parse_rk_scheme(kv["rk"]);
  if (has("body")) {
    c.body = choose<BodyKind>("body", kv["body"],
                              {{"slotted", BodyKind::Slotted}, {"smooth", BodyKind::Smooth}});
  }
  if (has("wave_speed")) {
    c.wave_speed = choose<WaveSpeedEstimate>(
        "wave_speed", kv["wave_speed"],
        {{"simple", WaveSpeedEstimate::Simple}, {"guaranteed", WaveSpeedEstimate::Guaranteed}});
  }
  if (has("velocity")) c.velocity = parse_velocity(kv["velocity"]);
  else c.velocity.rotation = c.benchmark == "solid_body_rotation";

  // Numbers.
  if (has("gamma")) c.gamma = to_double("gamma", kv["gamma"]);
  if (!(c.gamma > 1.0)) throw ConfigError("key 'gamma' must exceed 1");
  if (has("cfl")) c.time.cfl = to_double("cfl", kv["cfl"]);
  if (!(c.time.cfl > 0.0) || c.time.cfl > 1.0) throw ConfigError("key 'cfl' must lie in (0, 1]");
  c.time.t_end = has("t_end") ? to_double("t_end", kv["t_end"]) : benchmark_t_end(c.benchmark, c.velocity);
  if (!(c.time.t_end >= 0.0)) throw ConfigError("key 't_end' must be nonnegative");
  if (has("dt_max")) c.time.dt_max = to_double("dt_max", kv["dt_max"]);
  if (!(c.time.dt_max > 0.0)) throw ConfigError("key 'dt_max' must be positive");
  if (has("output_every_t")) c.output_every_t = to_double("output_every_t", kv["output_every_t"]);
  if (!(c.output_every_t >= 0.0)) throw ConfigError("key 'output_every_t' must be nonnegative");
  if (has("audit_every")) c.audit_every = static_cast<int>(to_integer("audit_every", kv["audit_every"]));
  if (c.audit_every < 0) throw ConfigError("key 'audit_every' must be nonnegative");
  if (has("tol_bounds")) c.tolerances.bounds = to_double("tol_bounds", kv["tol_bounds"]);
  if (has("tol_conservation")) {
    c.tolerances.conservation = to_double("tol_conservation", kv["tol_conservation"]);
  }
  if (!(c.tolerances.bounds >= 0.0) || !(c.tolerances.conservation >= 0.0)) {
    throw ConfigError("audit tolerances must be nonnegative");
  }
  if (has("seed")) {
    const auto s = to_integer("seed", kv["seed"]);
    if (s < 0) throw ConfigError("key 'seed' must be nonnegative");
    c.seed = static_cast<std::uint64_t>(s);
  }
  if (has("out_dir")) c.out_dir = kv["out_dir"];

  if (!has("mesh")) throw ConfigError("missing required key 'mesh'");
  c.mesh = kv["mesh"];
  if (c.mesh.rfind("structured:", 0) == 0) {
    const auto n = to_integer("mesh", c.mesh.substr(11));
    if (n <= 0) throw ConfigError("key 'mesh': structured resolution must be positive");
  }
  return c;
}

RunConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string effective_config(const RunConfig& c) {
  std::string s;
  const auto put = [&s](const std::string& k, const std::string& v) { s += k + " = " + v + "\n"; };
  put("mesh", c.mesh);
  put("benchmark", c.benchmark);
  put("model", c.model);
  put("gamma", format_double(c.gamma));
  put("velocity", to_string(c.velocity));
  put("body", to_string(c.body));
  put("wave_speed", to_string(c.wave_speed));
  put("limiter", limiter_name(c.scheme));
  put("system_limiter", to_string(c.scheme.system));
  put("idp_fix", "bisection");
  put("bounds", to_string(c.scheme.bounds));
  put("cfl", format_double(c.time.cfl));
  put("t_end", format_double(c.time.t_end));
  put("rk", to_string(c.time.scheme));
  if (std::isfinite(c.time.dt_max)) put("dt_max", format_double(c.time.dt_max));
  put("output_every_t", format_double(c.output_every_t));
  put("audit_every", std::to_string(c.audit_every));
  put("tol_bounds", format_double(c.tolerances.bounds));
  put("tol_conservation", format_double(c.tolerances.conservation));
  put("seed", std::to_string(c.seed));
  put("out_dir", c.out_dir);
  return s;
}

}  // namespace cvxfem
