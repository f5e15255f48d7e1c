#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rotary/dynamics.hpp"
#include "rotary/field.hpp"
#include "rotary/state.hpp"

namespace rotary {

struct RegionConfig {
  std::string type = "ellipse";
  double a = 5.0;
  double b = 3.0;
};

// Either a named built-in ("uniform", "paper-s4") or a polynomial coefficient
// table; exactly one of the two.
struct DensityConfig {
  std::string name = "paper-s4";
  std::vector<PolyTerm> polynomial;  // non-empty means: use the table
};

struct IntegratorConfig {
  std::string kind = "rk4";  // "euler" | "rk4"
  double dt = 0.01;
  double t_final = 200.0;
};

struct SimConfig {
  RegionConfig region;
  DensityConfig density;
  int n_agents = 6;
  Gains gains;  // defaults: kappa_p 0.04, kappa_phi 0.045, kappa_r 0.05
  IntegratorConfig integrator;
  QuadratureConfig quadrature;  // default Gauss-Legendre 32x32
  std::uint64_t seed = 0;
  int emit_every = 100;  // steps between output rows
};

/// Parse and validate a JSON config document. Omitted fields keep their
/// defaults (an empty object reproduces the default benchmark setup); unknown
/// keys are rejected so typos fail loudly. Throws ParseError for malformed
/// JSON, ValidationError (naming the offending key) for bad values.
SimConfig parse_config(const std::string& json_text);

/// parse_config over a file's contents. A missing/unreadable file is a
/// ParseError.
SimConfig load_config(const std::string& path);

/// Re-checks cross-field constraints (ranges, Simpson parity, t_final being a
/// step multiple). parse_config calls this; the CLI re-runs it after applying
/// flag overrides.
void validate_config(const SimConfig& cfg);

/// Number of fixed steps a config runs: t_final / dt, which validation
/// guarantees is (numerically) an integer.
long step_count(const SimConfig& cfg);

RegionBoundary build_region(const SimConfig& cfg);
DensityField build_density(const SimConfig& cfg, const RegionBoundary& region);
IntegratorKind integrator_kind(const SimConfig& cfg);

/// Fully-resolved config (defaults filled in) serialized back to JSON text —
/// the "config" block of meta.json.
std::string config_echo_json(const SimConfig& cfg);

}  // namespace rotary
