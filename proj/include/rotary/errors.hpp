#pragma once

#include <stdexcept>
#include <string>

namespace rotary {

// Base for everything that can go wrong while the dynamics are running.
// The CLI maps these to exit code 2.
struct SimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A ray or sector was anchored at a point that is not strictly inside the
// region (the polar parameterization is undefined there).
struct OriginOutsideRegion : SimError {
  using SimError::SimError;
};

// A ray from an interior point crossed the boundary more than once; the
// sector construction silently mis-integrates on such regions, so we refuse.
struct NonStarShaped : SimError {
  using SimError::SimError;
};

struct EmptySector : SimError {
  using SimError::SimError;
};

struct NonFinite : SimError {
  using SimError::SimError;
};

struct IndexOutOfRange : SimError {
  using SimError::SimError;
};

struct NoConvergence : SimError {
  using SimError::SimError;
};

struct ReferenceEscaped : SimError {
  int agent;  // -1 when the offending agent is only known from the message
  ReferenceEscaped(int agent_idx, const std::string& what)
      : SimError(what), agent(agent_idx) {}
};

// Configuration problems. The CLI maps these to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : ConfigError {
  using ConfigError::ConfigError;
};
struct ValidationError : ConfigError {
  using ConfigError::ConfigError;
};

}  // namespace rotary
