#pragma once

#include <vector>

#include "rotary/vec2.hpp"

namespace rotary {

struct AgentState {
  Vec2 position;      // where the agent physically is
  Vec2 reference;     // anchor of its partition pointer, strictly inside the region
  double phase = 0.0; // pointer angle in [0, 2*pi)
};

struct Gains {
  double kappa_p = 0.04;
  double kappa_phi = 0.045;
  double kappa_r = 0.05;
};

// Agents sit on a ring: agent i's sector runs from its own pointer to its
// successor's, and index arithmetic wraps at both ends.
struct SwarmState {
  std::vector<AgentState> agents;
  double time = 0.0;

  int size() const { return static_cast<int>(agents.size()); }
};

inline int ring_index(int i, int n) { return ((i % n) + n) % n; }

}  // namespace rotary
