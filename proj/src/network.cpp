#include "rotary/network.hpp"

#include <string>

namespace rotary {

NeighborView neighbor_view(const SwarmState& state,
                           const std::vector<double>& masses, int i) {
  const int n = state.size();
  if (i < 0 || i >= n) {
    throw IndexOutOfRange("neighbor_view: agent index " + std::to_string(i) +
                          " outside 0.." + std::to_string(n - 1));
  }
  if (static_cast<int>(masses.size()) != n) {
    throw IndexOutOfRange("neighbor_view: masses has " +
                          std::to_string(masses.size()) + " entries for " +
                          std::to_string(n) + " agents");
  }
  const RingTopology ring{n};
  NeighborView v;
  v.m_im2 = masses[static_cast<size_t>(ring.pred2(i))];
  v.m_im1 = masses[static_cast<size_t>(ring.pred(i))];
  v.m_ip1 = masses[static_cast<size_t>(ring.succ(i))];
  v.r_im1 = state.agents[static_cast<size_t>(ring.pred(i))].reference;
  v.r_ip1 = state.agents[static_cast<size_t>(ring.succ(i))].reference;
  v.phi_ip1 = state.agents[static_cast<size_t>(ring.succ(i))].phase;
  return v;
}

}  // namespace rotary
