#pragma once

#include <vector>

#include "rotary/errors.hpp"
#include "rotary/state.hpp"

namespace rotary {

struct RingTopology {
  int n = 0;

  int succ(int i) const { return ring_index(i + 1, n); }
  int pred(int i) const { return ring_index(i - 1, n); }
  int pred2(int i) const { return ring_index(i - 2, n); }
};

// Exactly what the ring grants agent i and nothing more: workloads of i-2,
// i-1, i+1; references of i-1 and i+1; the successor's phase (which closes
// agent i's own sector). Rate computations accept this view plus the agent's
// own state — their signatures admit no other source of remote data, which is
// what makes the per-agent computation genuinely local. The NaN-poisoning
// test in the suite leans on this.
struct NeighborView {
  double m_im2 = 0.0;
  double m_im1 = 0.0;
  double m_ip1 = 0.0;
  Vec2 r_im1;
  Vec2 r_ip1;
  double phi_ip1 = 0.0;
};

// The single place where global state is read on an agent's behalf.
// Throws IndexOutOfRange for i outside 0..n-1 or a masses/agents mismatch.
NeighborView neighbor_view(const SwarmState& state,
                           const std::vector<double>& masses, int i);

}  // namespace rotary
