#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rotary/field.hpp"
#include "rotary/network.hpp"
#include "rotary/state.hpp"

namespace rotary {

struct AgentRates {
  double phi_dot = 0.0;
  Vec2 r_dot;
  Vec2 p_dot;
};

// Pointer i leads sector i and trails sector i-1, so moving it trades
// workload between the two; dmi_dphi_i < 0 < dmim1_dphi_i. The rate nudges
// both sectors toward the workload of their other neighbors.
double phase_rate(double m_im2, double m_im1, double m_i, double m_ip1,
                  double dmi_dphi_i, double dmim1_dphi_i, const Gains& gains);

// Workload-imbalance descent plus a ring Laplacian pulling adjacent
// references together.
Vec2 reference_rate(double m_im1, double m_i, double m_ip1,
                    const Vec2& dmi_dref, const Vec2& r_im1, const Vec2& r_i,
                    const Vec2& r_ip1, const Gains& gains);

// Proportional steering toward the target position.
Vec2 control_input(const Vec2& p, const Vec2& p_star, const Gains& gains);

// Best position in a sector under quadratic service cost: the density
// centroid, in closed form.
Vec2 local_optimum(const RegionBoundary& region, const DensityField& density,
                   const Sector& sector, const QuadratureConfig& quad);

// Generic-cost variant: f and grad_f take (p, q); minimized by gradient
// descent from the centroid with backtracking line search. Terminates when
// the cost gradient norm drops below 1e-8; throws NoConvergence after 10^4
// iterations.
Vec2 local_optimum_generic(
    const RegionBoundary& region, const DensityField& density,
    const Sector& sector, const QuadratureConfig& quad,
    const std::function<double(const Vec2&, const Vec2&)>& f,
    const std::function<Vec2(const Vec2&, const Vec2&)>& grad_f);

// Agent i's sector as agent i sees it: anchored at its own reference, from
// its own pointer to its successor's.
Sector agent_sector(const AgentState& self, double phi_ip1);

// Everything agent i computes in one round, from its own state and integrals
// plus the granted neighbor view. Also evaluates, at the predecessor's
// reference, the mass derivative of sector i-1 with respect to this agent's
// pointer — that ray is anchored at r_{i-1}, which the view provides.
AgentRates agent_rates(const AgentState& self, const SectorIntegrals& own,
                       const NeighborView& view, const RegionBoundary& region,
                       const DensityField& density, const Gains& gains,
                       const QuadratureConfig& quad);

// All agents' rates against one immutable snapshot. Geometry/field errors are
// rethrown with the offending agent's index prefixed.
std::vector<AgentRates> swarm_rates(const SwarmState& state,
                                    const RegionBoundary& region,
                                    const DensityField& density,
                                    const Gains& gains,
                                    const QuadratureConfig& quad);

enum class IntegratorKind { Euler, Rk4 };

struct SimEvent {
  double time = 0.0;
  int agent = -1;
  std::string kind;
  std::string detail;
};

// One fixed step of the coupled (phi, r, p) system. Phases wrap to [0, 2*pi)
// at the end of the step (rates are periodic, so intermediate stages may run
// on raw angles). A reference point leaving the region is a hard error
// (ReferenceEscaped); a pointer crossing its neighbor — the angular width
// snapping across the 0/2*pi seam between consecutive steps — is recorded in
// `events` and the run continues.
SwarmState step(const SwarmState& state, double dt, IntegratorKind kind,
                const RegionBoundary& region, const DensityField& density,
                const Gains& gains, const QuadratureConfig& quad,
                std::vector<SimEvent>* events = nullptr);

}  // namespace rotary
