#include "rotary/dynamics.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace rotary {

double phase_rate(double m_im2, double m_im1, double m_i, double m_ip1,
                  double dmi_dphi_i, double dmim1_dphi_i, const Gains& gains) {
  return -gains.kappa_phi * ((2.0 * m_i - m_im1 - m_ip1) * dmi_dphi_i +
                             (2.0 * m_im1 - m_im2 - m_i) * dmim1_dphi_i);
}

Vec2 reference_rate(double m_im1, double m_i, double m_ip1,
                    const Vec2& dmi_dref, const Vec2& r_im1, const Vec2& r_i,
                    const Vec2& r_ip1, const Gains& gains) {
  const double imbalance = 2.0 * m_i - m_im1 - m_ip1;
  const Vec2 laplacian = 2.0 * r_i - r_im1 - r_ip1;
  return -gains.kappa_r * (imbalance * dmi_dref + laplacian);
}

Vec2 control_input(const Vec2& p, const Vec2& p_star, const Gains& gains) {
  return -gains.kappa_p * (p - p_star);
}

Vec2 local_optimum(const RegionBoundary& region, const DensityField& density,
                   const Sector& sector, const QuadratureConfig& quad) {
  return sector_centroid(region, density, sector, quad);
}

Vec2 local_optimum_generic(
    const RegionBoundary& region, const DensityField& density,
    const Sector& sector, const QuadratureConfig& quad,
    const std::function<double(const Vec2&, const Vec2&)>& f,
    const std::function<Vec2(const Vec2&, const Vec2&)>& grad_f) {
  if (sector.width <= 0.0) {
    throw EmptySector("local_optimum: zero-width sector");
  }
  // Freeze the quadrature points once; descent iterations then only
  // re-evaluate the cost integrand.
  struct Node {
    Vec2 q;
    double w;
  };
  std::vector<Node> nodes;
  {
    const auto& ang = unit_quadrature(quad.angular_nodes, quad.scheme);
    const auto& rad = unit_quadrature(quad.radial_nodes, quad.scheme);
    nodes.reserve(ang.size() * rad.size());
    for (const QuadNode& aj : ang) {
      const double theta = sector.phase_start + sector.width * aj.t;
      const double kmax = region.ray_boundary_distance(sector.reference, theta);
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      for (const QuadNode& rk : rad) {
        const double kap = kmax * rk.t;
        const Vec2 q{sector.reference.x + kap * c, sector.reference.y + kap * s};
        nodes.push_back(
            {q, density.eval(q.x, q.y) * kap * sector.width * aj.w * kmax * rk.w});
      }
    }
  }
  auto cost = [&nodes, &f](const Vec2& p) {
    double s = 0.0;
    for (const Node& n : nodes) {
      s += n.w * f(p, n.q);
    }
    return s;
  };
  auto cost_grad = [&nodes, &grad_f](const Vec2& p) {
    Vec2 g;
    for (const Node& n : nodes) {
      g += n.w * grad_f(p, n.q);
    }
    return g;
  };

  Vec2 p = sector_centroid(region, density, sector, quad);
  double fp = cost(p);
  for (int iter = 0; iter < 10000; ++iter) {
    const Vec2 g = cost_grad(p);
    if (norm(g) < 1e-8) {
      return p;
    }
    // Backtracking with the Armijo condition. Near the optimum the predicted
    // decrease drops below the cost's floating-point resolution; allow that
    // much slack or the search stalls at |g| ~ 1e-7 and never terminates.
    const double noise = 1e-12 * std::max(1.0, std::abs(fp));
    double step_len = 1.0;
    for (int bt = 0; bt < 60; ++bt) {
      const Vec2 cand = p - step_len * g;
      const double fc = cost(cand);
      if (fc <= fp - 1e-4 * step_len * norm_sq(g) + noise) {
        p = cand;
        fp = fc;
        break;
      }
      step_len *= 0.5;
    }
  }
  throw NoConvergence("local_optimum: descent did not converge in 10000 iterations");
}

Sector agent_sector(const AgentState& self, double phi_ip1) {
  return Sector::from_phases(self.reference, self.phase, phi_ip1);
}

AgentRates agent_rates(const AgentState& self, const SectorIntegrals& own,
                       const NeighborView& view, const RegionBoundary& region,
                       const DensityField& density, const Gains& gains,
                       const QuadratureConfig& quad) {
  const Sector sec = agent_sector(self, view.phi_ip1);
  if (sec.width <= 0.0 || own.mass <= 0.0) {
    throw EmptySector("agent_rates: sector has no interior");
  }
  const PartitionGradients g = partition_gradients(region, density, sec, quad);
  // The predecessor's sector ends at this agent's pointer; the derivative of
  // its mass with respect to this phase lives on the same ray but anchored at
  // the predecessor's reference.
  const double dmim1_dphi_i =
      ray_integrals(region, density, view.r_im1, self.phase, quad).weighted;

  AgentRates out;
  out.phi_dot = phase_rate(view.m_im2, view.m_im1, own.mass, view.m_ip1,
                           g.dm_dphi_start, dmim1_dphi_i, gains);
  out.r_dot = reference_rate(view.m_im1, own.mass, view.m_ip1, g.dm_dref,
                             view.r_im1, self.reference, view.r_ip1, gains);
  const Vec2 centroid = own.moment * (1.0 / own.mass);
  out.p_dot = control_input(self.position, centroid, gains);
  return out;
}

namespace {

// Re-throws the in-flight exception with the agent's index prefixed, keeping
// its concrete type so callers can still dispatch on it.
[[noreturn]] void rethrow_tagged(int i) {
  const std::string tag = "agent " + std::to_string(i) + ": ";
  try {
    throw;
  } catch (const OriginOutsideRegion& e) {
    throw OriginOutsideRegion(tag + e.what());
  } catch (const NonStarShaped& e) {
    throw NonStarShaped(tag + e.what());
  } catch (const EmptySector& e) {
    throw EmptySector(tag + e.what());
  } catch (const NonFinite& e) {
    throw NonFinite(tag + e.what());
  }
  // Anything else propagates untagged.
}

}  // namespace

std::vector<AgentRates> swarm_rates(const SwarmState& state,
                                    const RegionBoundary& region,
                                    const DensityField& density,
                                    const Gains& gains,
                                    const QuadratureConfig& quad) {
  const int n = state.size();
  // Round one: every agent integrates its own sector.
  std::vector<SectorIntegrals> own(static_cast<size_t>(n));
  std::vector<double> masses(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    try {
      const Sector sec = agent_sector(
          state.agents[static_cast<size_t>(i)],
          state.agents[static_cast<size_t>(ring_index(i + 1, n))].phase);
      own[static_cast<size_t>(i)] = sector_integrals(region, density, sec, quad);
      masses[static_cast<size_t>(i)] = own[static_cast<size_t>(i)].mass;
    } catch (...) {
      rethrow_tagged(i);
    }
  }
  // Round two: rates from own data plus the granted view only.
  std::vector<AgentRates> rates(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    try {
      rates[static_cast<size_t>(i)] =
          agent_rates(state.agents[static_cast<size_t>(i)],
                      own[static_cast<size_t>(i)],
                      neighbor_view(state, masses, i), region, density, gains,
                      quad);
    } catch (...) {
      rethrow_tagged(i);
    }
  }
  return rates;
}

namespace {

SwarmState advance(const SwarmState& base, const std::vector<AgentRates>& k,
                   double h) {
  SwarmState out = base;
  for (size_t i = 0; i < out.agents.size(); ++i) {
    out.agents[i].phase = base.agents[i].phase + h * k[i].phi_dot;
    out.agents[i].reference = base.agents[i].reference + h * k[i].r_dot;
    out.agents[i].position = base.agents[i].position + h * k[i].p_dot;
  }
  return out;
}

}  // namespace

SwarmState step(const SwarmState& state, double dt, IntegratorKind kind,
                const RegionBoundary& region, const DensityField& density,
                const Gains& gains, const QuadratureConfig& quad,
                std::vector<SimEvent>* events) {
  if (!(dt > 0.0)) {
    throw ValidationError("step: dt must be positive");
  }
  const int n = state.size();
  std::vector<double> width_before(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    width_before[static_cast<size_t>(i)] = sector_angular_width(
        state.agents[static_cast<size_t>(i)].phase,
        state.agents[static_cast<size_t>(ring_index(i + 1, n))].phase);
  }

  SwarmState next = state;
  try {
    if (kind == IntegratorKind::Euler) {
      next = advance(state, swarm_rates(state, region, density, gains, quad), dt);
    } else {
      const auto k1 = swarm_rates(state, region, density, gains, quad);
      const auto k2 = swarm_rates(advance(state, k1, 0.5 * dt), region, density, gains, quad);
      const auto k3 = swarm_rates(advance(state, k2, 0.5 * dt), region, density, gains, quad);
      const auto k4 = swarm_rates(advance(state, k3, dt), region, density, gains, quad);
      for (size_t i = 0; i < next.agents.size(); ++i) {
        const double h6 = dt / 6.0;
        next.agents[i].phase =
            state.agents[i].phase +
            h6 * (k1[i].phi_dot + 2.0 * k2[i].phi_dot + 2.0 * k3[i].phi_dot + k4[i].phi_dot);
        next.agents[i].reference =
            state.agents[i].reference +
            h6 * (k1[i].r_dot + 2.0 * k2[i].r_dot + 2.0 * k3[i].r_dot + k4[i].r_dot);
        next.agents[i].position =
            state.agents[i].position +
            h6 * (k1[i].p_dot + 2.0 * k2[i].p_dot + 2.0 * k3[i].p_dot + k4[i].p_dot);
      }
    }
  } catch (const OriginOutsideRegion& e) {
    // An intermediate stage pushed some reference out of the region; the rate
    // evaluation caught it first.
    throw ReferenceEscaped(-1, std::string("reference left the region mid-step (") +
                                   e.what() + ")");
  }

  next.time = state.time + dt;
  for (int i = 0; i < n; ++i) {
    AgentState& a = next.agents[static_cast<size_t>(i)];
    a.phase = wrap_phase(a.phase);
    if (region.level(a.reference) >= 0.0) {
      throw ReferenceEscaped(i, "agent " + std::to_string(i) +
                                    ": reference left the region at t=" +
                                    std::to_string(next.time));
    }
  }
  if (events != nullptr) {
    for (int i = 0; i < n; ++i) {
      const double w_after = sector_angular_width(
          next.agents[static_cast<size_t>(i)].phase,
          next.agents[static_cast<size_t>(ring_index(i + 1, n))].phase);
      const double w_prev = width_before[static_cast<size_t>(i)];
      if (std::abs(w_after - w_prev) > M_PI) {
        events->push_back({next.time, i, "SectorInverted",
                           "angular width jumped from " + std::to_string(w_prev) +
                               " to " + std::to_string(w_after)});
      }
    }
  }
  return next;
}

}  // namespace rotary
