#include "rotary/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "rotary/dynamics.hpp"

namespace rotary {

double lyapunov_value(const SwarmState& state, const std::vector<double>& masses) {
  const int n = state.size();
  double v = 0.0;
  for (int i = 0; i < n; ++i) {
    const int j = ring_index(i + 1, n);
    const double dm = masses[static_cast<size_t>(i)] - masses[static_cast<size_t>(j)];
    v += 0.5 * dm * dm;
    v += 0.5 * norm_sq(state.agents[static_cast<size_t>(i)].reference -
                       state.agents[static_cast<size_t>(j)].reference);
  }
  return v;
}

std::vector<double> gamma(const SwarmState& state) {
  const int n = state.size();
  std::vector<double> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int j = ring_index(i + 1, n);
    out[static_cast<size_t>(i)] =
        norm_sq(state.agents[static_cast<size_t>(i)].reference -
                state.agents[static_cast<size_t>(j)].reference);
  }
  return out;
}

double mass_spread(const std::vector<double>& masses) {
  double mean = 0.0;
  for (double m : masses) {
    mean += m;
  }
  mean /= static_cast<double>(masses.size());
  double worst = 0.0;
  for (double m : masses) {
    worst = std::max(worst, std::abs(m - mean));
  }
  return worst / mean;
}

double coverage_cost_sector(const RegionBoundary& region,
                            const DensityField& density, const Vec2& p,
                            const Sector& sector, const QuadratureConfig& quad) {
  const SectorIntegrals si = sector_integrals(region, density, sector, quad);
  // |p - q|^2 = |p|^2 - 2 p.q + |q|^2 under the density integral.
  return norm_sq(p) * si.mass - 2.0 * dot(p, si.moment) + si.second_moment;
}

double coverage_cost(const SwarmState& state, const RegionBoundary& region,
                     const DensityField& density, const QuadratureConfig& quad) {
  const int n = state.size();
  double j_total = 0.0;
  for (int i = 0; i < n; ++i) {
    const AgentState& a = state.agents[static_cast<size_t>(i)];
    const Sector sec = agent_sector(
        a, state.agents[static_cast<size_t>(ring_index(i + 1, n))].phase);
    j_total += coverage_cost_sector(region, density, a.position, sec, quad);
  }
  return j_total;
}

bool consensus_reached(const MetricsRecord& record, double tol_gamma,
                       double tol_mass, double tol_centroid) {
  double worst_gamma = 0.0;
  for (double g : record.gammas) {
    worst_gamma = std::max(worst_gamma, g);
  }
  double worst_centroid = 0.0;
  for (double e : record.centroid_errors) {
    worst_centroid = std::max(worst_centroid, e);
  }
  // Derive the spread from the masses rather than trusting the cached field,
  // so partially filled records cannot read as converged.
  return worst_gamma < tol_gamma && mass_spread(record.masses) < tol_mass &&
         worst_centroid < tol_centroid;
}

MetricsRecord compute_metrics(const SwarmState& state,
                              const RegionBoundary& region,
                              const DensityField& density,
                              const QuadratureConfig& quad) {
  const int n = state.size();
  MetricsRecord rec;
  rec.time = state.time;
  rec.masses.resize(static_cast<size_t>(n));
  rec.centroid_errors.resize(static_cast<size_t>(n));
  rec.cost = 0.0;
  for (int i = 0; i < n; ++i) {
    const AgentState& a = state.agents[static_cast<size_t>(i)];
    const Sector sec = agent_sector(
        a, state.agents[static_cast<size_t>(ring_index(i + 1, n))].phase);
    const SectorIntegrals si = sector_integrals(region, density, sec, quad);
    rec.masses[static_cast<size_t>(i)] = si.mass;
    const Vec2 centroid = si.moment * (1.0 / si.mass);
    rec.centroid_errors[static_cast<size_t>(i)] = norm(a.position - centroid);
    rec.cost += norm_sq(a.position) * si.mass - 2.0 * dot(a.position, si.moment) +
                si.second_moment;
  }
  rec.gammas = gamma(state);
  rec.lyapunov = lyapunov_value(state, rec.masses);
  rec.mass_spread = mass_spread(rec.masses);
  return rec;
}

}  // namespace rotary
