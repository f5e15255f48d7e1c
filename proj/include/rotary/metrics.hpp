#pragma once

#include <vector>

#include "rotary/field.hpp"
#include "rotary/state.hpp"

namespace rotary {

// Default thresholds for consensus detection; the globals CSV uses these.
inline constexpr double kDefaultTolGamma = 1e-4;
inline constexpr double kDefaultTolMass = 0.01;
inline constexpr double kDefaultTolCentroid = 1e-3;

struct MetricsRecord {
  double time = 0.0;
  std::vector<double> masses;           // workload of each sector
  std::vector<double> gammas;           // squared gap to the next reference
  std::vector<double> centroid_errors;  // |p_i - centroid_i|
  double lyapunov = 0.0;                // V
  double cost = 0.0;                    // J, quadratic service cost
  double mass_spread = 0.0;             // max_i |m_i - mean| / mean
};

// V = 1/2 sum (m_i - m_{i+1})^2 + 1/2 sum |r_i - r_{i+1}|^2, ring-wrapped.
double lyapunov_value(const SwarmState& state, const std::vector<double>& masses);

// gamma_i = |r_i - r_{i+1}|^2, ring-wrapped.
std::vector<double> gamma(const SwarmState& state);

double mass_spread(const std::vector<double>& masses);

// Quadratic service cost contributed by one agent over one sector:
// integral of |p - q|^2 rho(q) dq, expanded through the fused sector
// integrals so mass/moment/second-moment are reused.
double coverage_cost_sector(const RegionBoundary& region,
                            const DensityField& density, const Vec2& p,
                            const Sector& sector, const QuadratureConfig& quad);

// Total J across the ring partition induced by `state`.
double coverage_cost(const SwarmState& state, const RegionBoundary& region,
                     const DensityField& density, const QuadratureConfig& quad);

bool consensus_reached(const MetricsRecord& record, double tol_gamma,
                       double tol_mass, double tol_centroid);

// One quadrature pass over every agent's sector -> the full record.
MetricsRecord compute_metrics(const SwarmState& state,
                              const RegionBoundary& region,
                              const DensityField& density,
                              const QuadratureConfig& quad);

}  // namespace rotary
