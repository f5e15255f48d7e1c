#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rotary/geometry.hpp"

namespace rotary {

/// A strictly positive scalar field over the region, with cached bounds.
/// lower_bound > 0 is what makes sector masses positive and centroids
/// well-defined.
struct DensityField {
  std::function<double(double, double)> eval;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  std::string name;
};

enum class QuadScheme { GaussLegendre, Simpson };

/// Per-axis quadrature resolution: radial nodes along each ray, angular nodes
/// across the sector. For Gauss-Legendre the counts are node counts; for
/// composite Simpson they are panel counts and must be even.
struct QuadratureConfig {
  int radial_nodes = 32;
  int angular_nodes = 32;
  QuadScheme scheme = QuadScheme::GaussLegendre;
};

/// Throws ValidationError when counts are below 4 or Simpson panels are odd.
void validate(const QuadratureConfig& quad);

struct QuadNode {
  double t;  // abscissa in [0, 1]
  double w;  // weight; weights sum to 1
};

/// Nodes and weights on the unit interval, cached per (count, scheme).
/// Thread-safe; the returned reference stays valid for the process lifetime.
const std::vector<QuadNode>& unit_quadrature(int count, QuadScheme scheme);

/// One fused quadrature sweep over a sector in polar form about its
/// reference: mass = integral of rho, moment = integral of rho*(x, y),
/// second_moment = integral of rho*(x^2 + y^2). A zero-width sector yields
/// exact zeros.
struct SectorIntegrals {
  double mass = 0.0;
  Vec2 moment;
  double second_moment = 0.0;
};

SectorIntegrals sector_integrals(const RegionBoundary& region,
                                 const DensityField& density,
                                 const Sector& sector,
                                 const QuadratureConfig& quad);

double sector_mass(const RegionBoundary& region, const DensityField& density,
                   const Sector& sector, const QuadratureConfig& quad);
Vec2 sector_moment(const RegionBoundary& region, const DensityField& density,
                   const Sector& sector, const QuadratureConfig& quad);

/// moment / mass. Throws EmptySector for zero-width sectors.
Vec2 sector_centroid(const RegionBoundary& region, const DensityField& density,
                     const Sector& sector, const QuadratureConfig& quad);

/// Line integrals of the density along the ray from `origin` at `angle`, up
/// to the boundary. `weighted` carries the polar Jacobian kappa and feeds the
/// phase derivatives of mass; `plain` is plain arc length and feeds the
/// reference-point derivative.
struct RayIntegrals {
  double weighted = 0.0;  // integral of rho * kappa dkappa
  double plain = 0.0;     // integral of rho dkappa
};

RayIntegrals ray_integrals(const RegionBoundary& region,
                           const DensityField& density, const Vec2& origin,
                           double angle, const QuadratureConfig& quad);

/// Derivatives of sector mass with respect to the sector's own parameters.
///
/// Signs: advancing the start pointer eats into the sector (negative),
/// advancing the end pointer grows it (positive) — strict for any
/// positive-width sector because the density is strictly positive.
/// dm_dref integrates the density along both pointer segments against their
/// outward normals: n = (sin phi_s, -cos phi_s) on the start pointer and
/// n = (-sin phi_e, cos phi_e) on the end pointer. Those are arc-length line
/// integrals — no kappa weight — while the phase derivatives sweep area and
/// do carry it. Both conventions are pinned by finite-difference tests.
struct PartitionGradients {
  double dm_dphi_start = 0.0;  // < 0
  double dm_dphi_end = 0.0;    // > 0
  Vec2 dm_dref;
};

PartitionGradients partition_gradients(const RegionBoundary& region,
                                       const DensityField& density,
                                       const Sector& sector,
                                       const QuadratureConfig& quad);

/// Brute-force check value: Riemann sum over a resolution^2 grid of the
/// region's bounding box, counting cells whose centers fall in the sector.
/// Converges O(1/resolution); for testing only.
double grid_mass_oracle(const RegionBoundary& region,
                        const DensityField& density, const Sector& sector,
                        int resolution);

DensityField uniform_density(double value = 1.0);

/// The built-in benchmark density (config name "paper-s4"):
/// 1e-4 * (exp(sin^2 th + cos th) + sqrt(x^2 + y^2)) with th = atan2(y, x),
/// and th taken as 0 at the origin. Bounds are found by a one-time grid scan
/// over the default elliptical domain.
DensityField benchmark_density();

/// rho(x, y) = sum of coef * x^px * y^py. Validated strictly positive on the
/// given region (grid scan); throws ValidationError otherwise.
struct PolyTerm {
  int px = 0;
  int py = 0;
  double coef = 0.0;
};

DensityField polynomial_density(const std::vector<PolyTerm>& terms,
                                const RegionBoundary& region);

}  // namespace rotary
