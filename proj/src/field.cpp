#include "rotary/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <utility>

namespace rotary {

void validate(const QuadratureConfig& quad) {
  if (quad.radial_nodes < 4) {
    throw ValidationError("quadrature.radial_nodes: must be at least 4");
  }
  if (quad.angular_nodes < 4) {
    throw ValidationError("quadrature.angular_nodes: must be at least 4");
  }
  if (quad.scheme == QuadScheme::Simpson) {
    if (quad.radial_nodes % 2 != 0) {
      throw ValidationError(
          "quadrature.radial_nodes: Simpson panel count must be even");
    }
    if (quad.angular_nodes % 2 != 0) {
      throw ValidationError(
          "quadrature.angular_nodes: Simpson panel count must be even");
    }
  }
}

namespace {

// Gauss-Legendre nodes by Newton iteration on the Legendre recurrence,
// computed on [-1, 1] and mapped to [0, 1]. Accurate to machine precision for
// the node counts used here; verified against published tables in the tests.
std::vector<QuadNode> gauss_legendre_unit(int n) {
  std::vector<QuadNode> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Tricomi-style initial guess for the i-th root (descending order).
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double deriv = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      deriv = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / deriv;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        break;
      }
    }
    // One more recurrence pass at the converged abscissa for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    deriv = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * deriv * deriv);
    out[static_cast<size_t>(i)] = {0.5 * (x + 1.0), 0.5 * w};
  }
  std::sort(out.begin(), out.end(),
            [](const QuadNode& a, const QuadNode& b) { return a.t < b.t; });
  return out;
}

// Composite Simpson with `panels` panels (even): panels+1 equispaced nodes,
// weights h/3 * {1, 4, 2, 4, ..., 2, 4, 1}.
std::vector<QuadNode> simpson_unit(int panels) {
  const double h = 1.0 / panels;
  std::vector<QuadNode> out(static_cast<size_t>(panels + 1));
  for (int k = 0; k <= panels; ++k) {
    double c = 2.0;
    if (k == 0 || k == panels) {
      c = 1.0;
    } else if (k % 2 == 1) {
      c = 4.0;
    }
    out[static_cast<size_t>(k)] = {h * k, c * h / 3.0};
  }
  return out;
}

}  // namespace

const std::vector<QuadNode>& unit_quadrature(int count, QuadScheme scheme) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<QuadNode>> cache;
  const std::pair<int, int> key{count, static_cast<int>(scheme)};
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache
             .emplace(key, scheme == QuadScheme::GaussLegendre
                               ? gauss_legendre_unit(count)
                               : simpson_unit(count))
             .first;
  }
  return it->second;
}

SectorIntegrals sector_integrals(const RegionBoundary& region,
                                 const DensityField& density,
                                 const Sector& sector,
                                 const QuadratureConfig& quad) {
  SectorIntegrals out;
  if (sector.width <= 0.0) {
    return out;
  }
  const auto& ang = unit_quadrature(quad.angular_nodes, quad.scheme);
  const auto& rad = unit_quadrature(quad.radial_nodes, quad.scheme);
  for (const QuadNode& aj : ang) {
    const double theta = sector.phase_start + sector.width * aj.t;
    const double wj = sector.width * aj.w;
    const double kmax = region.ray_boundary_distance(sector.reference, theta);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    for (const QuadNode& rk : rad) {
      const double kap = kmax * rk.t;
      const double qx = sector.reference.x + kap * c;
      const double qy = sector.reference.y + kap * s;
      // kap is the polar Jacobian; kmax*rk.w completes the radial weight.
      const double f = density.eval(qx, qy) * kap * wj * kmax * rk.w;
      out.mass += f;
      out.moment.x += f * qx;
      out.moment.y += f * qy;
      out.second_moment += f * (qx * qx + qy * qy);
    }
  }
  return out;
}

double sector_mass(const RegionBoundary& region, const DensityField& density,
                   const Sector& sector, const QuadratureConfig& quad) {
  return sector_integrals(region, density, sector, quad).mass;
}

Vec2 sector_moment(const RegionBoundary& region, const DensityField& density,
                   const Sector& sector, const QuadratureConfig& quad) {
  return sector_integrals(region, density, sector, quad).moment;
}

Vec2 sector_centroid(const RegionBoundary& region, const DensityField& density,
                     const Sector& sector, const QuadratureConfig& quad) {
  if (sector.width <= 0.0) {
    throw EmptySector("sector_centroid: zero-width sector has no centroid");
  }
  const SectorIntegrals si = sector_integrals(region, density, sector, quad);
  return si.moment * (1.0 / si.mass);
}

RayIntegrals ray_integrals(const RegionBoundary& region,
                           const DensityField& density, const Vec2& origin,
                           double angle, const QuadratureConfig& quad) {
  const auto& rad = unit_quadrature(quad.radial_nodes, quad.scheme);
  const double kmax = region.ray_boundary_distance(origin, angle);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  RayIntegrals out;
  for (const QuadNode& rk : rad) {
    const double kap = kmax * rk.t;
    const double w = kmax * rk.w;
    const double rho = density.eval(origin.x + kap * c, origin.y + kap * s);
    out.weighted += w * rho * kap;
    out.plain += w * rho;
  }
  return out;
}

PartitionGradients partition_gradients(const RegionBoundary& region,
                                       const DensityField& density,
                                       const Sector& sector,
                                       const QuadratureConfig& quad) {
  const double phi_s = sector.phase_start;
  const double phi_e = sector.phase_start + sector.width;
  const RayIntegrals start = ray_integrals(region, density, sector.reference, phi_s, quad);
  const RayIntegrals end = ray_integrals(region, density, sector.reference, phi_e, quad);
  PartitionGradients g;
  g.dm_dphi_start = -start.weighted;
  g.dm_dphi_end = end.weighted;
  g.dm_dref = Vec2{start.plain * std::sin(phi_s) - end.plain * std::sin(phi_e),
                   -start.plain * std::cos(phi_s) + end.plain * std::cos(phi_e)};
  return g;
}

double grid_mass_oracle(const RegionBoundary& region,
                        const DensityField& density, const Sector& sector,
                        int resolution) {
  double half_w;
  double half_h;
  if (region.is_ellipse()) {
    half_w = region.semi_axis_a();
    half_h = region.semi_axis_b();
  } else {
    half_w = half_h = region.bounding_radius();
  }
  const double dx = 2.0 * half_w / resolution;
  const double dy = 2.0 * half_h / resolution;
  double sum = 0.0;
  for (int i = 0; i < resolution; ++i) {
    const double cx = -half_w + dx * (i + 0.5);
    for (int j = 0; j < resolution; ++j) {
      const double cy = -half_h + dy * (j + 0.5);
      if (point_in_sector(sector, region, {cx, cy})) {
        sum += density.eval(cx, cy);
      }
    }
  }
  return sum * dx * dy;
}

DensityField uniform_density(double value) {
  DensityField d;
  d.eval = [value](double, double) { return value; };
  d.lower_bound = value;
  d.upper_bound = value;
  d.name = "uniform";
  return d;
}

namespace {

double benchmark_eval(double x, double y) {
  const double r = std::sqrt(x * x + y * y);
  const double th = (x == 0.0 && y == 0.0) ? 0.0 : std::atan2(y, x);
  const double s = std::sin(th);
  return 1e-4 * (std::exp(s * s + std::cos(th)) + r);
}

// Min/max of a density over a region's bounding box, restricted to region
// cells. 512 cells per axis is plenty for the documentation-grade bounds we
// store on DensityField.
std::pair<double, double> scan_bounds(const std::function<double(double, double)>& f,
                                      const RegionBoundary& region) {
  double half_w;
  double half_h;
  if (region.is_ellipse()) {
    half_w = region.semi_axis_a();
    half_h = region.semi_axis_b();
  } else {
    half_w = half_h = region.bounding_radius();
  }
  constexpr int kCells = 512;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kCells; ++i) {
    const double x = -half_w + 2.0 * half_w * (i + 0.5) / kCells;
    for (int j = 0; j < kCells; ++j) {
      const double y = -half_h + 2.0 * half_h * (j + 0.5) / kCells;
      if (!region.contains({x, y})) {
        continue;
      }
      const double v = f(x, y);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  return {lo, hi};
}

}  // namespace

DensityField benchmark_density() {
  DensityField d;
  d.eval = benchmark_eval;
  d.name = "paper-s4";
  // The infimum sits just off the origin where the angular factor bottoms
  // out; a closed form is awkward, so scan once and cache.
  static const std::pair<double, double> bounds =
      scan_bounds(benchmark_eval, RegionBoundary::ellipse(5.0, 3.0));
  d.lower_bound = bounds.first;
  d.upper_bound = bounds.second;
  return d;
}

DensityField polynomial_density(const std::vector<PolyTerm>& terms,
                                const RegionBoundary& region) {
  if (terms.empty()) {
    throw ValidationError("density.polynomial: empty term list");
  }
  auto eval = [terms](double x, double y) {
    double v = 0.0;
    for (const PolyTerm& t : terms) {
      v += t.coef * std::pow(x, t.px) * std::pow(y, t.py);
    }
    return v;
  };
  const auto bounds = scan_bounds(eval, region);
  if (!(bounds.first > 0.0)) {
    throw ValidationError(
        "density.polynomial: not strictly positive on the region (min " +
        std::to_string(bounds.first) + ")");
  }
  DensityField d;
  d.eval = std::move(eval);
  d.lower_bound = bounds.first;
  d.upper_bound = bounds.second;
  d.name = "polynomial";
  return d;
}

}  // namespace rotary
