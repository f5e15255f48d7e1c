#include "rotary/geometry.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace rotary {

double wrap_phase(double phi) {
  if (!std::isfinite(phi)) {
    throw NonFinite("wrap_phase: angle is not finite");
  }
  double w = phi - kTwoPi * std::floor(phi / kTwoPi);
  // For tiny negative inputs the subtraction above rounds to exactly 2*pi;
  // clamp so the result honors the half-open interval.
  if (w >= kTwoPi) {
    w = 0.0;
  }
  return w;
}

double sector_angular_width(double phase_start, double phase_end) {
  return wrap_phase(phase_end - phase_start);
}

RegionBoundary RegionBoundary::ellipse(double semi_axis_a, double semi_axis_b) {
  RegionBoundary r;
  r.kind_ = Kind::Ellipse;
  r.a_ = semi_axis_a;
  r.b_ = semi_axis_b;
  r.bounding_radius_ = std::max(semi_axis_a, semi_axis_b);
  return r;
}

RegionBoundary RegionBoundary::implicit(std::function<double(double, double)> level,
                                        double bounding_radius) {
  RegionBoundary r;
  r.kind_ = Kind::Implicit;
  r.level_ = std::move(level);
  r.bounding_radius_ = bounding_radius;
  return r;
}

double RegionBoundary::level(const Vec2& p) const {
  if (kind_ == Kind::Ellipse) {
    return p.x * p.x / (a_ * a_) + p.y * p.y / (b_ * b_) - 1.0;
  }
  return level_(p.x, p.y);
}

double RegionBoundary::ray_boundary_distance(const Vec2& origin, double angle) const {
  if (level(origin) >= 0.0) {
    throw OriginOutsideRegion("ray origin is not strictly inside the region");
  }
  const double dx = std::cos(angle);
  const double dy = std::sin(angle);

  if (kind_ == Kind::Ellipse) {
    // Substitute origin + t*(dx, dy) into x^2/a^2 + y^2/b^2 - 1 = 0. The
    // origin is interior, so C < 0 and the quadratic has exactly one
    // positive root.
    const double A = dx * dx / (a_ * a_) + dy * dy / (b_ * b_);
    const double B = 2.0 * (origin.x * dx / (a_ * a_) + origin.y * dy / (b_ * b_));
    const double C = level(origin);
    const double disc = B * B - 4.0 * A * C;
    return (-B + std::sqrt(disc)) / (2.0 * A);
  }

  // Implicit region. Scan the level values along the ray first: a region that
  // is star-shaped from `origin` crosses zero exactly once before the bracket
  // end (the region is bounded, so the far end is always outside).
  const double far = 2.0 * bounding_radius_;
  constexpr int kScanSamples = 1024;
  double bracket_lo = 0.0;
  double bracket_hi = far;
  int crossings = 0;
  bool prev_inside = true;  // level(origin) < 0
  double prev_t = 0.0;
  for (int k = 1; k <= kScanSamples; ++k) {
    const double t = far * static_cast<double>(k) / kScanSamples;
    const bool inside = level({origin.x + t * dx, origin.y + t * dy}) <= 0.0;
    if (inside != prev_inside) {
      ++crossings;
      if (crossings == 1) {
        bracket_lo = prev_t;
        bracket_hi = t;
      }
    }
    prev_inside = inside;
    prev_t = t;
  }
  if (crossings == 0) {
    throw SimError(
        "ray never leaves the region within 2*bounding_radius; the region "
        "violates its bounding_radius invariant");
  }
  if (crossings > 1) {
    throw NonStarShaped("ray from (" + std::to_string(origin.x) + ", " +
                        std::to_string(origin.y) +
                        ") crosses the boundary more than once");
  }

  // Bisection on the bracketing interval, 1e-12 absolute on t.
  while (bracket_hi - bracket_lo > 1e-12) {
    const double mid = 0.5 * (bracket_lo + bracket_hi);
    const bool inside = level({origin.x + mid * dx, origin.y + mid * dy}) <= 0.0;
    (inside ? bracket_lo : bracket_hi) = mid;
  }
  return 0.5 * (bracket_lo + bracket_hi);
}

Sector Sector::from_phases(const Vec2& reference, double phase_start,
                           double phase_end) {
  Sector s;
  s.reference = reference;
  s.phase_start = wrap_phase(phase_start);
  s.width = sector_angular_width(phase_start, phase_end);
  return s;
}

Sector Sector::full_circle(const Vec2& reference) {
  return Sector{reference, 0.0, kTwoPi};
}

bool point_in_sector(const Sector& sector, const RegionBoundary& region,
                     const Vec2& p) {
  if (!region.contains(p)) {
    return false;
  }
  const Vec2 d = p - sector.reference;
  double ang;
  if (d.x == 0.0 && d.y == 0.0) {
    ang = sector.phase_start;
  } else {
    ang = wrap_phase(std::atan2(d.y, d.x));
  }
  return wrap_phase(ang - sector.phase_start) <= sector.width;
}

}  // namespace rotary
