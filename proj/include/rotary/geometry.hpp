#pragma once

#include <functional>

#include "rotary/errors.hpp"
#include "rotary/vec2.hpp"

namespace rotary {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Reduce an angle to [0, 2*pi). Throws NonFinite on NaN or infinity.
double wrap_phase(double phi);

/// Angular width swept counter-clockwise from phase_start to phase_end,
/// in [0, 2*pi). Width 0 means an empty sector.
double sector_angular_width(double phase_start, double phase_end);

/// The coverage region: the sublevel set {(x, y) | level(x, y) <= 0}.
///
/// Two flavors. An axis-aligned ellipse gets closed-form ray intersections;
/// a generic implicit function gets bracketed bisection plus a sign-scan that
/// rejects regions that are not star-shaped from the query point. Either way
/// the region must fit inside bounding_radius of the origin.
class RegionBoundary {
 public:
  static RegionBoundary ellipse(double semi_axis_a, double semi_axis_b);
  static RegionBoundary implicit(std::function<double(double, double)> level,
                                 double bounding_radius);

  double level(const Vec2& p) const;
  bool contains(const Vec2& p) const { return level(p) <= 0.0; }
  double bounding_radius() const { return bounding_radius_; }

  /// Distance kappa_max > 0 from `origin` (strictly inside) along direction
  /// (cos angle, sin angle) to the boundary.
  ///
  /// Throws OriginOutsideRegion when level(origin) >= 0, and NonStarShaped
  /// when the ray meets the boundary more than once (implicit regions only;
  /// an ellipse is convex, so the check is skipped there).
  double ray_boundary_distance(const Vec2& origin, double angle) const;

  bool is_ellipse() const { return kind_ == Kind::Ellipse; }
  double semi_axis_a() const { return a_; }
  double semi_axis_b() const { return b_; }

 private:
  enum class Kind { Ellipse, Implicit };

  RegionBoundary() = default;

  Kind kind_ = Kind::Ellipse;
  double a_ = 1.0;
  double b_ = 1.0;
  double bounding_radius_ = 1.0;
  std::function<double(double, double)> level_;
};

/// A pointer-bounded subregion: every region point whose angle seen from
/// `reference` lies within `width` counter-clockwise of `phase_start`.
///
/// Stored as start + width rather than a phase pair so a full-circle sector
/// (width exactly 2*pi) is representable; mod-2*pi arithmetic on a pair of
/// phases cannot express it.
struct Sector {
  Vec2 reference;
  double phase_start = 0.0;  // in [0, 2*pi)
  double width = 0.0;        // in [0, 2*pi]

  double phase_end() const { return wrap_phase(phase_start + width); }

  static Sector from_phases(const Vec2& reference, double phase_start,
                            double phase_end);
  static Sector full_circle(const Vec2& reference);
};

/// True iff p lies in the region and angularly inside the sector. The
/// reference point itself counts as inside: the zero offset is assigned the
/// angle phase_start by convention.
bool point_in_sector(const Sector& sector, const RegionBoundary& region,
                     const Vec2& p);

}  // namespace rotary
