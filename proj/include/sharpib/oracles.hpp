#pragma once

/// Closed-form reference solutions and interface jump checks.

#include <functional>

#include "sharpib/types.hpp"

namespace sharpib {

struct StaticRingParams {
  double R = 0.25;
  double w = 0.0625;
  double mu_e = 1.0;
  Vec2 center{0.5, 0.5};

  void validate() const;
  /// Outside constant giving zero mean over a square domain of the given
  /// area that contains the ring.
  double p0(double domain_area = 1.0) const;
};

/// Three-branch steady pressure of the circular ring with P = (mu_e/w) F:
///   p0 + mu_e (1/R - 1/(R+w))                     r < R
///   p0 + (mu_e/w) ((R+w-r)/R + R/(R+w))           R <= r <= R+w
///   p0                                            r > R+w
double static_ring_pressure(double r, const StaticRingParams& params, double domain_area = 1.0);
double static_ring_pressure(const Vec2& x, const StaticRingParams& params, double domain_area = 1.0);

/// Jump at r = R+w, outside minus inside: -mu_e R / (w (R+w)).
double static_ring_outer_jump(const StaticRingParams& params);

struct InflatingRingParams {
  double R_in = 0.25;
  double R_out = 0.3125;
  double mu_e = 1e4;
  double A_add = 0.05;
  Vec2 center{0.0, 0.0};

  void validate() const;
  double r_in() const;
  double r_out() const;
};

struct RingMapValue {
  double r = 0.0;
  double p = 0.0;
};

/// r(R) = sqrt(R^2 + A_add/pi) and the pressure at that deformed radius.
RingMapValue inflating_ring_solution(double R, const InflatingRingParams& params);
double inflating_ring_radius(double R, const InflatingRingParams& params);
double inflating_ring_pressure(double r, const InflatingRingParams& params);
double inflating_ring_inner_pressure(const InflatingRingParams& params);
/// Jumps (outside minus inside along the outward radial direction at r_out,
/// inward-fluid minus solid at r_in) mu_e A_add / (pi r^2).
double inflating_ring_jump(double r, const InflatingRingParams& params);

/// [p] = -n . sigma n.
double pressure_jump(const Mat2& sigma, const Vec2& n);

struct InterfaceProbe {
  Vec2 x = Vec2::Zero();
  Vec2 n{1.0, 0.0};
  Vec2 t{0.0, 1.0};

  void validate() const;
};

struct JumpEstimates {
  /// [(grad u) t]
  Vec2 tangential = Vec2::Zero();
  /// [n . (grad u) n]
  double normal_normal = 0.0;
  /// [(grad u) n], expected nonzero in general.
  Vec2 normal = Vec2::Zero();
};

using VelocitySampler = std::function<Vec2(const Vec2&)>;

/// One-sided second-order normal differences and central tangential
/// differences at offsets eps in {4h, 2h, h} on each side of the interface,
/// Richardson-extrapolated to eps = 0.
JumpEstimates verify_tangential_continuity(const VelocitySampler& u, const InterfaceProbe& probe, double h_fd);

}  // namespace sharpib
