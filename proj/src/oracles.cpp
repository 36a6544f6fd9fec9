#include "sharpib/oracles.hpp"

#include <cmath>
#include <numbers>

#include "sharpib/errors.hpp"

namespace sharpib {

void StaticRingParams::validate() const {
  if (!(R > 0.0 && w > 0.0 && mu_e > 0.0)) throw ConfigError("static ring: R, w and mu_e must be positive");
}

double StaticRingParams::p0(double domain_area) const {
  // Integral of (p - p0) over the ring and its interior, spread over the domain.
  const double pi = std::numbers::pi;
  const double Rw = R + w;
  const double inner = mu_e * (1.0 / R - 1.0 / Rw) * pi * R * R;
  // int_R^{R+w} (mu_e/w)((R+w-r)/R + R/(R+w)) 2 pi r dr
  const double a = Rw / R + R / Rw;
  const double ring = (mu_e / w) * 2.0 * pi * (a * (Rw * Rw - R * R) / 2.0 - (Rw * Rw * Rw - R * R * R) / (3.0 * R));
  return -(inner + ring) / domain_area;
}

double static_ring_pressure(double r, const StaticRingParams& p, double domain_area) {
  const double p0 = p.p0(domain_area);
  if (r < p.R) return p0 + p.mu_e * (1.0 / p.R - 1.0 / (p.R + p.w));
  if (r <= p.R + p.w) return p0 + (p.mu_e / p.w) * ((p.R + p.w - r) / p.R + p.R / (p.R + p.w));
  return p0;
}

double static_ring_pressure(const Vec2& x, const StaticRingParams& p, double domain_area) {
  return static_ring_pressure((x - p.center).norm(), p, domain_area);
}

double static_ring_outer_jump(const StaticRingParams& p) { return -p.mu_e * p.R / (p.w * (p.R + p.w)); }

void InflatingRingParams::validate() const {
  if (!(R_in > 0.0 && R_out > R_in)) throw ConfigError("inflating ring: need 0 < R_in < R_out");
  if (!(A_add >= 0.0)) throw ConfigError("inflating ring: A_add must be non-negative");
  if (!(mu_e > 0.0)) throw ConfigError("inflating ring: mu_e must be positive");
}

double inflating_ring_radius(double R, const InflatingRingParams& p) {
  return std::sqrt(R * R + p.A_add / std::numbers::pi);
}

double InflatingRingParams::r_in() const { return inflating_ring_radius(R_in, *this); }
double InflatingRingParams::r_out() const { return inflating_ring_radius(R_out, *this); }

double inflating_ring_inner_pressure(const InflatingRingParams& p) {
  const double ri = p.r_in(), ro = p.r_out();
  return p.mu_e * p.A_add / (2.0 * std::numbers::pi) * (1.0 / (ri * ri) - 1.0 / (ro * ro));
}

double inflating_ring_pressure(double r, const InflatingRingParams& p) {
  const double ri = p.r_in(), ro = p.r_out();
  if (r <= ri) return inflating_ring_inner_pressure(p);
  if (r <= ro) return -p.mu_e * p.A_add / (2.0 * std::numbers::pi) * (1.0 / (r * r) + 1.0 / (ro * ro));
  return 0.0;
}

RingMapValue inflating_ring_solution(double R, const InflatingRingParams& p) {
  RingMapValue v;
  v.r = inflating_ring_radius(R, p);
  v.p = inflating_ring_pressure(v.r, p);
  return v;
}

double inflating_ring_jump(double r, const InflatingRingParams& p) {
  return p.mu_e * p.A_add / (std::numbers::pi * r * r);
}

double pressure_jump(const Mat2& sigma, const Vec2& n) { return -n.dot(sigma * n); }

void InterfaceProbe::validate() const {
  if (std::abs(n.norm() - 1.0) > 1e-12 || std::abs(t.norm() - 1.0) > 1e-12)
    throw ConfigError("InterfaceProbe: n and t must be unit vectors");
  if (std::abs(n.dot(t)) > 1e-12) throw ConfigError("InterfaceProbe: n and t must be orthogonal");
}

namespace {

struct SideDerivatives {
  Vec2 tangential;
  Vec2 normal;
};

// Derivatives at x + sign * eps * n using samples on that side only.
SideDerivatives one_side(const VelocitySampler& u, const InterfaceProbe& pr, double eps, double h, double sign) {
  const Vec2 p0 = pr.x + sign * eps * pr.n;
  const Vec2 u0 = u(p0);
  const Vec2 u1 = u(p0 + sign * h * pr.n);
  const Vec2 u2 = u(p0 + 2.0 * sign * h * pr.n);
  SideDerivatives d;
  // Derivative along +n from points marching away from the interface.
  d.normal = sign * (-3.0 * u0 + 4.0 * u1 - u2) / (2.0 * h);
  d.tangential = (u(p0 + h * pr.t) - u(p0 - h * pr.t)) / (2.0 * h);
  return d;
}

JumpEstimates jumps_at(const VelocitySampler& u, const InterfaceProbe& pr, double eps, double h) {
  const SideDerivatives plus = one_side(u, pr, eps, h, 1.0);
  const SideDerivatives minus = one_side(u, pr, eps, h, -1.0);
  JumpEstimates j;
  j.tangential = plus.tangential - minus.tangential;
  j.normal = plus.normal - minus.normal;
  j.normal_normal = pr.n.dot(j.normal);
  return j;
}

}  // namespace

JumpEstimates verify_tangential_continuity(const VelocitySampler& u, const InterfaceProbe& probe, double h_fd) {
  probe.validate();
  const JumpEstimates j1 = jumps_at(u, probe, h_fd, h_fd);
  const JumpEstimates j2 = jumps_at(u, probe, 2.0 * h_fd, h_fd);
  const JumpEstimates j4 = jumps_at(u, probe, 4.0 * h_fd, h_fd);
  JumpEstimates out;
  out.tangential = (8.0 * j1.tangential - 6.0 * j2.tangential + j4.tangential) / 3.0;
  out.normal = (8.0 * j1.normal - 6.0 * j2.normal + j4.normal) / 3.0;
  out.normal_normal = (8.0 * j1.normal_normal - 6.0 * j2.normal_normal + j4.normal_normal) / 3.0;
  return out;
}

}  // namespace sharpib
