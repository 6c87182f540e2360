#pragma once

#include <random>

#include "softarm/actuation.hpp"
#include "softarm/pcc.hpp"
#include "softarm/plant.hpp"
#include "softarm/types.hpp"

namespace softarm::testing {

// Two equal segments, no connectors, no tip hardware: total length 0.27 m.
inline ArmGeometry bare_arm() {
  ArmGeometry arm;
  arm.segments.resize(2);
  arm.segments[0].arc_length_m = 0.135;
  arm.segments[0].mass_kg = 0.14;
  arm.segments[1].arc_length_m = 0.135;
  arm.segments[1].mass_kg = 0.135;
  return arm;
}

inline ArmGeometry single_segment_arm(double length = 0.27, double mass = 0.275) {
  ArmGeometry arm;
  arm.segments.resize(1);
  arm.segments[0].arc_length_m = length;
  arm.segments[0].mass_kg = mass;
  return arm;
}

// Full arm with connector and gripper, close to the default scenario.
inline ArmGeometry full_arm() {
  ArmGeometry arm;
  arm.segments.resize(2);
  arm.segments[0].arc_length_m = 0.125;
  arm.segments[0].mass_kg = 0.125;
  arm.segments[1].arc_length_m = 0.125;
  arm.segments[1].mass_kg = 0.12;
  arm.connectors.resize(1);
  arm.connectors[0].length_m = 0.02;
  arm.connectors[0].mass_kg = 0.03;
  arm.connectors[0].radius_m = 0.011;
  arm.tip_offset_m = 0.045;
  arm.tip_mass_kg = 0.024;
  return arm;
}

inline VecX random_configuration(std::mt19937_64& rng, const ArmGeometry& arm,
                                 double theta_min = 0.05, double theta_max = 2.8) {
  std::uniform_real_distribution<double> u_theta(theta_min, theta_max);
  std::uniform_real_distribution<double> u_phi(0.0, 2.0 * kPi);
  VecX q(arm.n_q());
  for (int i = 0; i < arm.n_segments(); ++i) {
    const double theta = u_theta(rng);
    const double phi = u_phi(rng);
    q[2 * i] = theta * std::cos(phi);
    q[2 * i + 1] = theta * std::sin(phi);
  }
  return q;
}

inline VecX random_rate(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  VecX qd(n);
  for (int i = 0; i < n; ++i) qd[i] = g(rng);
  return qd;
}

// Independent tip-position oracle: integrates the moving-frame ODE
//   R'(s) = [kappa]_x R(s),  p'(s) = R(s) (0,0,-1)
// along every arc with fine RK4 steps instead of using the closed-form map.
inline Vec3 quadrature_tip(const VecX& q, const ArmGeometry& arm, int steps_per_segment = 4000) {
  Mat3 R_world = Mat3::Identity();
  Vec3 p_world = Vec3::Zero();
  const int n = arm.n_segments();
  for (int i = 0; i < n; ++i) {
    const double L = arm.segments[i].arc_length_m;
    const Vec3 kappa(q[2 * i + 1] / L, -q[2 * i] / L, 0.0);
    const Mat3 K = skew(kappa);
    Mat3 R = Mat3::Identity();
    Vec3 p = Vec3::Zero();
    const double h = L / steps_per_segment;
    const Vec3 tz(0, 0, -1);
    for (int s = 0; s < steps_per_segment; ++s) {
      // RK4 on the coupled (R, p) system; K is constant along the arc.
      const Mat3 k1R = K * R;
      const Vec3 k1p = R * tz;
      const Mat3 k2R = K * (R + 0.5 * h * k1R);
      const Vec3 k2p = (R + 0.5 * h * k1R) * tz;
      const Mat3 k3R = K * (R + 0.5 * h * k2R);
      const Vec3 k3p = (R + 0.5 * h * k2R) * tz;
      const Mat3 k4R = K * (R + h * k3R);
      const Vec3 k4p = (R + h * k3R) * tz;
      R += (h / 6.0) * (k1R + 2.0 * k2R + 2.0 * k3R + k4R);
      p += (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    }
    p_world += R_world * p;
    R_world = R_world * R;
    Vec3 post(0, 0, i + 1 < n && !arm.connectors.empty() ? -arm.connectors[i].length_m : 0.0);
    if (i + 1 == n) post = Vec3(0, 0, -arm.tip_offset_m);
    p_world += R_world * post;
  }
  return p_world;
}

// Isotropic ground truth: no injected anisotropy, so the analytic model is
// exact up to the identified scalars.
inline PlantTruth isotropic_truth() {
  PlantTruth t;
  t.arm = full_arm();
  t.k_star = VecX::Constant(2, 0.12);
  t.d_star = VecX::Constant(2, 0.01);
  t.magnitude_profile.assign(2, PiecewiseCubic::constant(1.0));
  t.phase_profile.assign(2, PiecewiseCubic::constant(0.0));
  t.payload_kg = 0.038;
  return t;
}

// Distinct per-segment cubic anisotropies, used by the recovery tests.
inline PlantTruth anisotropic_truth() {
  PlantTruth t = isotropic_truth();
  const double d = kPi / 180.0;
  t.phase_profile[0] = PiecewiseCubic::hermite({8 * d, -5 * d, 1 * d}, {0.0, 4 * d, -2 * d});
  t.phase_profile[1] = PiecewiseCubic::hermite({-6 * d, 3 * d, 2 * d}, {2 * d, 0.0, -3 * d});
  t.magnitude_profile[0] = PiecewiseCubic::hermite({1.10, 0.92, 1.02}, {0.0, 0.05, -0.03});
  t.magnitude_profile[1] = PiecewiseCubic::hermite({0.95, 1.08, 0.98}, {0.04, 0.0, 0.02});
  return t;
}

// Central-difference task jacobian.
inline MatX fd_jacobian(const VecX& q, const ArmGeometry& arm, double h = 1e-6) {
  MatX J(3, q.size());
  for (int i = 0; i < q.size(); ++i) {
    VecX qp = q, qm = q;
    qp[i] += h;
    qm[i] -= h;
    J.col(i) = (tip_position(qp, arm) - tip_position(qm, arm)) / (2.0 * h);
  }
  return J;
}

}  // namespace softarm::testing
