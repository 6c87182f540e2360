#pragma once

#include <utility>

#include "softarm/pcc.hpp"
#include "softarm/rigid_chain.hpp"
#include "softarm/types.hpp"

namespace softarm {

// Inertia, bias, and gravity terms pulled back to curvature coordinates.
struct DynamicTerms {
  MatX B;  // 2N x 2N, symmetric positive definite
  VecX c;  // 2N
  VecX g;  // 2N
};

// Chord length of a circular arc of length L bent by theta, and its
// derivative. Both go smoothly to (L, 0) at theta = 0.
double chord_length(double theta, double arc_length);
double chord_length_derivative(double theta, double arc_length);
double chord_length_second_derivative(double theta, double arc_length);

// Augmented rigid-body model of the arm: five exposed joints per segment
// [phi, theta/2, d(theta), theta/2, -phi] (z-rev, y-rev, z-prismatic, y-rev,
// z-rev). Internally the prismatic chord is split into two d/2 joints with
// the segment mass fixed at their junction, so the chain is a genuine
// fixed-parameter rigid multibody; the constant fold matrix keeps the public
// coordinates at five per segment.
class AugmentedDynamics {
 public:
  explicit AugmentedDynamics(const ArmGeometry& arm, double payload_kg = 0.0);

  const ArmGeometry& arm() const { return arm_; }
  double payload_kg() const { return payload_kg_; }
  const RigidChain& chain() const { return chain_; }
  int n_xi() const { return 5 * arm_.n_segments(); }

  // Internal chain coordinates (the split-chord layout), zeta = fold * xi.
  VecX internal_coords(const VecX& xi) const { return fold_ * xi; }

  // q -> xi (5 per segment).
  VecX augment_map(const VecX& q) const;

  // d(xi)/dq, 5N x 2N. The phi-rows are evaluated with theta clamped to
  // kThetaReg so they stay bounded at the straight configuration.
  MatX mapping_jacobian(const VecX& q) const;

  // Time derivative of the mapping jacobian along qd (directional central
  // differences).
  MatX mapping_jacobian_rate(const VecX& q, const VecX& qd) const;

  // Joint-space inertia of the augmented chain in the exposed coordinates.
  MatX rigid_inertia(const VecX& xi) const;

  // (c_xi, g_xi): bias forces at (xi, xi_dot) and gravity forces at xi.
  std::pair<VecX, VecX> rigid_bias_and_gravity(const VecX& xi, const VecX& xi_dot,
                                               const Vec3& gravity) const;

  // Inverse dynamics in the exposed coordinates:
  // tau_xi = B_xi xi_dd + c_xi + g_xi.
  VecX inverse_dynamics_xi(const VecX& xi, const VecX& xi_dot, const VecX& xi_dd,
                           const Vec3& gravity) const;

  // Tip pose reconstructed from the rigid chain at xi (oracle surface).
  Transform tip_pose_from_xi(const VecX& xi) const;

  // Pullback of the rigid-body terms to curvature coordinates:
  //   B = Jm^T B_xi Jm,  c = Jm^T (c_xi + B_xi Jm_dot qd),  g = Jm^T g_xi.
  // B_xi and c_xi are evaluated at the theta-clamped configuration so the
  // straight-configuration inertia limit is preserved; g_xi at the true one
  // so g(0) vanishes exactly for a hanging arm.
  DynamicTerms dynamic_terms(const VecX& q, const VecX& qd, const Vec3& gravity) const;

  // Per-segment bend clamped to at least kThetaReg (direction preserved).
  VecX clamped_configuration(const VecX& q) const;

 private:
  ArmGeometry arm_;
  double payload_kg_ = 0.0;
  RigidChain chain_;
  MatX fold_;  // 6N x 5N, zeta = fold * xi
};

}  // namespace softarm
