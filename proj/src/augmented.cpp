#include "softarm/augmented.hpp"

#include <cmath>

namespace softarm {

double chord_length(double theta, double arc_length) {
  if (theta < kThetaEps) {
    const double t2 = theta * theta;
    return arc_length * (1.0 - t2 / 24.0 + t2 * t2 / 1920.0);
  }
  return 2.0 * arc_length * std::sin(0.5 * theta) / theta;
}

double chord_length_derivative(double theta, double arc_length) {
  if (theta < kThetaEps) {
    const double t2 = theta * theta;
    return arc_length * (-theta / 12.0 + t2 * theta / 480.0);
  }
  return arc_length * (std::cos(0.5 * theta) / theta -
                       2.0 * std::sin(0.5 * theta) / (theta * theta));
}

double chord_length_second_derivative(double theta, double arc_length) {
  if (theta < kThetaEps) {
    return arc_length * (-1.0 / 12.0 + theta * theta / 160.0);
  }
  const double t2 = theta * theta;
  return arc_length * (-std::sin(0.5 * theta) / (2.0 * theta) -
                       2.0 * std::cos(0.5 * theta) / t2 +
                       4.0 * std::sin(0.5 * theta) / (t2 * theta));
}

namespace {

Mat3 cylinder_inertia(double mass, double radius, double length) {
  const double trans = mass * (3.0 * radius * radius + length * length) / 12.0;
  const double axial = 0.5 * mass * radius * radius;
  return Vec3(trans, trans, axial).asDiagonal();
}

}  // namespace

AugmentedDynamics::AugmentedDynamics(const ArmGeometry& arm, double payload_kg)
    : arm_(arm), payload_kg_(payload_kg) {
  arm_.validate();
  const int n = arm_.n_segments();

  const Vec3 z = Vec3::UnitZ();
  const Vec3 ny = -Vec3::UnitY();
  const Vec3 nz = -Vec3::UnitZ();

  for (int i = 0; i < n; ++i) {
    JointSpec j0{JointType::Revolute, z, Transform::Identity()};
    if (i > 0 && !arm_.connectors.empty())
      j0.pre.translation() = Vec3(0, 0, -arm_.connectors[i - 1].length_m);
    chain_.add_joint(j0, BodySpec{});
    chain_.add_joint({JointType::Revolute, ny, Transform::Identity()}, BodySpec{});

    // First half-chord carries the lumped segment mass at its distal frame,
    // i.e. at the chord midpoint.
    BodySpec seg_mass;
    seg_mass.mass = arm_.segments[i].mass_kg;
    chain_.add_joint({JointType::Prismatic, nz, Transform::Identity()}, seg_mass);
    chain_.add_joint({JointType::Prismatic, nz, Transform::Identity()}, BodySpec{});
    chain_.add_joint({JointType::Revolute, ny, Transform::Identity()}, BodySpec{});

    BodySpec tip_body;
    if (i + 1 < n && !arm_.connectors.empty()) {
      const auto& conn = arm_.connectors[i];
      tip_body.mass = conn.mass_kg;
      tip_body.inertia_com = cylinder_inertia(conn.mass_kg, conn.radius_m, conn.length_m);
    } else if (i + 1 == n) {
      // gripper and payload share the tip point
      tip_body.mass = arm_.tip_mass_kg + payload_kg_;
      if (tip_body.mass > 0.0) tip_body.com = Vec3(0, 0, -arm_.tip_offset_m);
    }
    chain_.add_joint({JointType::Revolute, z, Transform::Identity()}, tip_body);
  }

  fold_ = MatX::Zero(6 * n, 5 * n);
  for (int i = 0; i < n; ++i) {
    const int r = 6 * i, c = 5 * i;
    fold_(r + 0, c + 0) = 1.0;
    fold_(r + 1, c + 1) = 1.0;
    fold_(r + 2, c + 2) = 0.5;
    fold_(r + 3, c + 2) = 0.5;
    fold_(r + 4, c + 3) = 1.0;
    fold_(r + 5, c + 4) = 1.0;
  }
}

VecX AugmentedDynamics::augment_map(const VecX& q) const {
  const int n = arm_.n_segments();
  VecX xi(5 * n);
  for (int i = 0; i < n; ++i) {
    const PolarBend pb = to_polar(q.segment<2>(2 * i));
    const double d = chord_length(pb.theta, arm_.segments[i].arc_length_m);
    xi[5 * i + 0] = pb.phi;
    xi[5 * i + 1] = 0.5 * pb.theta;
    xi[5 * i + 2] = d;
    xi[5 * i + 3] = 0.5 * pb.theta;
    xi[5 * i + 4] = -pb.phi;
  }
  return xi;
}

MatX AugmentedDynamics::mapping_jacobian(const VecX& q) const {
  // Exact jacobian of the augmented map, evaluated at theta clamped to
  // kThetaReg. The clamp keeps the phi-rows bounded; using the clamped bend
  // in every row keeps the jacobian, its rate, and the chain terms mutually
  // consistent (they all describe a true arm bent by theta_hat), which is
  // what keeps the pulled-back dynamics conservative near straight.
  const int n = arm_.n_segments();
  MatX Jm = MatX::Zero(5 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    const Vec2 qs = q.segment<2>(2 * i);
    const double theta = qs.norm();
    Vec2 u(1.0, 0.0);
    if (theta >= kThetaEps) u = qs / theta;
    const double theta_hat = std::max(theta, kThetaReg);

    const Vec2 phi_row(-u.y() / theta_hat, u.x() / theta_hat);
    const Vec2 half_theta_row = 0.5 * u;
    const Vec2 chord_row =
        chord_length_derivative(theta_hat, arm_.segments[i].arc_length_m) * u;

    Jm.block<1, 2>(5 * i + 0, 2 * i) = phi_row.transpose();
    Jm.block<1, 2>(5 * i + 1, 2 * i) = half_theta_row.transpose();
    Jm.block<1, 2>(5 * i + 2, 2 * i) = chord_row.transpose();
    Jm.block<1, 2>(5 * i + 3, 2 * i) = half_theta_row.transpose();
    Jm.block<1, 2>(5 * i + 4, 2 * i) = -phi_row.transpose();
  }
  return Jm;
}

MatX AugmentedDynamics::mapping_jacobian_rate(const VecX& q, const VecX& qd) const {
  // Directional derivative of mapping_jacobian along qd, written out
  // analytically (a finite difference blows up when a segment swings
  // through straight because the bend direction flips inside the step).
  // All bend-dependent factors use the clamped theta, matching
  // mapping_jacobian, so the 1/theta_hat blowups cancel exactly in the
  // Coriolis pullback.
  const int n = arm_.n_segments();
  MatX Jd = MatX::Zero(5 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    const Vec2 qs = q.segment<2>(2 * i);
    const Vec2 qds = qd.segment<2>(2 * i);
    const double theta = qs.norm();
    const Vec2 u = theta >= kThetaEps ? Vec2(qs / theta) : Vec2(1.0, 0.0);
    const double theta_hat = std::max(theta, kThetaReg);
    const double theta_dot = u.dot(qds);
    const Vec2 u_dot = (qds - theta_dot * u) / theta_hat;

    const Vec2 perp(-u.y(), u.x());
    const Vec2 perp_dot(-u_dot.y(), u_dot.x());
    const double L = arm_.segments[i].arc_length_m;

    const Vec2 phi_rate = perp_dot / theta_hat - perp * (theta_dot / (theta_hat * theta_hat));
    const Vec2 half_rate = 0.5 * u_dot;
    const Vec2 chord_rate = chord_length_second_derivative(theta_hat, L) * theta_dot * u +
                            chord_length_derivative(theta_hat, L) * u_dot;

    Jd.block<1, 2>(5 * i + 0, 2 * i) = phi_rate.transpose();
    Jd.block<1, 2>(5 * i + 1, 2 * i) = half_rate.transpose();
    Jd.block<1, 2>(5 * i + 2, 2 * i) = chord_rate.transpose();
    Jd.block<1, 2>(5 * i + 3, 2 * i) = half_rate.transpose();
    Jd.block<1, 2>(5 * i + 4, 2 * i) = -phi_rate.transpose();
  }
  return Jd;
}

MatX AugmentedDynamics::rigid_inertia(const VecX& xi) const {
  const MatX H = chain_.inertia_matrix(fold_ * xi);
  MatX B_xi = fold_.transpose() * H * fold_;
  return 0.5 * (B_xi + B_xi.transpose());
}

std::pair<VecX, VecX> AugmentedDynamics::rigid_bias_and_gravity(
    const VecX& xi, const VecX& xi_dot, const Vec3& gravity) const {
  const VecX z = fold_ * xi;
  const VecX zd = fold_ * xi_dot;
  VecX c_xi = fold_.transpose() * chain_.bias_forces(z, zd);
  VecX g_xi = fold_.transpose() * chain_.gravity_forces(z, gravity);
  return {std::move(c_xi), std::move(g_xi)};
}

VecX AugmentedDynamics::inverse_dynamics_xi(const VecX& xi, const VecX& xi_dot,
                                            const VecX& xi_dd, const Vec3& gravity) const {
  return fold_.transpose() *
         chain_.inverse_dynamics(fold_ * xi, fold_ * xi_dot, fold_ * xi_dd, gravity);
}

Transform AugmentedDynamics::tip_pose_from_xi(const VecX& xi) const {
  Transform T = chain_.tip_pose(fold_ * xi);
  T.translation() += T.linear() * Vec3(0, 0, -arm_.tip_offset_m);
  return T;
}

VecX AugmentedDynamics::clamped_configuration(const VecX& q) const {
  VecX out = q;
  for (int i = 0; i < arm_.n_segments(); ++i) {
    const Vec2 qs = q.segment<2>(2 * i);
    const double theta = qs.norm();
    if (theta < kThetaReg) {
      const Vec2 u = theta >= kThetaEps ? Vec2(qs / theta) : Vec2(1.0, 0.0);
      out.segment<2>(2 * i) = kThetaReg * u;
    }
  }
  return out;
}

DynamicTerms AugmentedDynamics::dynamic_terms(const VecX& q, const VecX& qd,
                                              const Vec3& gravity) const {
  const VecX q_reg = clamped_configuration(q);
  const MatX Jm = mapping_jacobian(q);
  const MatX Jm_dot = mapping_jacobian_rate(q, qd);

  const VecX xi_reg = augment_map(q_reg);
  const VecX xi_dot = Jm * qd;

  const MatX B_xi = rigid_inertia(xi_reg);
  const VecX z = fold_ * xi_reg;
  const VecX c_xi = fold_.transpose() * chain_.bias_forces(z, fold_ * xi_dot);
  const VecX g_xi = fold_.transpose() * chain_.gravity_forces(fold_ * augment_map(q), gravity);

  // Gravity is pulled back at the true configuration: with the clamped
  // chord row, a straight hanging arm would pick up the prismatic weight
  // and lose the exact g(0) = 0 symmetry.
  MatX Jm_g = Jm;
  for (int i = 0; i < arm_.n_segments(); ++i) {
    const Vec2 qs = q.segment<2>(2 * i);
    const double theta = qs.norm();
    if (theta < kThetaReg) {
      const Vec2 u = theta >= kThetaEps ? Vec2(qs / theta) : Vec2(1.0, 0.0);
      Jm_g.block<1, 2>(5 * i + 2, 2 * i) =
          (chord_length_derivative(theta, arm_.segments[i].arc_length_m) * u).transpose();
    }
  }

  DynamicTerms terms;
  MatX B = Jm.transpose() * B_xi * Jm;
  terms.B = 0.5 * (B + B.transpose());
  terms.c = Jm.transpose() * (c_xi + B_xi * (Jm_dot * qd));
  terms.g = Jm_g.transpose() * g_xi;
  return terms;
}

}  // namespace softarm
