#pragma once

#include <vector>

#include "softarm/types.hpp"

namespace softarm {

// Serial-chain rigid-body dynamics on (mass, com, inertia-about-com) bodies.
// Joints are revolute or prismatic about an arbitrary unit axis, each with a
// fixed pre-transform from the parent body frame.

enum class JointType { Revolute, Prismatic };

struct JointSpec {
  JointType type = JointType::Revolute;
  Vec3 axis = Vec3::UnitZ();
  Transform pre = Transform::Identity();  // parent frame -> joint reference frame
};

struct BodySpec {
  double mass = 0.0;
  Vec3 com = Vec3::Zero();             // in the body frame
  Mat3 inertia_com = Mat3::Zero();     // about the com, body axes
};

struct SpatialMotion {
  Vec3 w = Vec3::Zero();  // angular
  Vec3 v = Vec3::Zero();  // linear, at the frame origin
};

struct SpatialForce {
  Vec3 n = Vec3::Zero();  // moment at the frame origin
  Vec3 f = Vec3::Zero();
};

class RigidChain {
 public:
  int add_joint(const JointSpec& joint, const BodySpec& body);
  int dof() const { return static_cast<int>(joints_.size()); }

  const BodySpec& body(int i) const { return bodies_[i]; }
  BodySpec& mutable_body(int i) { return bodies_[i]; }
  const JointSpec& joint(int i) const { return joints_[i]; }

  // World pose of body i's frame.
  Transform body_pose(const VecX& z, int i) const;
  Transform tip_pose(const VecX& z) const { return body_pose(z, dof() - 1); }

  // Joint-space inertia via the composite rigid body algorithm.
  MatX inertia_matrix(const VecX& z) const;

  // Recursive Newton-Euler: generalized forces for (z, zd, zdd) under the
  // given world gravity vector.
  VecX inverse_dynamics(const VecX& z, const VecX& zd, const VecX& zdd,
                        const Vec3& gravity) const;

  VecX gravity_forces(const VecX& z, const Vec3& gravity) const {
    return inverse_dynamics(z, VecX::Zero(dof()), VecX::Zero(dof()), gravity);
  }

  VecX bias_forces(const VecX& z, const VecX& zd) const {
    return inverse_dynamics(z, zd, VecX::Zero(dof()), Vec3::Zero());
  }

 private:
  std::vector<JointSpec> joints_;
  std::vector<BodySpec> bodies_;
};

}  // namespace softarm
