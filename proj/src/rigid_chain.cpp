#include "softarm/rigid_chain.hpp"

#include <cmath>

namespace softarm {

namespace {

// Rigid-body inertia about the frame origin: mass, first moment h = m*com,
// rotational inertia Io about the origin. Closed under addition and frame
// changes, which is what the composite pass needs.
struct OriginInertia {
  double m = 0.0;
  Vec3 h = Vec3::Zero();
  Mat3 Io = Mat3::Zero();

  static OriginInertia from_body(const BodySpec& b) {
    OriginInertia out;
    out.m = b.mass;
    out.h = b.mass * b.com;
    out.Io = b.inertia_com - b.mass * skew(b.com) * skew(b.com);
    return out;
  }

  SpatialForce apply(const SpatialMotion& mv) const {
    SpatialForce f;
    f.n = Io * mv.w + h.cross(mv.v);
    f.f = m * mv.v + mv.w.cross(h);
    return f;
  }

  // Re-express in the parent frame, given the child pose T in the parent.
  OriginInertia to_parent(const Transform& T) const {
    const Mat3& R = T.linear();
    const Vec3& t = T.translation();
    OriginInertia out;
    out.m = m;
    out.h = R * h + m * t;
    if (m > 0.0) {
      const Vec3 c = h / m;
      const Mat3 Ic = Io + m * skew(c) * skew(c);
      const Vec3 cp = R * c + t;
      out.Io = R * Ic * R.transpose() - m * skew(cp) * skew(cp);
    } else {
      out.Io = R * Io * R.transpose();
    }
    return out;
  }

  void operator+=(const OriginInertia& o) {
    m += o.m;
    h += o.h;
    Io += o.Io;
  }
};

SpatialMotion to_child(const Transform& T, const SpatialMotion& m_parent) {
  const Mat3 Rt = T.linear().transpose();
  SpatialMotion out;
  out.w = Rt * m_parent.w;
  out.v = Rt * (m_parent.v + m_parent.w.cross(T.translation()));
  return out;
}

SpatialForce to_parent(const Transform& T, const SpatialForce& f_child) {
  SpatialForce out;
  out.f = T.linear() * f_child.f;
  out.n = T.linear() * f_child.n + T.translation().cross(out.f);
  return out;
}

SpatialMotion cross_motion(const SpatialMotion& a, const SpatialMotion& b) {
  return {a.w.cross(b.w), a.w.cross(b.v) + a.v.cross(b.w)};
}

SpatialForce cross_force(const SpatialMotion& a, const SpatialForce& b) {
  return {a.w.cross(b.n) + a.v.cross(b.f), a.w.cross(b.f)};
}

SpatialMotion joint_motion(const JointSpec& j, double rate) {
  if (j.type == JointType::Revolute) return {j.axis * rate, Vec3::Zero()};
  return {Vec3::Zero(), j.axis * rate};
}

double project(const JointSpec& j, const SpatialForce& f) {
  return j.type == JointType::Revolute ? j.axis.dot(f.n) : j.axis.dot(f.f);
}

Transform joint_transform(const JointSpec& j, double value) {
  Transform T = Transform::Identity();
  if (j.type == JointType::Revolute)
    T.linear() = Eigen::AngleAxisd(value, j.axis).toRotationMatrix();
  else
    T.translation() = j.axis * value;
  return T;
}

}  // namespace

int RigidChain::add_joint(const JointSpec& joint, const BodySpec& body) {
  if (joint.type == JointType::Revolute || joint.type == JointType::Prismatic) {
    const double n = joint.axis.norm();
    if (std::abs(n - 1.0) > 1e-9) throw ConfigError("joint axis must be unit length");
  }
  joints_.push_back(joint);
  bodies_.push_back(body);
  return dof() - 1;
}

Transform RigidChain::body_pose(const VecX& z, int i) const {
  Transform T = Transform::Identity();
  for (int k = 0; k <= i; ++k) T = T * joints_[k].pre * joint_transform(joints_[k], z[k]);
  return T;
}

MatX RigidChain::inertia_matrix(const VecX& z) const {
  const int n = dof();
  std::vector<Transform> X(n);  // child pose in parent frame
  for (int i = 0; i < n; ++i) X[i] = joints_[i].pre * joint_transform(joints_[i], z[i]);

  std::vector<OriginInertia> comp(n);
  for (int i = 0; i < n; ++i) comp[i] = OriginInertia::from_body(bodies_[i]);
  for (int i = n - 1; i > 0; --i) comp[i - 1] += comp[i].to_parent(X[i]);

  MatX H = MatX::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    SpatialForce F = comp[i].apply(joint_motion(joints_[i], 1.0));
    H(i, i) = project(joints_[i], F);
    for (int j = i; j > 0; --j) {
      F = to_parent(X[j], F);
      H(i, j - 1) = H(j - 1, i) = project(joints_[j - 1], F);
    }
  }
  return H;
}

VecX RigidChain::inverse_dynamics(const VecX& z, const VecX& zd, const VecX& zdd,
                                  const Vec3& gravity) const {
  const int n = dof();
  std::vector<Transform> X(n);
  std::vector<SpatialMotion> v(n), a(n);
  std::vector<SpatialForce> f(n);

  SpatialMotion v_prev;                     // base at rest
  SpatialMotion a_prev{Vec3::Zero(), -gravity};  // gravity as base acceleration

  for (int i = 0; i < n; ++i) {
    X[i] = joints_[i].pre * joint_transform(joints_[i], z[i]);
    const SpatialMotion s_qd = joint_motion(joints_[i], zd[i]);
    v[i] = to_child(X[i], v_prev);
    v[i].w += s_qd.w;
    v[i].v += s_qd.v;
    a[i] = to_child(X[i], a_prev);
    const SpatialMotion s_qdd = joint_motion(joints_[i], zdd[i]);
    const SpatialMotion bias = cross_motion(v[i], s_qd);
    a[i].w += s_qdd.w + bias.w;
    a[i].v += s_qdd.v + bias.v;

    const OriginInertia I = OriginInertia::from_body(bodies_[i]);
    const SpatialForce Iv = I.apply(v[i]);
    const SpatialForce Ia = I.apply(a[i]);
    const SpatialForce vxIv = cross_force(v[i], Iv);
    f[i].n = Ia.n + vxIv.n;
    f[i].f = Ia.f + vxIv.f;

    v_prev = v[i];
    a_prev = a[i];
  }

  VecX tau(n);
  for (int i = n - 1; i >= 0; --i) {
    tau[i] = project(joints_[i], f[i]);
    if (i > 0) {
      const SpatialForce fp = to_parent(X[i], f[i]);
      f[i - 1].n += fp.n;
      f[i - 1].f += fp.f;
    }
  }
  return tau;
}

}  // namespace softarm
