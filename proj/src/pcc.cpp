#include "softarm/pcc.hpp"

#include <cmath>

namespace softarm {

void ArmGeometry::validate() const {
  if (segments.empty()) throw ConfigError("arm needs at least one segment");
  if (!connectors.empty() && connectors.size() != segments.size() - 1)
    throw ConfigError("expected one connector between consecutive segments");
  for (const auto& s : segments) {
    if (s.arc_length_m <= 0) throw ConfigError("segment arc_length_m must be > 0");
    if (s.mass_kg <= 0) throw ConfigError("segment mass_kg must be > 0");
    if (s.chambers != 3) throw ConfigError("segments carry exactly 3 chambers");
  }
  for (const auto& c : connectors) {
    if (c.length_m < 0 || c.mass_kg < 0) throw ConfigError("connector dimensions must be >= 0");
  }
  if (tip_offset_m < 0 || tip_mass_kg < 0) throw ConfigError("tip offset/mass must be >= 0");
  if (theta_max_rad <= 0) throw ConfigError("theta_max_rad must be > 0");
}

void validate_configuration(const VecX& q, const ArmGeometry& arm) {
  if (q.size() != arm.n_q()) throw ConfigError("configuration size mismatch");
  if (!q.allFinite()) throw ConfigError("configuration has non-finite entries");
  for (int i = 0; i < arm.n_segments(); ++i) {
    if (q.segment<2>(2 * i).norm() > arm.theta_max_rad + 1e-9)
      throw ConfigError("segment bend exceeds theta_max");
  }
}

PolarBend to_polar(const Vec2& q_seg) {
  PolarBend pb;
  pb.theta = q_seg.norm();
  if (pb.theta < kThetaEps) {
    pb.phi = 0.0;
    return pb;
  }
  pb.phi = wrap_to_2pi(std::atan2(q_seg.y(), q_seg.x()));
  return pb;
}

namespace arc {

double g1(double t) {
  const double t2 = t * t;
  if (t < kThetaEps) return 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
  return (1.0 - std::cos(t)) / t2;
}

double g2(double t) {
  const double t2 = t * t;
  if (t < kThetaEps) return 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
  return std::sin(t) / t;
}

double g3(double t) {
  const double t2 = t * t;
  if (t < kThetaEps) return 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0;
  return (t - std::sin(t)) / (t2 * t);
}

double h1(double t) {
  const double t2 = t * t;
  if (t < kThetaEps) return -1.0 / 12.0 + t2 / 180.0 - t2 * t2 / 6720.0;
  const double t4 = t2 * t2;
  return std::sin(t) / (t2 * t) - 2.0 * (1.0 - std::cos(t)) / t4;
}

double h2(double t) {
  const double t2 = t * t;
  if (t < kThetaEps) return -1.0 / 3.0 + t2 / 30.0 - t2 * t2 / 840.0;
  return std::cos(t) / t2 - std::sin(t) / (t2 * t);
}

}  // namespace arc

Mat3 segment_rotation(double theta_x, double theta_y) {
  const Vec3 w(theta_y, -theta_x, 0.0);
  const double theta = w.norm();
  const Mat3 wx = skew(w);
  return Mat3::Identity() + arc::g2(theta) * wx + arc::g1(theta) * wx * wx;
}

Transform segment_transform(double theta_x, double theta_y, double arc_length) {
  const double theta = std::hypot(theta_x, theta_y);
  Transform T = Transform::Identity();
  T.linear() = segment_rotation(theta_x, theta_y);
  T.translation() = arc_length * Vec3(theta_x * arc::g1(theta),
                                      theta_y * arc::g1(theta),
                                      -arc::g2(theta));
  return T;
}

void segment_transform_partials(double theta_x, double theta_y, double arc_length,
                                Vec3 dp[2], Mat3 dR[2]) {
  const double theta = std::hypot(theta_x, theta_y);
  const double g1 = arc::g1(theta);
  const double h1 = arc::h1(theta);
  const double h2 = arc::h2(theta);

  dp[0] = arc_length * Vec3(g1 + theta_x * theta_x * h1, theta_x * theta_y * h1,
                            -theta_x * h2);
  dp[1] = arc_length * Vec3(theta_x * theta_y * h1, g1 + theta_y * theta_y * h1,
                            -theta_y * h2);

  // dR/dq_k = [Jl(w) dw/dq_k]_x R, with Jl the left jacobian of SO(3).
  const Vec3 w(theta_y, -theta_x, 0.0);
  const Mat3 wx = skew(w);
  const Mat3 Jl = Mat3::Identity() + arc::g1(theta) * wx + arc::g3(theta) * wx * wx;
  const Mat3 R = segment_rotation(theta_x, theta_y);
  dR[0] = skew(Jl * Vec3(0, -1, 0)) * R;
  dR[1] = skew(Jl * Vec3(1, 0, 0)) * R;
}

namespace {

// Shared forward pass: per-segment transforms and the fixed offsets that
// follow each segment (connector, or the tip offset after the last one).
struct ChainEval {
  std::vector<Mat3> R;
  std::vector<Vec3> p;
  std::vector<Vec3> post;  // fixed translation after segment i, in its tip frame
};

ChainEval eval_chain(const VecX& q, const ArmGeometry& arm) {
  const int n = arm.n_segments();
  ChainEval ce;
  ce.R.resize(n);
  ce.p.resize(n);
  ce.post.assign(n, Vec3::Zero());
  for (int i = 0; i < n; ++i) {
    const Transform T = segment_transform(q[2 * i], q[2 * i + 1], arm.segments[i].arc_length_m);
    ce.R[i] = T.linear();
    ce.p[i] = T.translation();
    if (i + 1 < n && !arm.connectors.empty())
      ce.post[i] = Vec3(0, 0, -arm.connectors[i].length_m);
  }
  ce.post[n - 1] = Vec3(0, 0, -arm.tip_offset_m);
  return ce;
}

}  // namespace

Vec3 tip_position(const VecX& q, const ArmGeometry& arm) {
  const int n = arm.n_segments();
  const ChainEval ce = eval_chain(q, arm);
  // x = p_1 + R_1 (post_1 + p_2 + R_2 (...))
  Vec3 x = ce.post[n - 1];
  for (int i = n - 1; i >= 0; --i) {
    x = ce.p[i] + ce.R[i] * x;
    if (i > 0) x = ce.post[i - 1] + x;
  }
  return x;
}

MatX task_jacobian(const VecX& q, const ArmGeometry& arm) {
  const int n = arm.n_segments();
  const ChainEval ce = eval_chain(q, arm);

  // rest[i]: vector from segment i's tip frame to the arm tip, in that frame.
  std::vector<Vec3> rest(n);
  rest[n - 1] = ce.post[n - 1];
  for (int i = n - 2; i >= 0; --i)
    rest[i] = ce.post[i] + ce.p[i + 1] + ce.R[i + 1] * rest[i + 1];

  MatX J(3, 2 * n);
  Mat3 prefix = Mat3::Identity();  // R_1 ... R_{i-1}
  for (int i = 0; i < n; ++i) {
    Vec3 dp[2];
    Mat3 dR[2];
    segment_transform_partials(q[2 * i], q[2 * i + 1], arm.segments[i].arc_length_m, dp, dR);
    for (int k = 0; k < 2; ++k)
      J.col(2 * i + k) = prefix * (dp[k] + dR[k] * rest[i]);
    prefix = prefix * ce.R[i];
  }
  return J;
}

MatX jacobian_rate(const VecX& q, const VecX& qd, const ArmGeometry& arm) {
  const double speed = qd.norm();
  if (speed == 0.0) return MatX::Zero(3, q.size());
  const double h = 1e-6 / std::max(1.0, speed);
  return (task_jacobian(q + h * qd, arm) - task_jacobian(q - h * qd, arm)) / (2.0 * h);
}

}  // namespace softarm
