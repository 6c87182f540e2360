#pragma once

#include <vector>

#include "softarm/types.hpp"

namespace softarm {

// One constant-curvature segment. chamber_area * chamber_lever gives the
// analytic estimate of the pressure-to-torque gain used to seed the
// identification.
struct SegmentGeometry {
  double arc_length_m = 0.125;
  double mass_kg = 0.125;
  double chamber_lever_m = 0.02;     // chamber centroid distance from axis
  double chamber_area_m2 = 2.5e-4;   // internal chamber surface area
  int chambers = 3;
};

// Rigid piece between segments, modeled as a fixed translation along the
// local -z axis carrying a cylinder inertia at its proximal end.
struct ConnectorGeometry {
  double length_m = 0.02;
  double mass_kg = 0.03;
  double radius_m = 0.011;
};

struct ArmGeometry {
  std::vector<SegmentGeometry> segments;
  std::vector<ConnectorGeometry> connectors;  // size n_segments()-1
  double tip_offset_m = 0.0;  // rigid extension (gripper) past the last segment
  double tip_mass_kg = 0.0;   // gripper mass, lumped at the tip point
  double theta_max_rad = kPi;

  int n_segments() const { return static_cast<int>(segments.size()); }
  int n_q() const { return 2 * n_segments(); }

  double total_length() const {
    double l = tip_offset_m;
    for (const auto& s : segments) l += s.arc_length_m;
    for (const auto& c : connectors) l += c.length_m;
    return l;
  }

  void validate() const;
};

struct PolarBend {
  double theta = 0.0;  // total bend angle, >= 0
  double phi = 0.0;    // bending-plane azimuth in [0, 2pi); 0 when straight
};

// (theta_x, theta_y) -> (theta, phi). phi is measured from +x toward +y and
// pinned to 0 below kThetaEps.
PolarBend to_polar(const Vec2& q_seg);

inline Vec2 from_polar(double theta, double phi) {
  return Vec2(theta * std::cos(phi), theta * std::sin(phi));
}

// Even series used by the arc map. Exact trig form above kThetaEps,
// 4th-order expansions below (all removable singularities).
namespace arc {
double g1(double theta);  // (1-cos)/theta^2
double g2(double theta);  // sin/theta
double g3(double theta);  // (theta-sin)/theta^3
double h1(double theta);  // g1'/theta
double h2(double theta);  // g2'/theta
}  // namespace arc

// Rotation of a constant-curvature arc: exp of the rotation vector
// (theta_y, -theta_x, 0). Base tangent -z maps to the tip tangent.
Mat3 segment_rotation(double theta_x, double theta_y);

// Full rigid transform of one segment of arc length L. At q=0 the segment
// is a pure translation (0,0,-L); the arm hangs along -z.
Transform segment_transform(double theta_x, double theta_y, double arc_length);

// Partial derivatives of the segment transform w.r.t. (theta_x, theta_y).
void segment_transform_partials(double theta_x, double theta_y, double arc_length,
                                Vec3 dp[2], Mat3 dR[2]);

// Tip position of the whole chain (segments + connectors + tip offset).
Vec3 tip_position(const VecX& q, const ArmGeometry& arm);

// Analytic task jacobian d(tip)/dq, 3 x 2N.
MatX task_jacobian(const VecX& q, const ArmGeometry& arm);

// dJ/dt along qd, by directional central differences on q.
MatX jacobian_rate(const VecX& q, const VecX& qd, const ArmGeometry& arm);

// Tip velocity J(q) qd.
inline Vec3 tip_velocity(const VecX& q, const VecX& qd, const ArmGeometry& arm) {
  return task_jacobian(q, arm) * qd;
}

void validate_configuration(const VecX& q, const ArmGeometry& arm);

}  // namespace softarm
