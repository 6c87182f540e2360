#pragma once

#include <array>
#include <vector>

#include "softarm/pcc.hpp"
#include "softarm/types.hpp"

namespace softarm {

// Three cubics over the 120-degree chamber sweeps [0,120), [120,240),
// [240,360). Angles are radians; evaluation wraps, so 0 and 2pi share the
// first piece.
class PiecewiseCubic {
 public:
  static constexpr int kPieces = 3;
  static constexpr double kWidth = 2.0 * kPi / 3.0;

  PiecewiseCubic() = default;  // identically zero

  static PiecewiseCubic constant(double value);

  // C1 periodic interpolant from knot values/slopes at 0, 120, 240 degrees.
  static PiecewiseCubic hermite(const std::array<double, 3>& values,
                                const std::array<double, 3>& slopes);

  // Independent least-squares cubic per piece, exactly one fit per sweep.
  static PiecewiseCubic fit(const std::vector<double>& phi,
                            const std::vector<double>& value);

  double eval(double phi) const;

  const std::array<std::array<double, 4>, kPieces>& coeffs() const { return coeffs_; }
  void set_coeffs(const std::array<std::array<double, 4>, kPieces>& c) { coeffs_ = c; }

 private:
  // value = c0 + c1 u + c2 u^2 + c3 u^3 with u = phi - piece_start
  std::array<std::array<double, 4>, kPieces> coeffs_{};
};

struct StiffnessModel {
  VecX k_per_segment;                   // N*m/rad, one scalar per segment
  std::vector<PiecewiseCubic> f_polys;  // magnitude factor per segment
  double f_min = 0.5;
  double f_max = 2.0;

  static StiffnessModel uniform(int n_segments, double k);
  MatX K_diag() const;  // 2N x 2N
};

struct DampingModel {
  VecX d_per_segment;  // N*m*s/rad

  static DampingModel uniform(int n_segments, double d);
  MatX D_diag() const;
};

// Per-segment elastic torque (1/f(phi)) K q. f blends to 1 below the
// straight-configuration threshold so the torque stays continuous in q.
VecX elastic_torque(const VecX& q, const StiffnessModel& stiffness);

// Magnitude factor actually applied at a given segment state (clamped and
// blended); exposed for the identification sweeps.
double effective_magnitude_factor(const Vec2& q_seg, const StiffnessModel& stiffness,
                                  int segment);

struct ActuationModel {
  std::vector<Mat23> A_ch;              // Pa -> N*m, per segment
  std::vector<PiecewiseCubic> g_polys;  // phase error phi_des - phi_meas, radians
  double p_max_pa = 60000.0;            // never exceed 600 mbar

  // Ideal three-chamber layout at 0/120/240 degrees with the analytic
  // gain estimate area * lever per segment.
  static ActuationModel analytic_estimate(const ArmGeometry& arm, double gain_scale = 1.0);

  int n_segments() const { return static_cast<int>(A_ch.size()); }

  // Mean column gain of segment i; scales the p_xy intermediate into a
  // torque request.
  double xy_gain(int segment) const;
  Vec2 torque_from_xy(const Vec2& p_xy, int segment) const {
    return xy_gain(segment) * p_xy;
  }

  void validate() const;  // rank 2, chamber spread within 15 deg of nominal
};

struct AllocationResult {
  Vec3 pressures = Vec3::Zero();
  Vec2 achieved_torque = Vec2::Zero();
  bool saturated = false;  // clamping moved the achieved torque by > 5%
};

// Minimum-norm chamber solution shifted along the null direction until
// nonnegative, then clamped to [0, p_max].
AllocationResult allocate_pressures(const Vec2& tau_seg, const Mat23& A, double p_max);

// Rotates the 2-vector intermediate by the fitted phase error at its own
// direction; magnitude is preserved exactly.
Vec2 phase_adjust(const Vec2& p_xy, const PiecewiseCubic& g_poly);

// Plant-side map: per-segment A_ch * p_seg (no phase adjustment here; the
// compensation lives controller-side).
VecX pressure_to_torque(const VecX& pressures, const ActuationModel& actuation);

void validate_pressures(const VecX& pressures, const ActuationModel& actuation);

}  // namespace softarm
