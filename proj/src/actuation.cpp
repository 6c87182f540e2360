#include "softarm/actuation.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace softarm {

PiecewiseCubic PiecewiseCubic::constant(double value) {
  PiecewiseCubic pc;
  for (auto& piece : pc.coeffs_) piece = {value, 0.0, 0.0, 0.0};
  return pc;
}

PiecewiseCubic PiecewiseCubic::hermite(const std::array<double, 3>& v,
                                       const std::array<double, 3>& s) {
  PiecewiseCubic pc;
  const double w = kWidth;
  for (int k = 0; k < kPieces; ++k) {
    const double v0 = v[k], v1 = v[(k + 1) % 3];
    const double s0 = s[k], s1 = s[(k + 1) % 3];
    pc.coeffs_[k][0] = v0;
    pc.coeffs_[k][1] = s0;
    pc.coeffs_[k][2] = 3.0 * (v1 - v0) / (w * w) - (2.0 * s0 + s1) / w;
    pc.coeffs_[k][3] = 2.0 * (v0 - v1) / (w * w * w) + (s0 + s1) / (w * w);
  }
  return pc;
}

PiecewiseCubic PiecewiseCubic::fit(const std::vector<double>& phi,
                                   const std::vector<double>& value) {
  if (phi.size() != value.size() || phi.empty())
    throw RankDeficient("piecewise cubic fit needs matching, nonempty samples");
  PiecewiseCubic pc;
  for (int k = 0; k < kPieces; ++k) {
    std::vector<int> idx;
    for (size_t i = 0; i < phi.size(); ++i) {
      const double w = wrap_to_2pi(phi[i]);
      if (static_cast<int>(std::min(w / kWidth, 2.9999)) == k) idx.push_back(static_cast<int>(i));
    }
    if (idx.size() < 4)
      throw RankDeficient("piecewise cubic fit: a 120 degree sweep has fewer than 4 samples");
    MatX M(idx.size(), 4);
    VecX y(idx.size());
    for (size_t r = 0; r < idx.size(); ++r) {
      const double u = wrap_to_2pi(phi[idx[r]]) - k * kWidth;
      M(r, 0) = 1.0;
      M(r, 1) = u;
      M(r, 2) = u * u;
      M(r, 3) = u * u * u;
      y[r] = value[idx[r]];
    }
    const Eigen::Vector4d c = M.colPivHouseholderQr().solve(y);
    pc.coeffs_[k] = {c[0], c[1], c[2], c[3]};
  }
  return pc;
}

double PiecewiseCubic::eval(double phi) const {
  const double w = wrap_to_2pi(phi);
  const int k = static_cast<int>(std::min(w / kWidth, 2.9999));
  const double u = w - k * kWidth;
  const auto& c = coeffs_[k];
  return c[0] + u * (c[1] + u * (c[2] + u * c[3]));
}

StiffnessModel StiffnessModel::uniform(int n_segments, double k) {
  StiffnessModel m;
  m.k_per_segment = VecX::Constant(n_segments, k);
  m.f_polys.assign(n_segments, PiecewiseCubic::constant(1.0));
  return m;
}

MatX StiffnessModel::K_diag() const {
  const int n = static_cast<int>(k_per_segment.size());
  VecX d(2 * n);
  for (int i = 0; i < n; ++i) d.segment<2>(2 * i).setConstant(k_per_segment[i]);
  return d.asDiagonal();
}

DampingModel DampingModel::uniform(int n_segments, double d) {
  DampingModel m;
  m.d_per_segment = VecX::Constant(n_segments, d);
  return m;
}

MatX DampingModel::D_diag() const {
  const int n = static_cast<int>(d_per_segment.size());
  VecX d(2 * n);
  for (int i = 0; i < n; ++i) d.segment<2>(2 * i).setConstant(d_per_segment[i]);
  return d.asDiagonal();
}

double effective_magnitude_factor(const Vec2& q_seg, const StiffnessModel& stiffness,
                                  int segment) {
  const PolarBend pb = to_polar(q_seg);
  if (pb.theta < kThetaEps) return 1.0;
  double f = stiffness.f_polys[segment].eval(pb.phi);
  f = std::clamp(f, stiffness.f_min, stiffness.f_max);
  if (pb.theta < 2.0 * kThetaEps) {
    const double w = (pb.theta - kThetaEps) / kThetaEps;
    f = 1.0 + w * (f - 1.0);
  }
  return f;
}

VecX elastic_torque(const VecX& q, const StiffnessModel& stiffness) {
  const int n = static_cast<int>(stiffness.k_per_segment.size());
  VecX tau(2 * n);
  for (int i = 0; i < n; ++i) {
    const Vec2 qs = q.segment<2>(2 * i);
    const double f = effective_magnitude_factor(qs, stiffness, i);
    tau.segment<2>(2 * i) = (stiffness.k_per_segment[i] / f) * qs;
  }
  return tau;
}

ActuationModel ActuationModel::analytic_estimate(const ArmGeometry& arm, double gain_scale) {
  ActuationModel m;
  for (const auto& seg : arm.segments) {
    const double gain = gain_scale * seg.chamber_area_m2 * seg.chamber_lever_m;
    Mat23 A;
    for (int j = 0; j < 3; ++j) {
      const double beta = j * 2.0 * kPi / 3.0;
      A(0, j) = gain * std::cos(beta);
      A(1, j) = gain * std::sin(beta);
    }
    m.A_ch.push_back(A);
    m.g_polys.push_back(PiecewiseCubic::constant(0.0));
  }
  return m;
}

double ActuationModel::xy_gain(int segment) const {
  const Mat23& A = A_ch[segment];
  return (A.col(0).norm() + A.col(1).norm() + A.col(2).norm()) / 3.0;
}

void ActuationModel::validate() const {
  for (int i = 0; i < n_segments(); ++i) {
    const Mat23& A = A_ch[i];
    const Eigen::JacobiSVD<MatX> svd(A);
    if (svd.singularValues()(1) < 1e-12 * std::max(1.0, svd.singularValues()(0)))
      throw RankDeficient("actuation matrix of segment " + std::to_string(i) + " is rank deficient");
    for (int j = 0; j < 3; ++j) {
      const double beta = std::atan2(A(1, j), A(0, j));
      const double nominal = j * 2.0 * kPi / 3.0;
      if (std::abs(wrap_to_pi(beta - nominal)) > 15.0 * kPi / 180.0)
        throw ConfigError("chamber direction drifted more than 15 deg from the 120 deg layout");
    }
  }
  if (p_max_pa <= 0) throw ConfigError("p_max_pa must be > 0");
}

AllocationResult allocate_pressures(const Vec2& tau_seg, const Mat23& A, double p_max) {
  AllocationResult out;
  const Mat2 AAt = A * A.transpose();
  const Vec3 p_min_norm = A.transpose() * AAt.ldlt().solve(tau_seg);

  // kernel of A, oriented toward co-contraction
  Vec3 null_dir = A.row(0).transpose().cross(Vec3(A.row(1).transpose()));
  const double nn = null_dir.norm();
  Vec3 p = p_min_norm;
  if (nn > 1e-15) {
    null_dir /= nn;
    if (null_dir.sum() < 0.0) null_dir = -null_dir;
    double shift = 0.0;
    for (int j = 0; j < 3; ++j) {
      if (null_dir[j] > 1e-12)
        shift = std::max(shift, -p_min_norm[j] / null_dir[j]);
    }
    p += shift * null_dir;
  }

  for (int j = 0; j < 3; ++j) p[j] = std::clamp(p[j], 0.0, p_max);

  out.pressures = p;
  out.achieved_torque = A * p;
  const double scale = std::max(tau_seg.norm(), 1e-12);
  out.saturated = (out.achieved_torque - tau_seg).norm() > 0.05 * scale;
  return out;
}

Vec2 phase_adjust(const Vec2& p_xy, const PiecewiseCubic& g_poly) {
  const double mag = p_xy.norm();
  if (mag < 1e-12) return p_xy;
  const double phi = wrap_to_2pi(std::atan2(p_xy.y(), p_xy.x()));
  // rotate the command by the fitted error so the realized plane lands on
  // the requested one
  return rot2(g_poly.eval(phi)) * p_xy;
}

VecX pressure_to_torque(const VecX& pressures, const ActuationModel& actuation) {
  const int n = actuation.n_segments();
  VecX tau(2 * n);
  for (int i = 0; i < n; ++i)
    tau.segment<2>(2 * i) = actuation.A_ch[i] * pressures.segment<3>(3 * i);
  return tau;
}

void validate_pressures(const VecX& pressures, const ActuationModel& actuation) {
  if (pressures.size() != 3 * actuation.n_segments())
    throw ConfigError("pressure command size mismatch");
  for (int i = 0; i < pressures.size(); ++i) {
    if (!(pressures[i] >= -1e-9 && pressures[i] <= actuation.p_max_pa + 1e-9))
      throw ConfigError("pressure command outside [0, p_max]");
  }
}

}  // namespace softarm
