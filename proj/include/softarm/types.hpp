#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace softarm {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using VecX = Eigen::VectorXd;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using MatX = Eigen::MatrixXd;
using Mat23 = Eigen::Matrix<double, 2, 3>;
using Transform = Eigen::Isometry3d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kGravityAccel = 9.81;  // m/s^2

// Straight-configuration threshold: below this bend angle the exact arc map
// and its derivatives switch to their series expansions.
inline constexpr double kThetaEps = 1e-4;

// Bend angle used in place of theta when evaluating the phi-rows of the
// configuration-to-joint-space jacobian near the straight configuration.
inline constexpr double kThetaReg = 1e-3;

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalFailure : std::runtime_error {
  explicit NumericalFailure(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotSettled : std::runtime_error {
  explicit NotSettled(const std::string& msg) : std::runtime_error(msg) {}
};

struct RankDeficient : std::runtime_error {
  explicit RankDeficient(const std::string& msg) : std::runtime_error(msg) {}
};

struct ScriptError : std::runtime_error {
  explicit ScriptError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NoPayload : std::runtime_error {
  explicit NoPayload(const std::string& msg) : std::runtime_error(msg) {}
};

struct SchemaError : std::runtime_error {
  explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

inline double wrap_to_2pi(double a) {
  a = std::fmod(a, 2.0 * kPi);
  return a < 0.0 ? a + 2.0 * kPi : a;
}

// Wraps an angle difference into (-pi, pi].
inline double wrap_to_pi(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a <= 0.0) a += 2.0 * kPi;
  return a - kPi;
}

inline Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return m;
}

inline Mat2 rot2(double a) {
  Mat2 r;
  r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return r;
}

}  // namespace softarm
