#pragma once

#include <memory>
#include <string>
#include <vector>

#include "softarm/types.hpp"

namespace softarm {

struct TrajectorySample {
  double t = 0.0;
  Vec3 x = Vec3::Zero();
  Vec3 xd = Vec3::Zero();
  Vec3 xdd = Vec3::Zero();
};

struct TrajectoryEvent {
  enum class Kind { Grasp, Release, ForceOn, ForceOff };
  Kind kind = Kind::Grasp;
  double t = 0.0;
  double mass_kg = 0.0;      // Grasp
  Vec3 force = Vec3::Zero();  // ForceOn
};

// Pure generators: sample(t) is deterministic and side-effect free; timed
// events (grasp/release/force) are reported up front for the runner to fire.
class Trajectory {
 public:
  virtual ~Trajectory() = default;
  virtual TrajectorySample sample(double t) const = 0;
  virtual std::vector<TrajectoryEvent> events() const { return {}; }
};

// x = center + (r cos(ct), r sin(ct), 0) on a fixed z plane, c = 2 pi / period.
class CircleTrajectory : public Trajectory {
 public:
  CircleTrajectory(double radius, double period_s, double z_plane_m,
                   const Vec2& center_xy = Vec2::Zero());
  TrajectorySample sample(double t) const override;

 private:
  double radius_, omega_, z_;
  Vec2 center_;
};

// Straight line x1 -> x2 over the duration, held at x2 afterwards.
class LineTrajectory : public Trajectory {
 public:
  LineTrajectory(const Vec3& x1, const Vec3& x2, double duration_s);
  TrajectorySample sample(double t) const override;
  double duration() const { return duration_; }

 private:
  Vec3 x1_, x2_;
  double duration_;
};

// Constant reference.
class HoldTrajectory : public Trajectory {
 public:
  explicit HoldTrajectory(const Vec3& x) : x_(x) {}
  TrajectorySample sample(double t) const override {
    TrajectorySample s;
    s.t = t;
    s.x = x_;
    return s;
  }

 private:
  Vec3 x_;
};

// Reference that jumps from x0 to x1 at the step time.
class StepTrajectory : public Trajectory {
 public:
  StepTrajectory(const Vec3& x0, const Vec3& x1, double t_step)
      : x0_(x0), x1_(x1), t_step_(t_step) {}
  TrajectorySample sample(double t) const override {
    TrajectorySample s;
    s.t = t;
    s.x = t < t_step_ ? x0_ : x1_;
    return s;
  }

 private:
  Vec3 x0_, x1_;
  double t_step_;
};

struct ScriptPhase {
  enum class Kind { MoveTo, Hold };
  Kind kind = Kind::MoveTo;
  double start_s = 0.0;
  double duration_s = 0.0;
  Vec3 target = Vec3::Zero();   // MoveTo: line endpoint
  // optional event markers
  bool grasp_at_start = false;
  double grasp_mass_kg = 0.0;
  bool release_at_fraction = false;
  double release_fraction = 0.6;
  bool force_on_at_start = false;
  Vec3 force = Vec3::Zero();
  bool force_off_at_end = false;
};

// Ordered move/hold phases with grasp/release/force markers; position holds
// between and after phases.
class ScriptedTrajectory : public Trajectory {
 public:
  ScriptedTrajectory(const Vec3& start, std::vector<ScriptPhase> phases);
  TrajectorySample sample(double t) const override;
  std::vector<TrajectoryEvent> events() const override;
  bool empty() const { return phases_.empty(); }

 private:
  Vec3 start_;
  std::vector<ScriptPhase> phases_;
};

}  // namespace softarm
