#pragma once

#include <memory>
#include <random>
#include <utility>
#include <vector>

#include "softarm/actuation.hpp"
#include "softarm/augmented.hpp"
#include "softarm/pcc.hpp"
#include "softarm/types.hpp"

namespace softarm {

struct ObstacleSphere {
  Vec3 center = Vec3::Zero();
  double r0 = 0.02;   // object radius
  double r_m = 0.08;  // cutoff radius

  void validate() const {
    if (!(r0 > 0.0 && r0 < r_m)) throw ConfigError("obstacle needs 0 < r0 < r_m");
  }
};

struct SensorModel {
  double noise_std_rad = 0.0;
  double rate_hz = 100.0;
  double velocity_filter_tau_s = 0.02;

  void validate() const {
    if (rate_hz <= 0.0) throw ConfigError("sensor rate must be > 0");
    if (noise_std_rad < 0.0) throw ConfigError("sensor noise must be >= 0");
  }
};

// Low-pass filtered finite-difference velocity estimator; state held by the
// caller so plants stay stateless across sensing.
struct SensorState {
  bool has_prev = false;
  VecX prev_q_meas;
  VecX qd_filtered;
};

std::pair<VecX, VecX> sense(const VecX& q_true, const SensorModel& sensor,
                            SensorState& state, std::mt19937_64& rng);

// Ground-truth description of the simulated arm, including the injected
// anisotropies the identification pipeline is expected to recover.
struct PlantTruth {
  ArmGeometry arm;
  VecX k_star;   // per segment, N*m/rad
  VecX d_star;   // per segment, N*m*s/rad
  std::vector<PiecewiseCubic> magnitude_profile;  // true f(phi), per segment
  std::vector<PiecewiseCubic> phase_profile;      // true direction error (rad)
  double actuation_gain_scale = 1.0;  // true gain relative to area*lever
  Vec3 gravity = Vec3(0, 0, -kGravityAccel);
  double payload_kg = 0.0;
  double valve_tau_s = 0.0;  // first-order valve lag; 0 = ideal
  double p_max_pa = 60000.0;

  void validate() const;
  ActuationModel true_actuation() const;
  StiffnessModel true_stiffness() const;
};

struct PlantState {
  VecX q;
  VecX qd;
  double t = 0.0;
  VecX valve_p;                   // pressures currently applied by the valves
  bool payload_attached = false;
};

struct ProjectileRecord {
  double t_release = 0.0;
  Vec3 x0 = Vec3::Zero();
  Vec3 v0 = Vec3::Zero();
  double mass_kg = 0.0;

  Vec3 position_at(double t_since_release, const Vec3& gravity) const {
    return x0 + v0 * t_since_release + 0.5 * t_since_release * t_since_release * gravity;
  }
};

enum class Integrator { SemiImplicitEuler, RK4 };

class Plant {
 public:
  explicit Plant(const PlantTruth& truth);

  const PlantTruth& truth() const { return truth_; }
  const ArmGeometry& arm() const { return truth_.arm; }
  const AugmentedDynamics& dynamics(bool payload_attached) const {
    return payload_attached ? *dyn_loaded_ : *dyn_unloaded_;
  }

  PlantState initial_state(const VecX& q0, bool payload_attached = false) const;

  // q_dd given the chamber pressures actually applied and an external tip
  // force; B is inverted via an LDLT factorization.
  VecX forward_dynamics(const PlantState& state, const VecX& pressures,
                        const Vec3& f_ext) const;

  PlantState step(const PlantState& state, const VecX& p_cmd, const Vec3& f_ext, double dt,
                  Integrator integrator = Integrator::SemiImplicitEuler) const;

  // Instantaneous generalized impulse: qd += B^{-1} impulse.
  PlantState apply_disturbance(const PlantState& state, const VecX& impulse) const;

  std::pair<PlantState, ProjectileRecord> release_payload(const PlantState& state) const;
  PlantState attach_payload(const PlantState& state) const;

  Vec3 tip(const PlantState& state) const { return tip_position(state.q, truth_.arm); }
  Vec3 tip_velocity(const PlantState& state) const {
    return task_jacobian(state.q, truth_.arm) * state.qd;
  }

  // Truth-side torque maps, exposed for oracle tests.
  VecX true_actuation_torque(const VecX& pressures) const;
  VecX true_elastic_torque(const VecX& q) const;

  // Kinetic + gravitational + elastic energy. The elastic part uses the
  // base stiffness, so this is conservative only for isotropic truths.
  double total_energy(const PlantState& state) const;

 private:
  PlantState integrate_semi_implicit(const PlantState& state, const Vec3& f_ext,
                                     double dt) const;
  PlantState integrate_rk4(const PlantState& state, const Vec3& f_ext, double dt) const;
  void clamp_bend(PlantState& state) const;

  PlantTruth truth_;
  ActuationModel true_actuation_;
  StiffnessModel true_stiffness_;
  std::shared_ptr<AugmentedDynamics> dyn_unloaded_;
  std::shared_ptr<AugmentedDynamics> dyn_loaded_;
};

}  // namespace softarm
