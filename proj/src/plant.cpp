#include "softarm/plant.hpp"

#include <cmath>

namespace softarm {

std::pair<VecX, VecX> sense(const VecX& q_true, const SensorModel& sensor,
                            SensorState& state, std::mt19937_64& rng) {
  VecX q_meas = q_true;
  if (sensor.noise_std_rad > 0.0) {
    std::normal_distribution<double> noise(0.0, sensor.noise_std_rad);
    for (int i = 0; i < q_meas.size(); ++i) q_meas[i] += noise(rng);
  }

  const double dt = 1.0 / sensor.rate_hz;
  VecX qd_est = VecX::Zero(q_true.size());
  if (!state.has_prev) {
    state.has_prev = true;
    state.qd_filtered = VecX::Zero(q_true.size());
  } else {
    const VecX raw = (q_meas - state.prev_q_meas) / dt;
    const double tau = sensor.velocity_filter_tau_s;
    const double alpha = tau > 0.0 ? dt / (tau + dt) : 1.0;
    state.qd_filtered += alpha * (raw - state.qd_filtered);
    qd_est = state.qd_filtered;
  }
  state.prev_q_meas = q_meas;
  return {q_meas, qd_est};
}

void PlantTruth::validate() const {
  arm.validate();
  const int n = arm.n_segments();
  if (k_star.size() != n || d_star.size() != n)
    throw ConfigError("plant stiffness/damping need one value per segment");
  if ((k_star.array() <= 0).any()) throw ConfigError("true stiffness must be > 0");
  if ((d_star.array() < 0).any()) throw ConfigError("true damping must be >= 0");
  if (magnitude_profile.size() != static_cast<size_t>(n) ||
      phase_profile.size() != static_cast<size_t>(n))
    throw ConfigError("anisotropy profiles need one entry per segment");
  if (actuation_gain_scale <= 0) throw ConfigError("actuation gain scale must be > 0");
  if (payload_kg < 0) throw ConfigError("payload must be >= 0");
  if (valve_tau_s < 0) throw ConfigError("valve lag must be >= 0");
  if (p_max_pa <= 0) throw ConfigError("p_max must be > 0");
}

ActuationModel PlantTruth::true_actuation() const {
  ActuationModel m = ActuationModel::analytic_estimate(arm, actuation_gain_scale);
  m.p_max_pa = p_max_pa;
  return m;
}

StiffnessModel PlantTruth::true_stiffness() const {
  StiffnessModel m;
  m.k_per_segment = k_star;
  m.f_polys = magnitude_profile;
  // the plant applies its profile as-is; clamping is a model-side guard
  m.f_min = 0.05;
  m.f_max = 20.0;
  return m;
}

Plant::Plant(const PlantTruth& truth)
    : truth_(truth),
      true_actuation_(truth.true_actuation()),
      true_stiffness_(truth.true_stiffness()) {
  truth_.validate();
  dyn_unloaded_ = std::make_shared<AugmentedDynamics>(truth_.arm, 0.0);
  dyn_loaded_ = std::make_shared<AugmentedDynamics>(truth_.arm, truth_.payload_kg);
}

PlantState Plant::initial_state(const VecX& q0, bool payload_attached) const {
  validate_configuration(q0, truth_.arm);
  PlantState s;
  s.q = q0;
  s.qd = VecX::Zero(q0.size());
  s.t = 0.0;
  s.valve_p = VecX::Zero(3 * truth_.arm.n_segments());
  s.payload_attached = payload_attached;
  return s;
}

VecX Plant::true_actuation_torque(const VecX& pressures) const {
  const int n = truth_.arm.n_segments();
  VecX tau(2 * n);
  for (int i = 0; i < n; ++i) {
    const Vec2 nominal = true_actuation_.A_ch[i] * pressures.segment<3>(3 * i);
    const double mag = nominal.norm();
    if (mag < 1e-12) {
      tau.segment<2>(2 * i) = nominal;
      continue;
    }
    const double psi = wrap_to_2pi(std::atan2(nominal.y(), nominal.x()));
    tau.segment<2>(2 * i) = rot2(truth_.phase_profile[i].eval(psi)) * nominal;
  }
  return tau;
}

VecX Plant::true_elastic_torque(const VecX& q) const {
  return elastic_torque(q, true_stiffness_);
}

VecX Plant::forward_dynamics(const PlantState& state, const VecX& pressures,
                             const Vec3& f_ext) const {
  const AugmentedDynamics& dyn = dynamics(state.payload_attached);
  const DynamicTerms terms = dyn.dynamic_terms(state.q, state.qd, truth_.gravity);

  VecX rhs = true_actuation_torque(pressures) - terms.c - terms.g -
             true_elastic_torque(state.q);
  for (int i = 0; i < truth_.arm.n_segments(); ++i)
    rhs.segment<2>(2 * i) -= truth_.d_star[i] * state.qd.segment<2>(2 * i);
  if (f_ext.squaredNorm() > 0.0)
    rhs += task_jacobian(state.q, truth_.arm).transpose() * f_ext;

  Eigen::LDLT<MatX> ldlt(terms.B);
  if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() < 1e-12)
    throw NumericalFailure("inertia matrix lost positive definiteness at t=" +
                           std::to_string(state.t));
  return ldlt.solve(rhs);
}

void Plant::clamp_bend(PlantState& state) const {
  const double theta_max = truth_.arm.theta_max_rad;
  for (int i = 0; i < truth_.arm.n_segments(); ++i) {
    Vec2 qs = state.q.segment<2>(2 * i);
    const double theta = qs.norm();
    if (theta <= theta_max) continue;
    const Vec2 u = qs / theta;
    state.q.segment<2>(2 * i) = theta_max * u;
    Vec2 qd = state.qd.segment<2>(2 * i);
    const double outward = qd.dot(u);
    if (outward > 0.0) state.qd.segment<2>(2 * i) = qd - outward * u;
  }
}

PlantState Plant::integrate_semi_implicit(const PlantState& state, const Vec3& f_ext,
                                          double dt) const {
  PlantState next = state;
  const VecX qdd = forward_dynamics(state, state.valve_p, f_ext);
  next.qd = state.qd + dt * qdd;
  next.q = state.q + dt * next.qd;
  next.t = state.t + dt;
  clamp_bend(next);
  return next;
}

PlantState Plant::integrate_rk4(const PlantState& state, const Vec3& f_ext, double dt) const {
  auto accel = [&](const VecX& q, const VecX& qd) {
    PlantState s = state;
    s.q = q;
    s.qd = qd;
    return forward_dynamics(s, state.valve_p, f_ext);
  };
  const VecX& q = state.q;
  const VecX& qd = state.qd;
  const VecX k1q = qd, k1v = accel(q, qd);
  const VecX k2q = qd + 0.5 * dt * k1v, k2v = accel(q + 0.5 * dt * k1q, qd + 0.5 * dt * k1v);
  const VecX k3q = qd + 0.5 * dt * k2v, k3v = accel(q + 0.5 * dt * k2q, qd + 0.5 * dt * k2v);
  const VecX k4q = qd + dt * k3v, k4v = accel(q + dt * k3q, qd + dt * k3v);

  PlantState next = state;
  next.q = q + (dt / 6.0) * (k1q + 2 * k2q + 2 * k3q + k4q);
  next.qd = qd + (dt / 6.0) * (k1v + 2 * k2v + 2 * k3v + k4v);
  next.t = state.t + dt;
  clamp_bend(next);
  return next;
}

PlantState Plant::step(const PlantState& state, const VecX& p_cmd, const Vec3& f_ext,
                       double dt, Integrator integrator) const {
  if (!(dt > 0.0 && dt <= 1e-2)) throw ConfigError("plant step needs dt in (0, 1e-2]");
  validate_pressures(p_cmd, true_actuation_);

  PlantState staged = state;
  if (truth_.valve_tau_s > 0.0) {
    const double alpha = 1.0 - std::exp(-dt / truth_.valve_tau_s);
    staged.valve_p += alpha * (p_cmd - staged.valve_p);
  } else {
    staged.valve_p = p_cmd;
  }

  return integrator == Integrator::SemiImplicitEuler
             ? integrate_semi_implicit(staged, f_ext, dt)
             : integrate_rk4(staged, f_ext, dt);
}

PlantState Plant::apply_disturbance(const PlantState& state, const VecX& impulse) const {
  const AugmentedDynamics& dyn = dynamics(state.payload_attached);
  const DynamicTerms terms = dyn.dynamic_terms(state.q, state.qd, truth_.gravity);
  PlantState next = state;
  next.qd += terms.B.ldlt().solve(impulse);
  return next;
}

std::pair<PlantState, ProjectileRecord> Plant::release_payload(const PlantState& state) const {
  if (!state.payload_attached) throw NoPayload("release requested with no payload attached");
  ProjectileRecord rec;
  rec.t_release = state.t;
  rec.x0 = tip(state);
  rec.v0 = tip_velocity(state);
  rec.mass_kg = truth_.payload_kg;
  PlantState next = state;
  next.payload_attached = false;
  return {next, rec};
}

PlantState Plant::attach_payload(const PlantState& state) const {
  PlantState next = state;
  next.payload_attached = true;
  return next;
}

double Plant::total_energy(const PlantState& state) const {
  const AugmentedDynamics& dyn = dynamics(state.payload_attached);
  const DynamicTerms terms = dyn.dynamic_terms(state.q, state.qd, truth_.gravity);
  double e = 0.5 * state.qd.dot(terms.B * state.qd);

  const RigidChain& chain = dyn.chain();
  const VecX z = dyn.internal_coords(dyn.augment_map(state.q));
  for (int i = 0; i < chain.dof(); ++i) {
    const BodySpec& b = chain.body(i);
    if (b.mass == 0.0) continue;
    e -= b.mass * truth_.gravity.dot(chain.body_pose(z, i) * b.com);
  }
  for (int i = 0; i < truth_.arm.n_segments(); ++i)
    e += 0.5 * truth_.k_star[i] * state.q.segment<2>(2 * i).squaredNorm();
  return e;
}

}  // namespace softarm
