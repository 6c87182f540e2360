#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "softarm/actuation.hpp"
#include "test_helpers.hpp"

using namespace softarm;
using namespace softarm::testing;

TEST_CASE("piecewise cubic hermite interpolates knots and stays periodic") {
  const std::array<double, 3> v{0.3, -0.2, 0.1};
  const std::array<double, 3> s{0.0, 0.4, -0.2};
  const PiecewiseCubic pc = PiecewiseCubic::hermite(v, s);

  const double w = PiecewiseCubic::kWidth;
  for (int k = 0; k < 3; ++k) {
    CHECK(pc.eval(k * w) == doctest::Approx(v[k]).epsilon(1e-12));
    const double h = 1e-7;
    const double fd = (pc.eval(k * w + h) - pc.eval(wrap_to_2pi(k * w - h))) / (2 * h);
    CHECK(fd == doctest::Approx(s[k]).epsilon(1e-5));
  }
  // wrapped evaluation: 0 and 2pi share the first piece
  CHECK(pc.eval(0.0) == pc.eval(2.0 * kPi));
  // C0 at interval boundaries
  for (int k = 1; k < 3; ++k)
    CHECK(pc.eval(k * w - 1e-9) == doctest::Approx(pc.eval(k * w + 1e-9)).epsilon(1e-6));
}

TEST_CASE("piecewise cubic least squares recovers a truth in the family") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  PiecewiseCubic truth;
  auto coeffs = truth.coeffs();
  for (auto& piece : coeffs)
    for (auto& c : piece) c = u(rng);
  truth.set_coeffs(coeffs);

  std::vector<double> phi, val;
  for (int i = 0; i < 360; ++i) {
    phi.push_back(i * kPi / 180.0);
    val.push_back(truth.eval(phi.back()));
  }
  const PiecewiseCubic fitted = PiecewiseCubic::fit(phi, val);
  for (int i = 0; i < 720; ++i) {
    const double a = i * kPi / 360.0;
    CHECK(std::abs(fitted.eval(a) - truth.eval(a)) < 1e-10);
  }

  CHECK_THROWS_AS(PiecewiseCubic::fit({0.1, 0.2, 0.3}, {1.0, 2.0, 3.0}), RankDeficient);
}

TEST_CASE("elastic torque reduces to K q without corrections") {
  StiffnessModel m = StiffnessModel::uniform(2, 0.12);
  VecX q(4);
  q << 0.5, -0.2, 0.9, 0.4;
  CHECK((elastic_torque(q, m) - 0.12 * q).norm() < 1e-15);
  CHECK(elastic_torque(VecX::Zero(4), m).norm() == 0.0);
}

TEST_CASE("elastic torque is continuous across the straight blend") {
  StiffnessModel m = StiffnessModel::uniform(1, 0.12);
  m.f_polys[0] = PiecewiseCubic::constant(1.3);
  VecX qa(2), qb(2);
  // across theta_eps
  qa << kThetaEps * (1 - 1e-9), 0;
  qb << kThetaEps * (1 + 1e-9), 0;
  CHECK((elastic_torque(qa, m) - elastic_torque(qb, m)).norm() < 1e-12);
  // across the end of the blend window
  qa << 2 * kThetaEps * (1 - 1e-9), 0;
  qb << 2 * kThetaEps * (1 + 1e-9), 0;
  CHECK((elastic_torque(qa, m) - elastic_torque(qb, m)).norm() < 1e-12);
  // fully blended region applies the factor
  VecX q(2);
  q << 0.5, 0;
  CHECK((elastic_torque(q, m) - (0.12 / 1.3) * q).norm() < 1e-15);
}

TEST_CASE("magnitude factor clamps runaway fits") {
  StiffnessModel m = StiffnessModel::uniform(1, 0.12);
  m.f_polys[0] = PiecewiseCubic::constant(7.0);
  CHECK(effective_magnitude_factor(Vec2(0.5, 0.1), m, 0) == doctest::Approx(m.f_max));
  m.f_polys[0] = PiecewiseCubic::constant(0.01);
  CHECK(effective_magnitude_factor(Vec2(0.5, 0.1), m, 0) == doctest::Approx(m.f_min));
}

TEST_CASE("allocation: zero, single chamber, saturation, round trip") {
  const ArmGeometry arm = full_arm();
  const ActuationModel act = ActuationModel::analytic_estimate(arm);
  const Mat23& A = act.A_ch[0];
  const double p_max = act.p_max_pa;

  auto r0 = allocate_pressures(Vec2::Zero(), A, p_max);
  CHECK(r0.pressures.norm() == 0.0);
  CHECK_FALSE(r0.saturated);

  // torque along chamber 1's direction, feasible: only chamber 1 fires
  const Vec2 dir1 = A.col(0).normalized();
  const Vec2 tau = 0.5 * p_max * A.col(0).norm() * dir1;
  auto r1 = allocate_pressures(tau, A, p_max);
  CHECK(r1.pressures[0] == doctest::Approx(0.5 * p_max).epsilon(1e-9));
  CHECK(r1.pressures[1] == doctest::Approx(0.0));
  CHECK(r1.pressures[2] == doctest::Approx(0.0));
  CHECK((r1.achieved_torque - tau).norm() < 1e-10);
  CHECK_FALSE(r1.saturated);

  // infeasible request saturates and reports what was achieved
  auto r2 = allocate_pressures(10.0 * p_max * A.col(0).norm() * dir1, A, p_max);
  CHECK(r2.saturated);
  CHECK(r2.pressures.maxCoeff() <= p_max + 1e-12);
  CHECK(r2.achieved_torque.norm() < 10.0 * p_max * A.col(0).norm());

  // round trip identity on feasible torques
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> u_mag(0.0, 0.4 * p_max * A.col(0).norm());
  std::uniform_real_distribution<double> u_ang(0.0, 2 * kPi);
  for (int k = 0; k < 200; ++k) {
    const double ang = u_ang(rng);
    const Vec2 t = u_mag(rng) * Vec2(std::cos(ang), std::sin(ang));
    auto r = allocate_pressures(t, A, p_max);
    REQUIRE_FALSE(r.saturated);
    CHECK((A * r.pressures - t).norm() < 1e-9 * std::max(1.0, t.norm()));
    CHECK(r.pressures.minCoeff() >= -1e-12);
  }
}

TEST_CASE("phase adjust preserves magnitude and reduces to identity") {
  const PiecewiseCubic zero = PiecewiseCubic::constant(0.0);
  const Vec2 v(123.0, -45.0);
  CHECK((phase_adjust(v, zero) - v).norm() == 0.0);

  const PiecewiseCubic g = PiecewiseCubic::hermite({0.2, -0.1, 0.05}, {0, 0, 0});
  std::mt19937_64 rng(79);
  std::normal_distribution<double> n(0.0, 1e4);
  for (int k = 0; k < 200; ++k) {
    const Vec2 in(n(rng), n(rng));
    const Vec2 out = phase_adjust(in, g);
    CHECK(std::abs(out.norm() - in.norm()) < 1e-9 * std::max(1.0, in.norm()));
  }

  const Vec2 tiny(1e-14, 0);
  CHECK((phase_adjust(tiny, g) - tiny).norm() == 0.0);
}

TEST_CASE("pressure_to_torque symmetry") {
  const ArmGeometry arm = full_arm();
  const ActuationModel act = ActuationModel::analytic_estimate(arm);
  CHECK(pressure_to_torque(VecX::Zero(6), act).norm() == 0.0);
  // equal co-contraction nets zero torque under the 120 degree layout
  VecX p = VecX::Constant(6, 30000.0);
  CHECK(pressure_to_torque(p, act).norm() < 1e-9);
}

TEST_CASE("actuation model validation") {
  const ArmGeometry arm = full_arm();
  ActuationModel act = ActuationModel::analytic_estimate(arm);
  CHECK_NOTHROW(act.validate());

  ActuationModel skewed = act;
  const double a = 25.0 * kPi / 180.0;
  const Vec2 c0 = skewed.A_ch[0].col(0);
  skewed.A_ch[0].col(0) = rot2(a) * c0;
  CHECK_THROWS_AS(skewed.validate(), ConfigError);

  ActuationModel flat = act;
  flat.A_ch[1].row(1).setZero();
  CHECK_THROWS_AS(flat.validate(), RankDeficient);
}
