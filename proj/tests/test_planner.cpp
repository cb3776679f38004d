#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "formation/checks.hpp"
#include "formation/planner.hpp"
#include "formation/scenario.hpp"
#include "formation/simulation.hpp"

using namespace formation;

namespace {

constexpr double kPi = std::numbers::pi;

FormationCenterState center_after(const FormationCenterState& c0, const CenterInputs& in, double t) {
  // Closed-form center motion for constant inputs with no path-angle rate
  // and no acceleration: a horizontal circle.
  FormationCenterState c = c0;
  c.heading = c0.heading + in.heading_rate * t;
  const double r = c0.speed * std::cos(c0.path_angle) / in.heading_rate;
  c.position = c0.position + Vec3(r * (std::sin(c.heading) - std::sin(c0.heading)),
                                  r * (std::cos(c0.heading) - std::cos(c.heading)),
                                  -c0.speed * std::sin(c0.path_angle) * t);
  return c;
}

}  // namespace

TEST(Planner, PresetScheduleValues) {
  const auto cmd = Scenario::vshape5().command;
  const auto mid = cmd.at(20.0);
  EXPECT_EQ(mid.accel, 0.0);
  EXPECT_NEAR(mid.path_rate, kPi / 60.0, 1e-15);
  EXPECT_NEAR(mid.heading_rate, kPi / 1080.0, 1e-15);
  const auto late = cmd.at(100.0);
  EXPECT_EQ(late.path_rate, 0.0);
  EXPECT_EQ(late.heading_rate, 0.0);
  EXPECT_NEAR(cmd.at(60.0).path_rate, -kPi / 60.0, 1e-15);
  EXPECT_NEAR(cmd.at(60.0).heading_rate, -kPi / 1080.0, 1e-15);
  const std::vector<double> expected{10.0, 40.0, 45.0, 50.0, 80.0};
  EXPECT_EQ(cmd.breakpoints(), expected);
}

TEST(Planner, ScheduleIntervalsAreHalfOpen) {
  const Schedule s({{10.0, 45.0, 2.0}, {45.0, 80.0, -3.0}});
  EXPECT_EQ(s.at(10.0), 0.0);
  EXPECT_EQ(s.at(10.0 + 1e-9), 2.0);
  EXPECT_EQ(s.at(45.0), 2.0);
  EXPECT_EQ(s.at(45.0 + 1e-9), -3.0);
  EXPECT_EQ(s.at(80.0), -3.0);
  EXPECT_EQ(s.at(80.0 + 1e-9), 0.0);
  EXPECT_EQ(s.on_interval(44.99, 45.0), 2.0);
  EXPECT_EQ(s.on_interval(45.0, 45.01), -3.0);
  EXPECT_EQ(Schedule().at(1.0), 0.0);
}

TEST(Planner, ScheduleRejectsBadSegments) {
  EXPECT_THROW(Schedule({{5.0, 1.0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(Schedule({{0.0, 5.0, 1.0}, {4.0, 6.0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(Schedule({{0.0, NAN, 1.0}}), std::invalid_argument);
}

TEST(Planner, HeadingRotationIsOrthonormal) {
  for (double psi : {0.0, 0.3, -2.0, 3.1}) {
    const Mat3 r = heading_rotation(psi);
    EXPECT_TRUE((r * r.transpose()).isApprox(Mat3::Identity(), 1e-15));
    EXPECT_NEAR(r.determinant(), 1.0, 1e-15);
  }
  // Inertial x seen from a frame headed 90 degrees right lies on -y body.
  EXPECT_TRUE((heading_rotation(kPi / 2) * Vec3(1, 0, 0)).isApprox(Vec3(0, -1, 0), 1e-15));
}

TEST(Planner, YawRateCross) {
  EXPECT_TRUE((yaw_rate_cross(0.7) * Vec3(1, 0, 0)).isApprox(Vec3(0, 0.7, 0)));
  EXPECT_TRUE((yaw_rate_cross(0.7) * Vec3(0, 0, 1)).isZero());
}

TEST(Planner, CenterAccelerationMatchesFiniteDifference) {
  FormationCenterState c{Vec3(1, 2, -3), 110.0, 0.2, 0.9};
  const CenterInputs in{0.3, 0.01, -0.004};
  const double h = 1e-4;
  auto at = [&](double t) {
    FormationCenterState s = c;
    s.speed += in.accel * t;
    s.path_angle += in.path_rate * t;
    s.heading += in.heading_rate * t;
    return s.velocity();
  };
  const Vec3 fd = (at(h) - at(-h)) / (2 * h);
  EXPECT_LT((fd - center_acceleration(c, in)).norm(), 1e-7);
  const auto rate = center_derivative(c, in);
  EXPECT_TRUE(rate.position.isApprox(c.velocity()));
  EXPECT_EQ(rate.speed, 0.3);
}

TEST(Planner, ReferenceRatesUnderSteadyTurn) {
  const FormationCenterState c0{Vec3(26.87, 200.0, -5000.0), 120.0, 0.0, 0.4};
  const CenterInputs in{0.0, 0.0, kPi / 1080.0};
  const FormationLayout layout{Scenario::vshape5().layout.offsets};
  const double t = 3.0, h = 1e-3;
  const auto now = leader_refs(center_after(c0, in, t), in, layout);
  const auto ahead = leader_refs(center_after(c0, in, t + h), in, layout);
  const auto behind = leader_refs(center_after(c0, in, t - h), in, layout);
  for (std::size_t i = 0; i < layout.offsets.size(); ++i) {
    EXPECT_LT(((ahead[i].r - behind[i].r) / (2 * h) - now[i].r_dot).norm(), 1e-6);
    EXPECT_LT(((ahead[i].r_dot - behind[i].r_dot) / (2 * h) - now[i].r_ddot).norm(), 1e-6);
  }
}

TEST(Planner, TurnRateStepJumpsReferenceVelocity) {
  // Starting a turn adds w x p_r to every reference velocity.
  const auto sc = Scenario::vshape5();
  const FormationCenterState c{Vec3::Zero(), 120.0, 0.0, 0.0};
  const double w = kPi / 1080.0;
  const auto before = leader_refs(c, {}, sc.layout);
  const auto after = leader_refs(c, {0.0, 0.0, w}, sc.layout);
  for (std::size_t i = 0; i < 5; ++i) {
    const Vec3 jump = after[i].r_dot - before[i].r_dot;
    EXPECT_NEAR(jump.norm(), w * sc.layout.offsets[i].norm(), 1e-14);
  }
  EXPECT_NEAR((after[0].r_dot - before[0].r_dot).norm(), 0.2128, 1e-4);
}

TEST(Planner, SingleLeaderFilterFollowsSecondOrderResponse) {
  // One vehicle, no neighbors: e'' + 2.5 e' + e = 0 with roots -0.5 and -2.
  const auto g = FormationGraph::build(1, {});
  const FilterGains gains;
  const std::vector<VirtualLeaderRef> refs(1);
  Eigen::VectorXd x(6);
  x << 1, 0, 0, 0, 0, 0;
  const Derivative f = [&](double, const Eigen::VectorXd& y) {
    const std::vector<FilterState> s{{y.head<3>(), y.tail<3>()}};
    const auto r = filter_derivative(s, refs, g, gains);
    Eigen::VectorXd out(6);
    out << r[0].r_hat, r[0].v_hat;
    return out;
  };
  const double dt = 1e-3;
  for (int k = 0; k < 2000; ++k) x = rk4_step(f, x, k * dt, dt);
  const double expected = 4.0 / 3.0 * std::exp(-1.0) - 1.0 / 3.0 * std::exp(-4.0);
  EXPECT_NEAR(x(0), expected, 1e-10);
}

TEST(Planner, FilterRestsOnItsReference) {
  const auto sc = Scenario::vshape5();
  const auto refs = leader_refs(sc.center, {0.1, 0.0, 0.001}, sc.layout);
  std::vector<FilterState> s;
  for (const auto& r : refs) s.push_back({r.r, r.r_dot});
  const auto rates = filter_derivative(s, refs, sc.graph(), sc.filter);
  for (std::size_t i = 0; i < refs.size(); ++i) {
    EXPECT_TRUE(rates[i].r_hat.isApprox(refs[i].r_dot));
    EXPECT_LT((rates[i].v_hat - refs[i].r_ddot).norm(), 1e-12);
  }
}

TEST(Planner, PresetFilterErrorSystemIsHurwitz) {
  const auto sc = Scenario::vshape5();
  const Eigen::VectorXcd ev = filter_error_matrix(sc.graph(), sc.filter).eigenvalues();
  EXPECT_NEAR(ev.real().maxCoeff(), -0.5, 1e-9);
}

TEST(Planner, FilterEnergyDecreasesOnRandomDraws) {
  const auto s = filter_suite(200, 4);
  EXPECT_LT(s.max_real_part, 0.0);
  EXPECT_LE(s.max_lyapunov_increase, 1e-9);
}

TEST(Planner, FilterGainsMustBePositive) {
  FilterGains g;
  g.c_v.y() = 0.0;
  EXPECT_THROW(g.validate(), std::invalid_argument);
}
