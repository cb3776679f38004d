#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "formation/checks.hpp"
#include "formation/log_io.hpp"
#include "formation/metrics.hpp"
#include "formation/simulation.hpp"

using namespace formation;

namespace {

Eigen::VectorXd scalar(double v) { return Eigen::VectorXd::Constant(1, v); }

std::string csv_of(const SimLog& log, std::size_t decimate = 1) {
  std::ostringstream os;
  write_csv(os, log, decimate);
  return os.str();
}

Scenario short_preset(double duration) {
  Scenario sc = Scenario::vshape5();
  sc.duration = duration;
  sc.metrics.window_start = 0.0;
  sc.metrics.window_end = duration;
  return sc;
}

}  // namespace

TEST(Rk4, ConstantStateStays) {
  const Derivative f = [](double, const Eigen::VectorXd& x) { return Eigen::VectorXd::Zero(x.size()); };
  EXPECT_EQ(rk4_step(f, scalar(3.0), 0.0, 0.1)(0), 3.0);
}

TEST(Rk4, ExponentialDecayToFifthOrder) {
  const Derivative f = [](double, const Eigen::VectorXd& x) { return Eigen::VectorXd(-x); };
  EXPECT_NEAR(rk4_step(f, scalar(1.0), 0.0, 0.01)(0), std::exp(-0.01), 1e-12);
}

TEST(Rk4, TimeDependentRhs) {
  const Derivative f = [](double t, const Eigen::VectorXd&) { return scalar(std::cos(t)); };
  Eigen::VectorXd x = scalar(0.0);
  const double dt = std::numbers::pi / 100.0;
  for (int k = 0; k < 100; ++k) x = rk4_step(f, x, k * dt, dt);
  EXPECT_NEAR(x(0), 0.0, 1e-8);
}

TEST(Rk4, RejectsNonFiniteAndBadStep) {
  const Derivative f = [](double, const Eigen::VectorXd&) { return scalar(NAN); };
  EXPECT_THROW(rk4_step(f, scalar(0.0), 1.5, 0.01), SimulationError);
  try {
    rk4_step(f, scalar(0.0), 1.5, 0.01);
  } catch (const SimulationError& e) {
    EXPECT_EQ(e.time, 1.5);
  }
  const Derivative g = [](double, const Eigen::VectorXd& x) { return x; };
  EXPECT_THROW(rk4_step(g, scalar(0.0), 0.0, 0.0), std::invalid_argument);
}

TEST(Simulation, StateLayoutNames) {
  EXPECT_EQ(StateLayout::size(5), 6 + 75);
  EXPECT_EQ(StateLayout::vehicle(1), 21);
  EXPECT_NE(StateLayout::describe(StateLayout::vehicle(1) + 4).find("2"), std::string::npos);
}

TEST(Simulation, EquilibriumStaysPut) {
  const auto sc = equilibrium_scenario(20.0);
  const auto log = run(sc);
  ASSERT_EQ(log.steps.size(), 2001u);
  double worst = 0.0;
  for (const auto& s : log.steps) {
    for (const auto& v : s.vehicles) {
      worst = std::max({worst, (v.state.position - v.ref.r).norm(), (v.state.velocity() - v.ref.r_dot).norm(),
                        v.d_hat.norm()});
    }
  }
  EXPECT_LT(worst, 1e-6);
  const auto m = compute_metrics(log, sc);
  for (const auto& v : m.vehicles) {
    EXPECT_NEAR(v.thrust_reduction_pct, 0.0, 1e-9);
    EXPECT_LT(v.max_position_error, 1e-6);
    EXPECT_EQ(v.saturation_count, 0u);
  }
}

TEST(Simulation, PositionErrorIdentity) {
  // e_p is logged against r_hat; p - r recovered from the log must match.
  const auto log = run(short_preset(15.0));
  for (const auto& s : log.steps) {
    for (const auto& v : s.vehicles) {
      const Vec3 lhs = v.state.position - v.ref.r;
      const Vec3 rhs = v.e_p + (v.filter.r_hat - v.ref.r);
      ASSERT_LE((lhs - rhs).norm(), 1e-12 * std::max(1.0, v.state.position.norm()));
    }
  }
}

TEST(Simulation, Deterministic) {
  const auto sc = short_preset(20.0);
  EXPECT_EQ(csv_of(run(sc)), csv_of(run(sc)));
}

TEST(Simulation, HalvingStepAgreesThroughManeuver) {
  // Starts on the references so thrust never clamps; the schedule still
  // takes the formation through two vertical crossings.
  Scenario a = equilibrium_scenario(60.0);
  a.command = Scenario::vshape5().command;
  Scenario b = a;
  b.dt = a.dt / 2.0;
  const auto la = run(a), lb = run(b);
  ASSERT_EQ(lb.steps.size(), 2 * la.steps.size() - 1);
  double worst = 0.0;
  for (std::size_t k = 0; k < la.steps.size(); ++k) {
    for (std::size_t i = 0; i < a.n; ++i) {
      const auto& x = la.steps[k].vehicles[i];
      const auto& y = lb.steps[2 * k].vehicles[i];
      ASSERT_FALSE(x.actuators.thrust_saturated);
      worst = std::max(worst, (x.state.position - y.state.position).norm() / x.state.position.norm());
      worst = std::max(worst, (x.state.velocity() - y.state.velocity()).norm() / x.state.speed);
    }
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Simulation, HalvingStepAgreesAfterPresetTransient) {
  // The preset clamps thrust during its opening transient, which costs RK4
  // its order there; the contraction washes the difference out later.
  Scenario a = short_preset(60.0);
  Scenario b = a;
  b.dt = a.dt / 2.0;
  const auto la = run(a), lb = run(b);
  for (std::size_t i = 0; i < 5; ++i) {
    const auto& x = la.steps.back().vehicles[i].state;
    const auto& y = lb.steps.back().vehicles[i].state;
    EXPECT_LT((x.velocity() - y.velocity()).norm() / x.speed, 1e-6);
    EXPECT_LT((x.position - y.position).norm() / x.position.norm(), 1e-6);
  }
}

TEST(Simulation, VelocityRateMatchesActuators) {
  // The integrated velocity rate is the point-mass response to the logged
  // actuators, and equals u + d whenever thrust is not clamped.
  Scenario sc = short_preset(20.0);
  sc.disturbance.kind = DisturbanceKind::constant;
  sc.disturbance.constant = Vec3(0.1, 0.001, 0.001);
  const ClosedLoop loop(sc);
  Eigen::VectorXd x = loop.initial_state();
  const CenterInputs in{};
  const Derivative f = [&](double t, const Eigen::VectorXd& y) { return loop.derivative(t, y, in); };
  std::size_t clamped = 0, free = 0;
  for (int k = 0; k < 2000; ++k) {
    const double t = k * sc.dt;
    if (k % 50 == 0) {
      const Eigen::VectorXd dx = loop.derivative(t, x, in);
      const auto rec = loop.record(t, x, in);
      for (std::size_t i = 0; i < 5; ++i) {
        const Eigen::Index o = StateLayout::vehicle(i);
        const auto& v = rec.vehicles[i];
        const Vec3 vdot = dx.segment<3>(o + 3);
        ASSERT_LT((dx.segment<3>(o) - v.state.velocity()).norm(), 1e-9);
        ASSERT_LT((vdot - velocity_derivative(v.state, v.actuators, v.d_polar, sc.uav)).norm(), 1e-9);
        ASSERT_LT((dx.segment<3>(o + 6) - v.filter.v_hat).norm(), 1e-12);
        ASSERT_LT((dx.segment<3>(o + 12) - v.u0).norm(), 1e-12);
        ASSERT_LT((v.d_tilde - (v.d_hat - v.d)).norm(), 1e-15);
        ASSERT_LT((v.u - (v.u0 - v.d_hat)).norm(), 1e-12);
        if (v.actuators.thrust_saturated) {
          ++clamped;
        } else {
          ++free;
          ASSERT_LT((vdot - (v.u + v.d)).norm(), 1e-9) << "t=" << t << " vehicle " << i + 1;
        }
      }
    }
    x = rk4_step(f, x, t, sc.dt);
  }
  EXPECT_GT(clamped, 0u);
  EXPECT_GT(free, 0u);
}

TEST(Simulation, RunRejectsInvalidScenario) {
  Scenario sc = Scenario::vshape5();
  sc.dt = -1.0;
  EXPECT_THROW(run(sc), ConfigError);
}

TEST(Metrics, WindowOutsideLogRejected) {
  Scenario sc = short_preset(5.0);
  const auto log = run(sc);
  sc.metrics.window_start = 100.0;
  sc.metrics.window_end = 120.0;
  EXPECT_THROW(compute_metrics(log, sc), MetricsError);
  EXPECT_THROW(compute_metrics(SimLog{}, sc), MetricsError);
}

TEST(Metrics, JsonHasVehiclesAndModes) {
  const auto sc = short_preset(5.0);
  const auto j = to_json(compute_metrics(run(sc), sc));
  EXPECT_EQ(j["vehicles"].size(), 5u);
  EXPECT_EQ(j["modes"].size(), 15u);
  EXPECT_NEAR(j["trim_thrust"].get<double>(), 11732.856186240004, 1e-6);
}

TEST(LogIo, ColumnsAndDecimation) {
  const auto cols = csv_columns(2);
  ASSERT_EQ(cols.size(), 10u + 2u * 50u);
  EXPECT_EQ(cols[0], "t");
  EXPECT_EQ(cols[1], "xc");
  EXPECT_EQ(cols[10], "v1_x");
  EXPECT_EQ(cols.back(), "v2_sat");

  const auto log = run(short_preset(1.0));
  auto lines = [](const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); };
  EXPECT_EQ(lines(csv_of(log)), 1u + 101u);
  EXPECT_EQ(lines(csv_of(log, 10)), 1u + 11u);
  // 101 records with stride 7: indices 0, 7, ..., 98 plus the final one.
  EXPECT_EQ(lines(csv_of(log, 7)), 1u + 15u + 1u);
  std::ostringstream os;
  EXPECT_THROW(write_csv(os, log, 0), std::invalid_argument);

  const std::string text = csv_of(log);
  const std::string header = text.substr(0, text.find('\n'));
  EXPECT_EQ(static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')), csv_columns(5).size() - 1);
}
