#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "formation/checks.hpp"
#include "formation/controller.hpp"
#include "formation/scenario.hpp"

using namespace formation;

namespace {

FormationGraph pair_graph() {
  const std::vector<Edge> e{{0, 1}};
  return FormationGraph::build(2, e);
}

}  // namespace

TEST(Controller, ZeroErrorsGiveFeedforward) {
  const auto sc = Scenario::vshape5();
  const std::vector<TrackingErrors> errors(5);
  const Vec3 acc(0.1, -0.2, 0.3);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_TRUE(baseline_control(i, errors, acc, sc.graph(), sc.controller).isApprox(acc));
  }
}

TEST(Controller, OpposedNeighborErrorsDoubleCoupling) {
  const ControllerGains gains;
  const Vec3 delta(1.0, -2.0, 0.5);
  const std::vector<TrackingErrors> errors{{delta, Vec3::Zero()}, {-delta, Vec3::Zero()}};
  const Vec3 u = baseline_control(0, errors, Vec3::Zero(), pair_graph(), gains);
  const Vec3 expected = -(gains.k_p + 2.0 * gains.c_p).cwiseProduct(delta);
  EXPECT_TRUE(u.isApprox(expected, 1e-15));
}

TEST(Controller, VelocityErrorUsesDampingGains) {
  const ControllerGains gains;
  const std::vector<TrackingErrors> errors{{Vec3::Zero(), Vec3::Ones()}, {}};
  const Vec3 u = baseline_control(0, errors, Vec3::Zero(), pair_graph(), gains);
  EXPECT_TRUE(u.isApprox(-(gains.k_v + gains.c_v), 1e-15));
}

TEST(Controller, CompositeControl) {
  EXPECT_TRUE(composite_control(Vec3(1, 2, 3), Vec3(0.5, -1, 0)).isApprox(Vec3(0.5, 3, 3)));
  EXPECT_TRUE(composite_control(Vec3(1, 2, 3), Vec3::Zero()).isApprox(Vec3(1, 2, 3)));
}

TEST(Controller, EstimateIsZeroAtStart) {
  const auto st = UdeState::start(Vec3(120, 3, -1), Vec3::Constant(0.2));
  EXPECT_TRUE(ude_estimate(st, Vec3(120, 3, -1)).isZero());
  EXPECT_TRUE(ude_estimate(st, Vec3(120.2, 3, -1)).isApprox(Vec3(1, 0, 0)));
}

TEST(Controller, UdeUpdateQuadrature) {
  const auto st = UdeState::start(Vec3::Zero(), Vec3::Constant(0.1));
  EXPECT_TRUE(ude_update(st, Vec3::Zero(), 0.01).u0_integral.isZero());
  EXPECT_TRUE(ude_update(st, Vec3(1, 2, 3), 0.5).u0_integral.isApprox(Vec3(0.5, 1, 1.5)));
  // Simpson's rule is exact for cubics: t^2 and t^3 over [0, 1].
  const StageSamples s{Vec3(0, 0, 0), Vec3(0.25, 0.125, 0), Vec3(1, 1, 0)};
  const Vec3 q = ude_update(st, s, 1.0).u0_integral;
  EXPECT_NEAR(q.x(), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(q.y(), 0.25, 1e-15);
  EXPECT_THROW(ude_update(st, Vec3::Zero(), 0.0), std::invalid_argument);
  EXPECT_THROW(ude_update(st, s, -1.0), std::invalid_argument);
}

TEST(Controller, UdeErrorDecaysWithTimeConstant) {
  // d_hat_dot = (d - d_hat) / T: a constant d is tracked with error d e^{-t/T}.
  const auto r = ude_harness([](double) { return 1.0; }, 0.2, 2.0);
  EXPECT_NEAR(r.terminal_error, std::exp(-10.0), 1e-8);
  EXPECT_NEAR(r.max_error, 1.0, 1e-12);
}

TEST(Controller, UdeRampLagsByTimeConstant) {
  const auto r = ude_harness([](double t) { return 0.3 * t; }, 0.2, 5.0);
  EXPECT_NEAR(r.terminal_error, 0.3 * 0.2, 1e-6);
}

TEST(Controller, UdeSinusoidFollowsFirstOrderFilter) {
  const double w = 1.0, tc = 0.1;
  const auto r = ude_harness([&](double t) { return 0.5 * std::sin(w * t); }, tc, 60.0);
  const double gain = w * tc / std::hypot(1.0, w * tc);
  // The sup includes the start transient; the steady amplitude bounds the end.
  EXPECT_LE(r.terminal_error, 0.5 * gain + 1e-6);
  EXPECT_GE(r.max_error, 0.5 * gain - 1e-6);
}

TEST(Controller, UdeErrorScalesWithTimeConstant) {
  auto d = [](double t) { return 0.5 * std::sin(t); };
  const double a = ude_harness(d, 0.2, 60.0).max_error;
  const double b = ude_harness(d, 0.1, 60.0).max_error;
  EXPECT_LT(b, a);
}

TEST(Controller, GainValidation) {
  ControllerGains g;
  EXPECT_NO_THROW(g.validate());
  g.c_p.setZero();
  g.c_v.setZero();
  EXPECT_NO_THROW(g.validate());
  g.k_p.x() = 0.0;
  EXPECT_THROW(g.validate(), ConfigurationError);
  g = ControllerGains{};
  g.c_v.z() = -0.1;
  EXPECT_THROW(g.validate(), ConfigurationError);
}

TEST(Controller, LyapunovSolution) {
  Eigen::Matrix2d a;
  a << 0, 1, -0.25, -1.5;
  const Eigen::Matrix2d p = lyapunov_2x2(a);
  EXPECT_NEAR(p(0, 0), 41.0 / 12.0, 1e-12);
  EXPECT_NEAR(p(0, 1), 2.0, 1e-12);
  EXPECT_NEAR(p(1, 0), 2.0, 1e-12);
  EXPECT_NEAR(p(1, 1), 5.0 / 3.0, 1e-12);
  EXPECT_TRUE((p * a + a.transpose() * p).isApprox(-Eigen::Matrix2d::Identity(), 1e-12));
}

TEST(Controller, PresetModes) {
  const auto sc = Scenario::vshape5();
  const auto m = modal_decomposition(sc.graph(), sc.controller);
  ASSERT_EQ(m.modes.size(), 15u);
  EXPECT_TRUE(m.basis.col(0).isApprox(Eigen::VectorXd::Constant(5, 1.0 / std::sqrt(5.0))) ||
              m.basis.col(0).isApprox(Eigen::VectorXd::Constant(5, -1.0 / std::sqrt(5.0))));
  EXPECT_TRUE((m.basis.transpose() * m.basis).isApprox(Eigen::MatrixXd::Identity(5, 5), 1e-12));

  const double zero_gain[3] = {4.0, 2.5, 1.0 / 0.3};
  const double zero_swapped[3] = {1.0 / 1.5, 1.0 / 1.75, 1.0 / 1.75};
  const double l2_gain[3] = {2.0497349086650885, 1.5677225599350026, 1.8591923369197378};
  const double l2_swapped[3] = {0.4215527190024365, 0.38136170326838903, 0.38136170326838903};
  for (int axis = 0; axis < 3; ++axis) {
    const auto& z = m.modes[static_cast<std::size_t>(axis)];
    EXPECT_EQ(z.axis, axis);
    EXPECT_NEAR(z.lambda, 0.0, 1e-12);
    EXPECT_NEAR(z.dc_gain, zero_gain[axis], 1e-12);
    EXPECT_NEAR(z.dc_gain_swapped, zero_swapped[axis], 1e-12);
    const auto& l2 = m.modes[3 + static_cast<std::size_t>(axis)];
    EXPECT_NEAR(l2.lambda, 3.0 - std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(l2.dc_gain, l2_gain[axis], 1e-12);
    EXPECT_NEAR(l2.dc_gain_swapped, l2_swapped[axis], 1e-12);
  }
  EXPECT_NEAR(m.modes[0].ultimate_bound_factor, 124.48722109612456, 1e-9);
  for (const auto& mode : m.modes) EXPECT_TRUE(mode.hurwitz);
}

TEST(Controller, CouplingShrinksEveryNonzeroMode) {
  const auto sc = Scenario::vshape5();
  const auto m = modal_decomposition(sc.graph(), sc.controller);
  for (const auto& mode : m.modes) {
    if (mode.index == 0) continue;
    const auto& base = m.modes[static_cast<std::size_t>(mode.axis)];
    EXPECT_LT(mode.dc_gain, base.dc_gain);
    EXPECT_LT(mode.dc_gain_swapped, base.dc_gain_swapped);
  }
}

TEST(Controller, ModesMatchStackedSpectrum) {
  const auto sc = Scenario::vshape5();
  const auto m = modal_decomposition(sc.graph(), sc.controller);
  std::vector<double> from_modes, from_matrix;
  for (const auto& mode : m.modes) {
    for (int k = 0; k < 2; ++k) from_modes.push_back(mode.poles(k).real());
  }
  const Eigen::VectorXcd ev = tracking_error_matrix(sc.graph(), sc.controller).eigenvalues();
  for (Eigen::Index k = 0; k < ev.size(); ++k) from_matrix.push_back(ev(k).real());
  std::sort(from_modes.begin(), from_modes.end());
  std::sort(from_matrix.begin(), from_matrix.end());
  ASSERT_EQ(from_modes.size(), from_matrix.size());
  for (std::size_t k = 0; k < from_modes.size(); ++k) EXPECT_NEAR(from_modes[k], from_matrix[k], 1e-9);
}

TEST(Controller, DecompositionRejectsDisconnectedGraph) {
  EXPECT_THROW(modal_decomposition(FormationGraph::build(3, {}), ControllerGains{}), ConfigurationError);
}
