#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "formation/graph.hpp"
#include "formation/types.hpp"

namespace formation {

class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Homogeneous gains of the baseline cooperative law.
struct ControllerGains {
  DiagGain k_p = DiagGain(0.25, 0.4, 0.3);
  DiagGain k_v = DiagGain(1.5, 1.75, 1.75);
  DiagGain c_p = DiagGain::Constant(0.15);
  DiagGain c_v = DiagGain::Constant(0.55);

  /// Throws ConfigurationError. The coupling gains may be zero, which turns
  /// the law into independent reference tracking.
  void validate() const;
};

/// Errors of a vehicle with respect to its filtered virtual leader.
struct TrackingErrors {
  Vec3 position = Vec3::Zero();  // p - r_hat
  Vec3 velocity = Vec3::Zero();  // v - v_hat
};

/// u_0i = r_ddot_i - Kp e_pi - Kv e_vi - sum_j [Cp (e_pi - e_pj) + Cv (e_vi - e_vj)].
Vec3 baseline_control(std::size_t i, std::span<const TrackingErrors> errors, const Vec3& ref_accel,
                      const FormationGraph& g, const ControllerGains& gains);

/// Uncertainty and disturbance estimator in velocity-difference form. The
/// running integral of u_0 is the only dynamic state, so the estimate is
/// zero at the instant the estimator starts.
struct UdeState {
  Vec3 time_constants = Vec3::Constant(0.2);  // s, per axis
  Vec3 u0_integral = Vec3::Zero();            // m/s
  Vec3 v0 = Vec3::Zero();                     // velocity when the estimator started

  static UdeState start(const Vec3& v0, const Vec3& time_constants);
};

/// d_hat = (v(t) - v(0) - int u_0 dt) / T, per axis.
Vec3 ude_estimate(const UdeState& st, const Vec3& v_now);

/// u = u_0 - d_hat.
Vec3 composite_control(const Vec3& u0, const Vec3& d_hat);

/// Baseline command at the start, midpoint and end of a step.
struct StageSamples {
  Vec3 start = Vec3::Zero();
  Vec3 mid = Vec3::Zero();
  Vec3 end = Vec3::Zero();
};

/// Advances the u_0 integral with the quadrature that classical RK4 applies
/// to a time-only integrand (Simpson's rule). Throws std::invalid_argument
/// when dt <= 0.
UdeState ude_update(const UdeState& st, const StageSamples& u0, double dt);
UdeState ude_update(const UdeState& st, const Vec3& u0_constant, double dt);

/// Error dynamics of one Laplacian mode on one axis.
struct ModeDynamics {
  int axis = 0;            // 0 = x, 1 = y, 2 = z
  std::size_t index = 0;   // position in the ascending spectrum
  double lambda = 0.0;
  Eigen::Matrix2d a;       // [[0, 1], [-Kp - l Cp, -Kv - l Cv]]
  Eigen::Vector2cd poles;
  bool hurwitz = false;
  // Static gain from the mode's estimation error to its position error,
  // once with the denominator as the closed-loop matrix gives it (1 / (Kp +
  // l Cp)) and once with the stiffness and damping terms swapped (1 / (Kv +
  // l Cv)), the form the transfer function is commonly quoted in.
  double dc_gain = 0.0;
  double dc_gain_swapped = 0.0;
  // 2 lambda_max(P)^2 / lambda_min(P) with P A + A' P = -I; multiplies the
  // sup norm of the mode's estimation error in the ultimate bound.
  double ultimate_bound_factor = 0.0;
};

struct ModalDecomposition {
  Eigen::VectorXd eigenvalues;  // ascending, first is zero
  Eigen::MatrixXd basis;        // orthogonal, first column 1/sqrt(n)
  std::vector<ModeDynamics> modes;  // 3n entries, mode-major
};

/// Diagonalizes the Laplacian and returns the decoupled 2x2 error dynamics
/// of every (mode, axis) pair. Throws ConfigurationError for a disconnected
/// graph or a non-Hurwitz mode.
ModalDecomposition modal_decomposition(const FormationGraph& g, const ControllerGains& gains);

/// Stacked tracking error matrix acting on [e_p; e_v] (6n x 6n).
Eigen::MatrixXd tracking_error_matrix(const FormationGraph& g, const ControllerGains& gains);

/// Solves P A + A' P = -I for a Hurwitz 2x2 matrix.
Eigen::Matrix2d lyapunov_2x2(const Eigen::Matrix2d& a);

}  // namespace formation
