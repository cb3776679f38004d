#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "formation/types.hpp"

namespace formation {

class EnvelopeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when cos(path angle) is too small for the polar conversions.
class SingularityError : public EnvelopeError {
 public:
  using EnvelopeError::EnvelopeError;
};

inline constexpr double kCosPathAngleGuard = 1e-6;

struct UavParams {
  double mass = 9295.44;         // kg
  double wing_area = 27.87;      // m^2
  double wing_span = 9.144;      // m
  double drag_coeff = 0.0794;
  double lift_bias = 0.0;        // N, L0 in alpha = (L - L0) / L_alpha
  // N/rad. When unset the slope is lift_curve_slope * qbar * S at the
  // current flight condition.
  std::optional<double> lift_slope;
  double lift_curve_slope = 5.0;  // 1/rad
  double air_density = 0.7364;    // kg/m^3, ISA at 5000 m

  /// F-16 class airframe at the 5000 m scenario altitude.
  static UavParams f16();

  /// Throws std::invalid_argument naming the first bad field.
  void validate() const;
};

/// Point-mass state in the NED inertial frame.
struct UavState {
  Vec3 position = Vec3::Zero();
  double speed = 0.0;         // V_T, m/s
  double path_angle = 0.0;    // gamma, rad; positive climbs
  double course_angle = 0.0;  // psi, rad

  /// Inertial velocity (xdot, ydot, zdot).
  Vec3 velocity() const;
};

/// Rates of the state in the order (x, y, z, V, gamma, psi).
struct UavStateRate {
  Vec3 position = Vec3::Zero();
  double speed = 0.0;
  double path_angle = 0.0;
  double course_angle = 0.0;
};

/// Triple expressed along the speed, path-angle and course-angle channels.
/// Used for both controls (u_V, u_gamma, u_psi) and lumped disturbances
/// (d_V, d_gamma, d_psi); units are m/s^2, rad/s, rad/s.
struct PolarTriple {
  double speed = 0.0;
  double path = 0.0;
  double course = 0.0;

  friend bool operator==(const PolarTriple&, const PolarTriple&) = default;
};

using PolarControls = PolarTriple;
using PolarDisturbance = PolarTriple;
using CartesianControls = Vec3;     // u_x, u_y, u_z in m/s^2
using CartesianDisturbance = Vec3;  // d_x, d_y, d_z in m/s^2

struct ActuatorCommands {
  double thrust = 0.0;  // N
  double lift = 0.0;    // N, never negative
  double bank = 0.0;    // mu, rad
  double alpha = 0.0;   // rad, diagnostic only
  bool thrust_saturated = false;  // commanded thrust was negative and clamped
};

/// 0.5 * rho * V^2 * S * C_D.
double drag(const UavState& s, const UavParams& p);

/// Lift-curve slope L_alpha in N/rad at the given flight condition.
double lift_slope(const UavState& s, const UavParams& p);

/// Six-state point-mass equations of motion with lumped disturbances.
UavStateRate state_derivative(const UavState& s, const ActuatorCommands& a,
                              const PolarDisturbance& d, const UavParams& p);

/// Maps Cartesian virtual accelerations onto the polar channels.
PolarControls cartesian_to_polar(const CartesianControls& u, const UavState& s);

/// Inverse of cartesian_to_polar.
CartesianControls polar_to_cartesian(const PolarControls& u, const UavState& s);

/// Thrust, lift and bank realizing the polar controls. Negative thrust is
/// clamped to zero and flagged.
ActuatorCommands polar_to_actuators(const PolarControls& u, const UavState& s, const UavParams& p);

/// Polar controls produced by the given actuator commands (the definitions
/// of u_V, u_gamma, u_psi in terms of T, L, mu).
PolarControls actuators_to_polar(const ActuatorCommands& a, const UavState& s, const UavParams& p);

/// Same linear map as polar_to_cartesian, applied to disturbances.
CartesianDisturbance disturbance_to_cartesian(const PolarDisturbance& d, const UavState& s);

/// Thrust that holds straight-and-level flight at the state's speed.
double trim_thrust(const UavState& s, const UavParams& p);

/// cartesian_to_polar followed by polar_to_actuators with cos(gamma)
/// cancelled analytically, so it stays defined in vertical flight.
ActuatorCommands cartesian_to_actuators(const CartesianControls& u, const UavState& s, const UavParams& p);

/// The equations of motion expressed on the inertial velocity vector:
/// V_dot t + V gamma_dot n_gamma + V cos(gamma) psi_dot n_psi. Agrees with
/// state_derivative wherever the latter is defined and has no singularity
/// at gamma = +-pi/2.
Vec3 velocity_derivative(const UavState& s, const ActuatorCommands& a, const PolarDisturbance& d,
                         const UavParams& p);

/// Speed, path and course angles of an inertial velocity; gamma lands in
/// [-pi/2, pi/2] and psi in (-pi, pi].
UavState state_from_velocity(const Vec3& position, const Vec3& velocity);

/// Throws EnvelopeError / SingularityError if the state is outside the
/// operating envelope of the conversions.
void check_envelope(const UavState& s);

}  // namespace formation
