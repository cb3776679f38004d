#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "formation/graph.hpp"
#include "formation/types.hpp"

namespace formation {

/// Navigation state of the formation's geometric center.
struct FormationCenterState {
  Vec3 position = Vec3::Zero();
  double speed = 0.0;        // V_c, m/s
  double path_angle = 0.0;   // gamma_c, rad
  double heading = 0.0;      // psi_c, rad

  Vec3 velocity() const;
};

struct CenterRate {
  Vec3 position = Vec3::Zero();
  double speed = 0.0;
  double path_angle = 0.0;
  double heading = 0.0;
};

/// Piecewise-constant signal: `value` on each half-open interval
/// (start, end], zero elsewhere.
class Schedule {
 public:
  struct Segment {
    double start;
    double end;
    double value;
  };

  Schedule() = default;
  /// Throws std::invalid_argument if segments are empty, reversed, unsorted
  /// or overlapping.
  explicit Schedule(std::vector<Segment> segments);

  double at(double t) const;
  /// Value on the open interval (t0, t1); the interval must not contain a
  /// breakpoint.
  double on_interval(double t0, double t1) const;
  const std::vector<Segment>& segments() const { return segments_; }
  std::vector<double> breakpoints() const;

 private:
  std::vector<Segment> segments_;
};

/// Rates driving the center model.
struct CenterInputs {
  double accel = 0.0;         // a_Vc, m/s^2
  double path_rate = 0.0;     // a_gamma_c, rad/s
  double heading_rate = 0.0;  // a_psi_c, rad/s
};

struct CenterCommand {
  Schedule accel;
  Schedule path_rate;
  Schedule heading_rate;

  CenterInputs at(double t) const;
  CenterInputs on_interval(double t0, double t1) const;
  /// Sorted, de-duplicated breakpoints of all three channels.
  std::vector<double> breakpoints() const;
};

/// Rigid offsets p_ri in the center's heading frame.
struct FormationLayout {
  std::vector<Vec3> offsets;
};

struct VirtualLeaderRef {
  Vec3 r = Vec3::Zero();
  Vec3 r_dot = Vec3::Zero();
  Vec3 r_ddot = Vec3::Zero();
};

struct FilterState {
  Vec3 r_hat = Vec3::Zero();
  Vec3 v_hat = Vec3::Zero();
};

struct FilterStateRate {
  Vec3 r_hat = Vec3::Zero();
  Vec3 v_hat = Vec3::Zero();
};

struct FilterGains {
  DiagGain kappa_p = DiagGain::Ones();
  DiagGain kappa_v = DiagGain::Constant(2.5);
  DiagGain c_p = DiagGain::Constant(1.25);
  DiagGain c_v = DiagGain::Constant(0.5);

  void validate() const;
};

/// Inertial-to-heading-frame rotation C_BI(psi).
Mat3 heading_rotation(double heading);

/// Cross-product matrix of the yaw rate about the local vertical.
Mat3 yaw_rate_cross(double heading_rate);

CenterRate center_derivative(const FormationCenterState& c, const CenterInputs& in);

/// Analytic second derivative of the center position for constant inputs.
Vec3 center_acceleration(const FormationCenterState& c, const CenterInputs& in);

/// Rigid-body references for every vehicle. The acceleration carries the
/// centripetal term of the rotating frame but not the angular-acceleration
/// term, which is impulsive under a piecewise-constant heading rate.
std::vector<VirtualLeaderRef> leader_refs(const FormationCenterState& c, const CenterInputs& in,
                                          const FormationLayout& layout);

/// Cooperative filter: each virtual leader tracks its rigid reference while
/// sharing its filter error with graph neighbors.
std::vector<FilterStateRate> filter_derivative(std::span<const FilterState> states,
                                               std::span<const VirtualLeaderRef> refs,
                                               const FormationGraph& g, const FilterGains& gains);

/// Stacked filter error system matrix acting on [e_p; e_v] (6n x 6n).
Eigen::MatrixXd filter_error_matrix(const FormationGraph& g, const FilterGains& gains);

/// Lyapunov function 0.5 e_p' (I kron kp + L kron cp) e_p + 0.5 e_v' e_v
/// of the stacked filter errors.
double filter_lyapunov(const FormationGraph& g, const FilterGains& gains,
                       const Eigen::VectorXd& e_p, const Eigen::VectorXd& e_v);

}  // namespace formation
