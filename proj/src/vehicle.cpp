#include "formation/vehicle.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace formation {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << "uav parameter '" << name << "' must be positive, got " << v;
    throw std::invalid_argument(os.str());
  }
}

void check_speed(const UavState& s) {
  if (!(s.speed > 0.0)) {
    std::ostringstream os;
    os << "total speed must be positive, got " << s.speed;
    throw EnvelopeError(os.str());
  }
}

void check_cos_path(double cg) {
  if (std::abs(cg) < kCosPathAngleGuard) {
    std::ostringstream os;
    os << "path angle too close to +-pi/2 (cos gamma = " << cg << ")";
    throw SingularityError(os.str());
  }
}

// Columns are the inertial directions of the speed, path-angle and
// course-angle channels, scaled so that the matrix maps (u_V, u_gamma,
// u_psi) to (u_x, u_y, u_z).
struct ChannelFrame {
  Vec3 along;   // d v / d V
  Vec3 pitch;   // d v / d gamma, divided by V
  Vec3 course;  // horizontal normal to the course
  double cg;
};

ChannelFrame channel_frame(const UavState& s) {
  const double cg = std::cos(s.path_angle), sg = std::sin(s.path_angle);
  const double cp = std::cos(s.course_angle), sp = std::sin(s.course_angle);
  return {Vec3(cg * cp, cg * sp, -sg), Vec3(-sg * cp, -sg * sp, -cg), Vec3(-sp, cp, 0.0), cg};
}

}  // namespace

UavParams UavParams::f16() { return UavParams{}; }

void UavParams::validate() const {
  require_positive(mass, "mass");
  require_positive(wing_area, "wing_area");
  require_positive(wing_span, "wing_span");
  require_positive(air_density, "air_density");
  require_positive(lift_curve_slope, "lift_curve_slope");
  if (lift_slope) require_positive(*lift_slope, "lift_slope");
  if (!(drag_coeff >= 0.0)) throw std::invalid_argument("uav parameter 'drag_coeff' must be nonnegative");
  if (!std::isfinite(lift_bias)) throw std::invalid_argument("uav parameter 'lift_bias' must be finite");
}

Vec3 UavState::velocity() const {
  const double cg = std::cos(path_angle);
  return speed * Vec3(cg * std::cos(course_angle), cg * std::sin(course_angle), -std::sin(path_angle));
}

double drag(const UavState& s, const UavParams& p) {
  return 0.5 * p.air_density * s.speed * s.speed * p.wing_area * p.drag_coeff;
}

double lift_slope(const UavState& s, const UavParams& p) {
  if (p.lift_slope) return *p.lift_slope;
  return p.lift_curve_slope * 0.5 * p.air_density * s.speed * s.speed * p.wing_area;
}

UavStateRate state_derivative(const UavState& s, const ActuatorCommands& a,
                              const PolarDisturbance& d, const UavParams& p) {
  check_speed(s);
  const double cg = std::cos(s.path_angle);
  check_cos_path(cg);
  const double sg = std::sin(s.path_angle);
  const double m = p.mass;

  UavStateRate r;
  r.position = s.velocity();
  r.speed = (a.thrust - drag(s, p)) / m - kGravity * sg + d.speed;
  r.path_angle = a.lift * std::cos(a.bank) / (m * s.speed) - kGravity * cg / s.speed + d.path;
  r.course_angle = a.lift * std::sin(a.bank) / (m * s.speed * cg) + d.course;
  return r;
}

PolarControls cartesian_to_polar(const CartesianControls& u, const UavState& s) {
  check_speed(s);
  const auto f = channel_frame(s);
  check_cos_path(f.cg);
  // The frame columns are orthonormal, so the inverse is a projection.
  return {f.along.dot(u), f.pitch.dot(u) / s.speed, f.course.dot(u) / (s.speed * f.cg)};
}

CartesianControls polar_to_cartesian(const PolarControls& u, const UavState& s) {
  const auto f = channel_frame(s);
  return u.speed * f.along + (u.path * s.speed) * f.pitch + (u.course * s.speed * f.cg) * f.course;
}

CartesianDisturbance disturbance_to_cartesian(const PolarDisturbance& d, const UavState& s) {
  return polar_to_cartesian(d, s);
}

namespace {

// Actuator equations written on the channel accelerations along the speed, pitch and
// course directions, so nothing divides by cos(gamma).
ActuatorCommands actuators_from_channels(double along, double pitch, double lateral, const UavState& s,
                                         const UavParams& p) {
  check_speed(s);
  const double cg = std::cos(s.path_angle);
  const double sg = std::sin(s.path_angle);
  const double m = p.mass;

  ActuatorCommands a;
  a.thrust = m * along + m * kGravity * sg + drag(s, p);
  if (a.thrust < 0.0) {
    a.thrust = 0.0;
    a.thrust_saturated = true;
  }
  const double vertical = m * pitch + m * kGravity * cg;
  const double side = m * lateral;
  a.lift = std::hypot(vertical, side);
  // Two-argument arctangent keeps L cos(mu) and L sin(mu) on the signs of
  // the two components; the single-argument form loses the quadrant.
  a.bank = std::atan2(side, vertical);
  a.alpha = (a.lift - p.lift_bias) / lift_slope(s, p);
  return a;
}

}  // namespace

ActuatorCommands polar_to_actuators(const PolarControls& u, const UavState& s, const UavParams& p) {
  const double cg = std::cos(s.path_angle);
  return actuators_from_channels(u.speed, s.speed * u.path, s.speed * u.course * cg, s, p);
}

ActuatorCommands cartesian_to_actuators(const CartesianControls& u, const UavState& s, const UavParams& p) {
  const auto f = channel_frame(s);
  return actuators_from_channels(f.along.dot(u), f.pitch.dot(u), f.course.dot(u), s, p);
}

Vec3 velocity_derivative(const UavState& s, const ActuatorCommands& a, const PolarDisturbance& d,
                         const UavParams& p) {
  check_speed(s);
  const auto f = channel_frame(s);
  const double m = p.mass;
  // V_dot t + V gamma_dot n_gamma + V cos(gamma) psi_dot n_psi, with the
  // gravity components of the first two recombined into +g along z.
  return ((a.thrust - drag(s, p)) / m + d.speed) * f.along +
         (a.lift * std::cos(a.bank) / m + s.speed * d.path) * f.pitch +
         (a.lift * std::sin(a.bank) / m + s.speed * f.cg * d.course) * f.course +
         Vec3(0.0, 0.0, kGravity);
}

UavState state_from_velocity(const Vec3& position, const Vec3& velocity) {
  UavState s;
  s.position = position;
  s.speed = velocity.norm();
  s.path_angle = std::atan2(-velocity.z(), std::hypot(velocity.x(), velocity.y()));
  s.course_angle = std::atan2(velocity.y(), velocity.x());
  return s;
}

PolarControls actuators_to_polar(const ActuatorCommands& a, const UavState& s, const UavParams& p) {
  check_speed(s);
  const double cg = std::cos(s.path_angle);
  check_cos_path(cg);
  const double m = p.mass;
  return {(a.thrust - drag(s, p)) / m - kGravity * std::sin(s.path_angle),
          a.lift * std::cos(a.bank) / (m * s.speed) - kGravity * cg / s.speed,
          a.lift * std::sin(a.bank) / (m * s.speed * cg)};
}

double trim_thrust(const UavState& s, const UavParams& p) {
  return drag(s, p) + p.mass * kGravity * std::sin(s.path_angle);
}

void check_envelope(const UavState& s) {
  check_speed(s);
  if (std::abs(s.path_angle) >= std::numbers::pi / 2.0) {
    std::ostringstream os;
    os << "path angle " << s.path_angle << " rad is outside (-pi/2, pi/2)";
    throw EnvelopeError(os.str());
  }
  check_cos_path(std::cos(s.path_angle));
}

}  // namespace formation
