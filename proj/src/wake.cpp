#include "formation/wake.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace formation {

namespace {

constexpr std::array<std::pair<DisturbanceKind, std::string_view>, 5> kKindNames{{
    {DisturbanceKind::zero, "zero"},
    {DisturbanceKind::constant, "constant"},
    {DisturbanceKind::sinusoid, "sinusoid"},
    {DisturbanceKind::ramp_saturating, "ramp_saturating"},
    {DisturbanceKind::horseshoe_vortex, "horseshoe_vortex"},
}};

constexpr double kInvFourPi = 1.0 / (4.0 * std::numbers::pi);

double lamb_oseen_factor(double h2, double core) {
  return -std::expm1(-h2 / (core * core));
}

// Straight filament from a to b with circulation gamma.
Vec3 segment_velocity(const Vec3& p, const Vec3& a, const Vec3& b, double gamma, double core) {
  const Vec3 r0 = b - a, r1 = p - a, r2 = p - b;
  const Vec3 cross = r1.cross(r2);
  const double cross2 = cross.squaredNorm();
  const double n1 = r1.norm(), n2 = r2.norm();
  if (cross2 < 1e-18 || n1 < 1e-12 || n2 < 1e-12) return Vec3::Zero();
  const double h2 = cross2 / r0.squaredNorm();
  const double k = gamma * kInvFourPi * r0.dot(r1 / n1 - r2 / n2) / cross2;
  return k * lamb_oseen_factor(h2, core) * cross;
}

// Filament starting at a and running to infinity along unit direction e.
Vec3 semi_infinite_velocity(const Vec3& p, const Vec3& a, const Vec3& e, double gamma, double core) {
  const Vec3 r1 = p - a;
  const Vec3 cross = e.cross(r1);
  const double h2 = cross.squaredNorm();
  const double n1 = r1.norm();
  if (h2 < 1e-18 || n1 < 1e-12) return Vec3::Zero();
  const double cos_theta = e.dot(r1) / n1;
  return (gamma * kInvFourPi * (1.0 + cos_theta) / h2) * lamb_oseen_factor(h2, core) * cross;
}

// Horizontal right-hand normal to the course.
Vec3 lateral_axis(const UavState& s) {
  return Vec3(-std::sin(s.course_angle), std::cos(s.course_angle), 0.0);
}

double smoothstep(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

PolarDisturbance vortex_disturbance(std::size_t i, std::span<const UavState> states,
                                    const VortexParams& vortex, const UavParams& params) {
  if (i == 0) return {};
  const UavState& self = states[i];
  const double b = params.wing_span;
  const Vec3 lat = lateral_axis(self);
  const int samples = std::max(1, vortex.span_samples);

  Vec3 induced = Vec3::Zero();
  for (std::size_t j = 0; j < states.size(); ++j) {
    if (j == i) continue;
    const UavState& src = states[j];
    const Vec3 heading = src.velocity().normalized();
    // Fade in sources between abeam and one span ahead so the field stays
    // smooth as vehicles reorder along track.
    const double ahead = (src.position - self.position).dot(heading);
    const double weight = smoothstep(ahead / b);
    if (weight == 0.0) continue;
    Vec3 sum = Vec3::Zero();
    for (int k = 0; k < samples; ++k) {
      const double frac = samples == 1 ? 0.0 : -0.5 + static_cast<double>(k) / (samples - 1);
      sum += horseshoe_induced_velocity(self.position + frac * b * lat, src, params, vortex);
    }
    induced += weight * sum / samples;
  }

  const double v = self.speed;
  const double cg = std::cos(self.path_angle), sg = std::sin(self.path_angle);
  const double cp = std::cos(self.course_angle), sp = std::sin(self.course_angle);
  // Upward normal to the flight path and the horizontal course normal.
  const Vec3 up(-sg * cp, -sg * sp, -cg);
  const double upwash = induced.dot(up);
  const double sidewash = induced.dot(lat);

  const double m = params.mass;
  const double qbar_s = 0.5 * params.air_density * v * v * params.wing_area;
  const double nominal_lift = m * kGravity * cg;
  // Upwash tilts the lift vector forward: dD = -L w / V.
  const double delta_drag = -nominal_lift * upwash / v;
  const double delta_lift = vortex.lift_gain * params.lift_curve_slope * qbar_s * upwash / v;
  const double delta_side = vortex.side_force_gain * qbar_s * sidewash / v;

  PolarDisturbance d;
  d.speed = -delta_drag / m;
  d.path = delta_lift / (m * v);
  d.course = std::abs(cg) < kCosPathAngleGuard ? 0.0 : delta_side / (m * v * cg);
  return d;
}

}  // namespace

std::string_view to_string(DisturbanceKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

DisturbanceKind disturbance_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw std::invalid_argument("unknown disturbance kind '" + std::string(name) +
                              "' (expected zero, constant, sinusoid, ramp_saturating, horseshoe_vortex)");
}

void DisturbanceSpec::validate() const {
  if ((caps.array() < 0.0).any()) throw std::invalid_argument("disturbance caps must be nonnegative");
  if ((rate_caps.array() < 0.0).any()) throw std::invalid_argument("disturbance rate caps must be nonnegative");
  if (kind == DisturbanceKind::ramp_saturating && !(ramp.duration > 0.0)) {
    throw std::invalid_argument("ramp duration must be positive");
  }
  for (int k = 0; k < 3; ++k) {
    const char axis = "Vgp"[k];
    if (kind == DisturbanceKind::sinusoid &&
        std::abs(sinusoid.amplitude(k) * sinusoid.frequency(k)) > rate_caps(k)) {
      throw std::invalid_argument(std::string("sinusoid rate A*w on channel ") + axis + " exceeds its rate cap");
    }
    // Peak slope of the smoothstep ramp is 1.5 F / duration.
    if (kind == DisturbanceKind::ramp_saturating && ramp.duration > 0.0 &&
        1.5 * std::abs(ramp.final_value(k)) / ramp.duration > rate_caps(k)) {
      throw std::invalid_argument(std::string("ramp slope on channel ") + axis + " exceeds its rate cap");
    }
  }
  if (kind == DisturbanceKind::horseshoe_vortex) {
    if (!(vortex.span_fraction > 0.0)) throw std::invalid_argument("vortex span_fraction must be positive");
    if (vortex.span_samples < 1) throw std::invalid_argument("vortex span_samples must be at least 1");
  }
}

Vec3 horseshoe_induced_velocity(const Vec3& point, const UavState& source, const UavParams& params,
                                const VortexParams& vortex) {
  const double b = params.wing_span;
  const double span = vortex.span_fraction * b;
  const double gamma = vortex.circulation > 0.0
                           ? vortex.circulation
                           : params.mass * kGravity / (params.air_density * source.speed * span);
  const double core = vortex.core_radius > 0.0 ? vortex.core_radius : 0.05 * b;

  const Vec3 forward = source.velocity().normalized();
  const Vec3 lat = lateral_axis(source);
  const Vec3 right_tip = source.position + 0.5 * span * lat;
  const Vec3 left_tip = source.position - 0.5 * span * lat;
  const Vec3 aft = -forward;

  // Horseshoe: in from infinity to the left tip, bound left -> right, out
  // from the right tip. Circulation sign gives downwash between the tips.
  return semi_infinite_velocity(point, left_tip, aft, -gamma, core) +
         segment_velocity(point, left_tip, right_tip, gamma, core) +
         semi_infinite_velocity(point, right_tip, aft, gamma, core);
}

PolarDisturbance disturbance_at(std::size_t i, std::span<const UavState> states, double t,
                                const DisturbanceSpec& spec, const UavParams& params) {
  ChannelTriple d = ChannelTriple::Zero();
  switch (spec.kind) {
    case DisturbanceKind::zero:
      return {};
    case DisturbanceKind::constant:
      d = spec.constant;
      break;
    case DisturbanceKind::sinusoid: {
      const auto& s = spec.sinusoid;
      const double shift = s.vehicle_phase_step * static_cast<double>(i);
      for (int k = 0; k < 3; ++k) d(k) = s.amplitude(k) * std::sin(s.frequency(k) * t + s.phase(k) + shift);
      break;
    }
    case DisturbanceKind::ramp_saturating:
      d = spec.ramp.final_value * smoothstep((t - spec.ramp.start) / spec.ramp.duration);
      break;
    case DisturbanceKind::horseshoe_vortex: {
      const auto v = vortex_disturbance(i, states, spec.vortex, params);
      d = ChannelTriple(v.speed, v.path, v.course);
      break;
    }
  }
  d = d.cwiseMax(-spec.caps).cwiseMin(spec.caps);
  return {d(0), d(1), d(2)};
}

}  // namespace formation
