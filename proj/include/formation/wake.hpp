#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "formation/types.hpp"
#include "formation/vehicle.hpp"

namespace formation {

enum class DisturbanceKind { zero, constant, sinusoid, ramp_saturating, horseshoe_vortex };

std::string_view to_string(DisturbanceKind kind);
/// Throws std::invalid_argument for an unknown name.
DisturbanceKind disturbance_kind_from_string(std::string_view name);

/// Per-channel values in (d_V, d_gamma, d_psi) order.
using ChannelTriple = Vec3;

struct SinusoidParams {
  ChannelTriple amplitude = ChannelTriple::Zero();
  ChannelTriple frequency = ChannelTriple::Ones();  // rad/s
  ChannelTriple phase = ChannelTriple::Zero();      // rad
  double vehicle_phase_step = 0.0;  // rad added per vehicle index
};

/// Smoothstep from zero to `final_value` between start and start + duration.
struct RampParams {
  ChannelTriple final_value = ChannelTriple::Zero();
  double start = 0.0;     // s
  double duration = 1.0;  // s
};

/// Horseshoe vortex per upstream vehicle. The bound vortex spans
/// span_fraction * b and sheds two semi-infinite trailing filaments along
/// the vehicle's velocity; each filament has a Lamb-Oseen core.
struct VortexParams {
  double circulation = 0.0;       // m^2/s; <= 0 means W / (rho V b')
  double core_radius = 0.0;       // m; <= 0 means 0.05 b
  double span_fraction = 0.7853981633974483;  // pi/4, elliptic loading
  int span_samples = 9;           // points averaged across the follower wing
  double lift_gain = 1.0;         // scales the upwash-induced lift change
  double side_force_gain = 1.0;   // dY / (qbar S beta_w), per rad
};

struct DisturbanceSpec {
  DisturbanceKind kind = DisturbanceKind::zero;
  ChannelTriple constant = ChannelTriple::Zero();
  SinusoidParams sinusoid;
  RampParams ramp;
  VortexParams vortex;
  // Absolute caps on each channel; outputs are clamped to +-cap.
  ChannelTriple caps = ChannelTriple::Constant(1e3);
  // Bounds on |d dot| asserted for the smooth kinds; not enforced at runtime.
  ChannelTriple rate_caps = ChannelTriple::Constant(1e3);

  void validate() const;
};

/// Lumped disturbance acting on vehicle i at time t. Deterministic in all
/// arguments. Vehicle 0 is the formation apex and never sees a wake.
PolarDisturbance disturbance_at(std::size_t i, std::span<const UavState> states, double t,
                                const DisturbanceSpec& spec, const UavParams& params);

/// Inertial velocity induced at `point` by the horseshoe of a vehicle in
/// state `source`. Exposed for tests.
Vec3 horseshoe_induced_velocity(const Vec3& point, const UavState& source, const UavParams& params,
                                const VortexParams& vortex);

}  // namespace formation
