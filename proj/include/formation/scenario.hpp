#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "formation/config.hpp"
#include "formation/controller.hpp"
#include "formation/graph.hpp"
#include "formation/planner.hpp"
#include "formation/vehicle.hpp"
#include "formation/wake.hpp"

namespace formation {

struct MetricsSettings {
  double window_start = 100.0;  // s, steady-state window for thrust means and bounds
  double window_end = 120.0;
  double convergence_threshold = 0.1;  // m
};

/// Complete description of one experiment.
struct Scenario {
  std::string name = "custom";
  UavParams uav;
  std::size_t n = 0;
  std::vector<Edge> edges;  // 0-based
  FormationLayout layout;
  FormationCenterState center;
  CenterCommand command;
  std::vector<UavState> initial;
  // Empty means every filter starts on its vehicle's position and velocity.
  std::vector<FilterState> filter_initial;
  FilterGains filter;
  ControllerGains controller;
  Vec3 ude_time_constants = Vec3::Constant(0.2);
  DisturbanceSpec disturbance;
  double dt = 0.01;
  double duration = 120.0;
  std::uint64_t seed = 0;
  MetricsSettings metrics;

  /// Five-vehicle V formation: F-16 class airframes, 7-edge topology, climb
  /// and turn schedule with breakpoints at 10, 40, 45, 50 and 80 s.
  static Scenario vshape5();

  /// Throws ConfigError on violations. Returns non-fatal warnings (for
  /// example a disconnected graph).
  std::vector<std::string> validate() const;

  FormationGraph graph() const { return FormationGraph::build(n, edges); }
  std::vector<FilterState> resolved_filter_initial() const;
};

/// Builds a scenario from a parsed file. Every key must be understood.
Scenario scenario_from_config(Config& cfg);

/// Writes a file that scenario_from_config reads back to the same scenario.
std::string scenario_to_config(const Scenario& sc);

}  // namespace formation
